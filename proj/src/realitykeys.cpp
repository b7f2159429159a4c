// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/realitykeys.hpp>
#include <oraclesim/errors.hpp>
#include <oraclesim/wallet.hpp>

#include <json.hpp>

namespace oraclesim {

std::string_view to_string(Outcome o) { return o == Outcome::Yes ? "yes" : "no"; }

std::optional<Outcome> parse_outcome(std::string_view s)
{
    if (s == "yes" || s == "Yes") return Outcome::Yes;
    if (s == "no" || s == "No") return Outcome::No;
    return std::nullopt;
}

std::string_view to_string(FactState s)
{
    switch (s) {
    case FactState::Registered: return "Registered";
    case FactState::ResultPosted: return "ResultPosted";
    case FactState::Finalized: return "Finalized";
    }
    return "?";
}

std::string_view to_string(SecretStatus s)
{
    switch (s) {
    case SecretStatus::Withheld: return "Withheld";
    case SecretStatus::Released: return "Released";
    case SecretStatus::Destroyed: return "Destroyed";
    }
    return "?";
}

RealityKeys::RealityKeys(const FeedSet& feeds, KeyRegistry& registry, std::string seed, Timestamp objection_window)
    : m_feeds(feeds), m_registry(registry), m_seed(std::move(seed)), m_window(objection_window)
{
    if (m_window < 0) throw Error(Errc::InvalidArgument, "negative objection window");
}

FactInfo& RealityKeys::mut(FactId id)
{
    auto it = m_info.find(id);
    if (it == m_info.end()) throw Error(Errc::UnknownFact, "unknown fact " + std::to_string(id));
    return it->second;
}

const FactInfo& RealityKeys::fact(FactId id) const
{
    auto it = m_info.find(id);
    if (it == m_info.end()) throw Error(Errc::UnknownFact, "unknown fact " + std::to_string(id));
    return it->second;
}

const FactInfo& RealityKeys::register_fact(std::string question, Timestamp resolution_time, SourceRef source, Timestamp now)
{
    if (resolution_time <= now) throw Error(Errc::PastResolution, "resolution time is not in the future");
    (void)m_feeds.at(source.source_id);

    const FactId id = m_next++;
    const auto base = "realitykeys/" + m_seed + "/fact/" + std::to_string(id);
    const auto yes = keygen(base + "/yes");
    const auto no = keygen(base + "/no");
    m_registry.enroll(yes);
    m_registry.enroll(no);

    FactInfo f;
    f.id = id;
    f.question = std::move(question);
    f.resolution_time = resolution_time;
    f.source = std::move(source);
    f.yes_pub = yes.pub;
    f.no_pub = no.pub;
    m_secrets.emplace(id, Secrets{yes.secret, no.secret});
    return m_info.emplace(id, std::move(f)).first->second;
}

const FactInfo& RealityKeys::post_result(FactId id, Timestamp now)
{
    auto& f = mut(id);
    if (f.state != FactState::Registered) throw Error(Errc::InvalidState, "result already posted");
    if (now < f.resolution_time) throw Error(Errc::TooEarly, "resolution time not reached");
    const auto obs = m_feeds.at(f.source.source_id).query(f.source.key, f.resolution_time);
    f.posted_result = compare(obs.value, f.source.cmp, f.source.threshold) ? Outcome::Yes : Outcome::No;
    f.objection_deadline = now + m_window;
    f.state = FactState::ResultPosted;
    return f;
}

const FactInfo& RealityKeys::object(FactId id, Amount tip, Outcome claimed, Timestamp now)
{
    auto& f = mut(id);
    if (f.state == FactState::Registered) throw Error(Errc::InvalidState, "no result posted yet");
    if (f.state == FactState::Finalized || now >= f.objection_deadline) throw Error(Errc::WindowClosed, "objection window closed");
    if (tip < MIN_OBJECTION_TIP) throw Error(Errc::TipTooSmall, "tip below 10 mBTC");
    f.tips_collected += tip;
    f.human_override = m_human ? m_human(f, claimed) : *f.posted_result;
    return f;
}

SecretKey RealityKeys::finalize(FactId id, Timestamp now)
{
    auto& f = mut(id);
    auto& s = m_secrets.at(id);
    if (f.state == FactState::Finalized) return f.final_result == Outcome::Yes ? *s.yes : *s.no;
    if (f.state != FactState::ResultPosted || now < f.objection_deadline) throw Error(Errc::TooEarly, "objection window still open");

    const Outcome result = f.effective_result();
    f.final_result = result;
    f.state = FactState::Finalized;
    if (result == Outcome::Yes)
        s.no.reset();
    else
        s.yes.reset();
    return result == Outcome::Yes ? *s.yes : *s.no;
}

SecretQuery RealityKeys::secret(FactId id, Outcome which) const
{
    const auto& f = fact(id);
    if (f.state != FactState::Finalized) return {SecretStatus::Withheld, std::nullopt};
    if (which != *f.final_result) return {SecretStatus::Destroyed, std::nullopt};
    const auto& s = m_secrets.at(id);
    return {SecretStatus::Released, which == Outcome::Yes ? s.yes : s.no};
}

std::string RealityKeys::export_json() const
{
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [id, f] : m_info) {
        nlohmann::json j;
        j["question"] = f.question;
        j["resolution_time"] = f.resolution_time;
        j["source"] = {{"id", f.source.source_id}, {"key", f.source.key}, {"cmp", to_string(f.source.cmp)}, {"threshold", f.source.threshold}};
        j["yes_pub"] = f.yes_pub.hex();
        j["no_pub"] = f.no_pub.hex();
        j["state"] = to_string(f.state);
        j["posted_result"] = f.posted_result ? nlohmann::json(to_string(*f.posted_result)) : nlohmann::json();
        j["objection_deadline"] = f.objection_deadline;
        j["human_override"] = f.human_override ? nlohmann::json(to_string(*f.human_override)) : nlohmann::json();
        j["final_result"] = f.final_result ? nlohmann::json(to_string(*f.final_result)) : nlohmann::json();
        j["tips_collected"] = f.tips_collected;
        out[std::to_string(id)] = std::move(j);
    }
    return out.dump();
}

KeyPair demo_makekeys(std::string_view seed) { return keygen("realitykeysdemo/" + std::string(seed)); }

LockScript demo_redeem(const DemoTerms& t)
{
    return LockScript::any_of({LockScript::multisig(2, {t.alice_pub, t.yes_pub}), LockScript::multisig(2, {t.bob_pub, t.no_pub})});
}

Transaction demo_unsigned_setup(const DemoTerms& t)
{
    const Amount value = t.alice_stake + t.bob_stake - t.fee;
    if (t.alice_stake <= 0 || t.bob_stake <= 0 || t.fee < 0 || value <= 0)
        throw Error(Errc::InvalidArgument, "stakes must be positive and exceed the fee");
    Transaction tx;
    tx.inputs.push_back(TxIn{t.alice_temp, {}});
    tx.inputs.push_back(TxIn{t.bob_temp, {}});
    tx.outputs.push_back(TxOut{value, p2sh_lock(demo_redeem(t))});
    return tx;
}

namespace {

void require_temp(const Chain& chain, const OutPoint& op, const PubKey& owner, Amount stake)
{
    const Coin* c = chain.utxos().find(op);
    const auto* p2k = c ? c->out.lock.as<PayToKey>() : nullptr;
    if (!p2k || p2k->key != owner || c->out.value != stake)
        throw Error(Errc::InvalidState, "temporary address not funded with the agreed stake");
}

} // namespace

Transaction demo_setup(const Chain& chain, const DemoTerms& terms, const KeyPair& alice)
{
    if (alice.pub != terms.alice_pub) throw Error(Errc::InvalidArgument, "setup must be built by alice");
    require_temp(chain, terms.alice_temp, terms.alice_pub, terms.alice_stake);
    require_temp(chain, terms.bob_temp, terms.bob_pub, terms.bob_stake);
    auto tx = demo_unsigned_setup(terms);
    sign_input(tx, 0, alice.secret);
    return tx;
}

Transaction demo_countersign(const Chain& chain, const DemoTerms& bob_terms, const KeyPair& bob, const Transaction& partial)
{
    if (bob.pub != bob_terms.bob_pub) throw Error(Errc::InvalidArgument, "countersign must be done by bob");
    const auto rebuilt = demo_unsigned_setup(bob_terms);
    if (rebuilt.serialize_unsigned() != partial.serialize_unsigned())
        throw Error(Errc::ReconstructionMismatch, "rebuilt setup transaction differs from the proposal");
    require_temp(chain, bob_terms.bob_temp, bob_terms.bob_pub, bob_terms.bob_stake);
    auto tx = partial;
    sign_input(tx, 1, bob.secret);
    return tx;
}

Transaction demo_claim(const RealityKeys& rk, const DemoTerms& terms, const OutPoint& contract, Amount contract_value,
                       const KeyPair& claimant, const PubKey& dest, Amount fee)
{
    const auto& f = rk.fact(terms.fact_id);
    if (f.state != FactState::Finalized) throw Error(Errc::NotFinalized, "fact not finalized");

    Outcome branch;
    if (claimant.pub == terms.alice_pub)
        branch = Outcome::Yes;
    else if (claimant.pub == terms.bob_pub)
        branch = Outcome::No;
    else
        throw Error(Errc::WrongBranch, "claimant is not a party to the contract");
    if (branch != *f.final_result) throw Error(Errc::WrongBranch, "claimant's branch lost");

    const auto released = rk.secret(terms.fact_id, branch);
    if (released.status != SecretStatus::Released) throw Error(Errc::NotFinalized, "fact secret unavailable");
    if (fee < 0 || fee >= contract_value) throw Error(Errc::InvalidArgument, "fee outside [0, value)");

    auto tx = spend_to(contract, dest, contract_value - fee);
    tx.inputs[0].witness.redeem = demo_redeem(terms);
    sign_input(tx, 0, claimant.secret);
    sign_input(tx, 0, *released.secret);
    return tx;
}

Transaction demo_refund(const Chain& chain, const OutPoint& temp, const KeyPair& party, const PubKey& dest, Amount fee)
{
    const Coin* c = chain.utxos().find(temp);
    if (!c) throw Error(Errc::AlreadySpent, "temporary coin already spent");
    const auto* p2k = c->out.lock.as<PayToKey>();
    if (!p2k || p2k->key != party.pub) throw Error(Errc::InvalidArgument, "temporary coin belongs to someone else");
    if (fee < 0 || fee >= c->out.value) throw Error(Errc::InvalidArgument, "fee outside [0, value)");
    auto tx = spend_to(temp, dest, c->out.value - fee);
    sign_input(tx, 0, party.secret);
    return tx;
}

} // namespace oraclesim

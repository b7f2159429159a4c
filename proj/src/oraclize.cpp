// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/oraclize.hpp>
#include <oraclesim/errors.hpp>
#include <oraclesim/wallet.hpp>

#include <json.hpp>

namespace oraclesim::oraclize {

Interval Interval::of(Comparator cmp, double t)
{
    Interval i;
    switch (cmp) {
    case Comparator::Lt: i.hi = t; break;
    case Comparator::Le: i.hi = t; i.hi_closed = true; break;
    case Comparator::Eq: i.lo = i.hi = t; i.lo_closed = i.hi_closed = true; break;
    case Comparator::Ge: i.lo = t; i.lo_closed = true; break;
    case Comparator::Gt: i.lo = t; break;
    case Comparator::IsTrue: throw Error(Errc::InvalidArgument, "event-true has no numeric interval");
    }
    return i;
}

bool Interval::contains(double x) const
{
    const bool above = lo_closed ? x >= lo : x > lo;
    const bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
}

bool Interval::intersects(const Interval& o) const
{
    double l = lo;
    bool lc = lo_closed;
    if (o.lo > l || (o.lo == l && !o.lo_closed)) {
        lc = o.lo == l ? (lc && o.lo_closed) : o.lo_closed;
        l = o.lo;
    }
    double h = hi;
    bool hc = hi_closed;
    if (o.hi < h || (o.hi == h && !o.hi_closed)) {
        hc = o.hi == h ? (hc && o.hi_closed) : o.hi_closed;
        h = o.hi;
    }
    return l < h || (l == h && lc && hc);
}

bool conditions_overlap(const Condition& a, const Condition& b)
{
    if (a.source_id != b.source_id || a.key != b.key) return false;
    const bool ea = a.cmp == Comparator::IsTrue, eb = b.cmp == Comparator::IsTrue;
    if (ea || eb) return ea && eb;
    return Interval::of(a.cmp, a.threshold).intersects(Interval::of(b.cmp, b.threshold));
}

void check_terms(const ContractTerms& t, const FeedSet& feeds)
{
    if (t.end <= t.start) throw Error(Errc::EmptyTimeframe, "timeframe end must follow start");
    if (t.poll_interval <= 0) throw Error(Errc::InvalidArgument, "poll interval must be positive");
    if (t.conditions.empty()) throw Error(Errc::InvalidArgument, "contract needs at least one condition");
    if (t.alice_stake < 0 || t.bob_stake < 0 || t.alice_stake + t.bob_stake <= 0) throw Error(Errc::InvalidArgument, "stakes must be non-negative and sum positive");
    if (t.fee < 0 || t.fee >= t.alice_stake + t.bob_stake) throw Error(Errc::InvalidArgument, "fee outside [0, value)");
    for (const auto& c : t.conditions)
        if (!feeds.at(c.source_id).ssl()) throw Error(Errc::NonSSLSource, "source '" + c.source_id + "' lacks SSL");
    for (std::size_t i = 0; i < t.conditions.size(); ++i)
        for (std::size_t j = i + 1; j < t.conditions.size(); ++j)
            if (conditions_overlap(t.conditions[i], t.conditions[j]))
                throw Error(Errc::OverlappingConditions, "conditions " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
}

std::string_view to_string(ContractState s)
{
    switch (s) {
    case ContractState::Active: return "Active";
    case ContractState::SettledCondition: return "SettledCondition";
    case ContractState::SettledDefault: return "SettledDefault";
    case ContractState::Refunded: return "Refunded";
    }
    return "?";
}

LockScript ConditionalContract::funding_lock() const
{
    return LockScript::multisig(2, {m_terms.alice, m_terms.bob, m_terms.arbitrator.value_or(m_terms.oracle)});
}

ConditionalContract ConditionalContract::build(const Chain& chain, ContractTerms terms, const FeedSet& feeds, const KeyPair& alice,
                                               const KeyPair& bob, const Mempool* pool)
{
    check_terms(terms, feeds);
    if (alice.pub != terms.alice || bob.pub != terms.bob) throw Error(Errc::InvalidArgument, "funding keys do not match the terms");

    ConditionalContract c;
    c.m_terms = std::move(terms);
    const auto& t = c.m_terms;

    // Alice pays the funding fee; each side's change returns to itself.
    Transaction tx;
    tx.outputs.push_back(TxOut{c.value(), c.funding_lock()});
    std::vector<const KeyPair*> signers;
    auto gather = [&](const KeyPair& who, Amount need) {
        if (need <= 0) return;
        Amount got = 0;
        for (const auto& [op, coin] : spendable_coins(chain, who.pub, pool)) {
            if (got >= need) break;
            tx.inputs.push_back(TxIn{op, {}});
            signers.push_back(&who);
            got += coin.out.value;
        }
        if (got < need) throw Error(Errc::InsufficientFunds, "cannot cover stake of " + std::to_string(need));
        if (got > need) tx.outputs.push_back(TxOut{got - need, LockScript::pay_to_key(who.pub)});
    };
    gather(alice, t.alice_stake + t.fee);
    gather(bob, t.bob_stake);
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) sign_input(tx, i, signers[i]->secret);
    c.m_funding = std::move(tx);
    c.m_funding_txid = c.m_funding.txid();

    // The refund returns each stake less half the fee.
    Transaction refund;
    refund.inputs.push_back(TxIn{c.funding_outpoint(), {}});
    const Amount alice_back = t.alice_stake - t.fee / 2;
    const Amount bob_back = t.bob_stake - (t.fee - t.fee / 2);
    if (alice_back > 0) refund.outputs.push_back(TxOut{alice_back, LockScript::pay_to_key(t.alice)});
    if (bob_back > 0) refund.outputs.push_back(TxOut{bob_back, LockScript::pay_to_key(t.bob)});
    if (refund.output_total() != c.value() - t.fee) throw Error(Errc::InvalidArgument, "stakes too small to cover the refund fee");
    refund.locktime = t.refund_locktime;
    sign_input(refund, 0, alice.secret);
    sign_input(refund, 0, bob.secret);
    c.m_refund = std::move(refund);
    return c;
}

bool ConditionalContract::is_poll_time(Timestamp now) const
{
    return now >= m_terms.start && now < m_terms.end && (now - m_terms.start) % m_terms.poll_interval == 0;
}

void ConditionalContract::require_active() const
{
    if (m_state != ContractState::Active) throw Error(Errc::AlreadySettled, "contract already " + std::string(to_string(m_state)));
}

Transaction ConditionalContract::settlement_to(const PubKey& payee) const
{
    return spend_to(funding_outpoint(), payee, value() - m_terms.fee);
}

std::optional<SignedSettlement> ConditionalContract::poll(const OracleService& oracle, Timestamp now)
{
    require_active();
    if (!oracle.online) throw Error(Errc::InvalidState, "oracle offline");
    if (!oracle.feeds) throw Error(Errc::InvalidArgument, "oracle has no feeds");
    if (!is_poll_time(now)) throw Error(Errc::BadPollTime, "not a scheduled poll time: " + std::to_string(now));

    for (std::size_t i = 0; i < m_terms.conditions.size(); ++i) {
        const auto& cond = m_terms.conditions[i];
        const auto& source = oracle.feeds->at(cond.source_id);
        std::optional<Observation> obs;
        try {
            obs = source.query(cond.key, now);
        } catch (const Error& e) {
            if (e.code() != Errc::NoData) throw;
            continue;
        }
        if (!compare(obs->value, cond.cmp, cond.threshold)) continue;

        auto proof = make_proof(source, cond.key, now, oracle.attestor_id);
        if (oracle.tamper) oracle.tamper(proof);
        const bool verified = verify_proof(proof, *obs);

        AuditRecord rec;
        rec.time = now;
        rec.condition = i;
        rec.observation = obs;
        rec.proof = proof;
        rec.verified_before_signing = m_terms.proofshield;
        rec.audit_passed = verified;
        if (m_terms.proofshield && !verified) {
            rec.note = "proofshield refused to sign";
            m_audit.push_back(std::move(rec));
            throw Error(Errc::ProofInvalid, "authenticity proof failed verification");
        }
        rec.signed_ = true;
        if (!verified) rec.note = "signed without verification; audit failed";
        m_audit.push_back(std::move(rec));

        SignedSettlement s;
        s.tx = settlement_to(cond.beneficiary);
        s.condition = i;
        s.observation = std::move(obs);
        s.proof = std::move(proof);
        s.verified_before_signing = m_terms.proofshield;
        s.signature = sign(oracle.keys.secret, s.tx.sighash(0));
        s.tx.inputs[0].witness.signatures.push_back(s.signature);
        s.pays_to = cond.beneficiary;
        m_state = ContractState::SettledCondition;
        m_settled_condition = i;
        return s;
    }
    return std::nullopt;
}

SignedSettlement ConditionalContract::settle_default(const OracleService& oracle, Timestamp now)
{
    require_active();
    if (now < m_terms.end) throw Error(Errc::TooEarly, "timeframe not over");
    if (!oracle.online) throw Error(Errc::InvalidState, "oracle offline");

    SignedSettlement s;
    s.tx = settlement_to(m_terms.default_beneficiary);
    s.signature = sign(oracle.keys.secret, s.tx.sighash(0));
    s.tx.inputs[0].witness.signatures.push_back(s.signature);
    s.pays_to = m_terms.default_beneficiary;
    AuditRecord rec;
    rec.time = now;
    rec.signed_ = true;
    rec.audit_passed = true;
    rec.note = "default settlement";
    m_audit.push_back(std::move(rec));
    m_state = ContractState::SettledDefault;
    return s;
}

SignedSettlement ConditionalContract::arbitrate(const KeyPair& carol, const PubKey& pays_to, Timestamp now)
{
    require_active();
    if (!m_terms.arbitrator || *m_terms.arbitrator != carol.pub) throw Error(Errc::InvalidArgument, "not this contract's arbitrator");
    SignedSettlement s;
    s.tx = settlement_to(pays_to);
    s.signature = sign(carol.secret, s.tx.sighash(0));
    s.tx.inputs[0].witness.signatures.push_back(s.signature);
    s.pays_to = pays_to;
    AuditRecord rec;
    rec.time = now;
    rec.signed_ = true;
    rec.audit_passed = true;
    rec.note = "arbitrated";
    m_audit.push_back(std::move(rec));
    m_state = pays_to == m_terms.default_beneficiary ? ContractState::SettledDefault : ContractState::SettledCondition;
    return s;
}

const Transaction& ConditionalContract::refund_expiry(Height height)
{
    require_active();
    if (height < m_terms.refund_locktime) throw Error(Errc::TooEarly, "refund locktime not reached");
    m_state = ContractState::Refunded;
    return m_refund;
}

Transaction ConditionalContract::co_sign(const SignedSettlement& s, const KeyPair& signer, const SignatureVerifier& verifier) const
{
    auto tx = s.tx;
    sign_input(tx, 0, signer.secret);
    if (check_lock(funding_lock(), tx.inputs[0].witness, tx.sighash(0), 0, verifier))
        throw Error(Errc::BadWitness, "settlement still lacks two valid signatures");
    return tx;
}

std::string ConditionalContract::audit_json() const
{
    using nlohmann::json;
    json arr = json::array();
    for (const auto& r : m_audit) {
        json j;
        j["time"] = r.time;
        j["condition"] = r.condition ? json(*r.condition) : json();
        if (r.observation)
            j["observation"] = {{"source", r.observation->source_id}, {"key", r.observation->key}, {"time", r.observation->time},
                                {"value", feed_value_to_string(r.observation->value)}};
        if (r.proof)
            j["proof"] = {{"key", r.proof->key},
                          {"time", r.proof->time},
                          {"response_digest", r.proof->response_digest.hex()},
                          {"source_id", r.proof->source_id},
                          {"attestor_id", r.proof->attestor_id},
                          {"attestation", r.proof->attestation.hex()}};
        j["verified_before_signing"] = r.verified_before_signing;
        j["audit_passed"] = r.audit_passed;
        j["signed"] = r.signed_;
        j["note"] = r.note;
        arr.push_back(std::move(j));
    }
    return arr.dump();
}

} // namespace oraclesim::oraclize

// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/orisi.hpp>
#include <oraclesim/errors.hpp>
#include <oraclesim/hash.hpp>
#include <oraclesim/wallet.hpp>

#include <algorithm>

namespace oraclesim {

SafeParams compute_safe_params(int m, int n)
{
    if (m < 1 || m > n) throw Error(Errc::BadQuorum, "need 1 <= m <= n, got m=" + std::to_string(m) + " n=" + std::to_string(n));
    SafeParams p;
    p.m = m;
    p.n = n;
    p.threshold = n + 1;
    p.total_keys = 2 * n - m + 1;
    p.agent_keys = n - m + 1;
    if (p.total_keys > static_cast<int>(MAX_MULTISIG_KEYS))
        throw Error(Errc::KeyLimitExceeded, "safe needs " + std::to_string(p.total_keys) + " keys, limit is 15");
    return p;
}

Hash256 BusMessage::work_hash() const
{
    ByteWriter w;
    w.raw(payload);
    w.u64(nonce);
    return sha256(w.data());
}

Bytes BusMessage::serialize() const
{
    ByteWriter w;
    w.var_bytes(payload);
    w.u64(nonce);
    w.u8(static_cast<std::uint8_t>(difficulty));
    return std::move(w).take();
}

BusMessage BusMessage::deserialize(ByteView data)
{
    ByteReader r(data);
    BusMessage m;
    m.payload = r.var_bytes();
    m.nonce = r.u64();
    m.difficulty = r.u8();
    if (!r.done()) throw Error(Errc::Malformed, "trailing bytes after bus message");
    return m;
}

BusMessage seal_message(Bytes payload, unsigned difficulty)
{
    if (difficulty > 32) throw Error(Errc::InvalidArgument, "bus difficulty above 32 bits");
    BusMessage m{std::move(payload), 0, difficulty};
    while (leading_zero_bits(m.work_hash()) < difficulty) ++m.nonce;
    return m;
}

bool pow_valid(const BusMessage& msg) { return leading_zero_bits(msg.work_hash()) >= msg.difficulty; }

std::vector<BusMessage> MessageBus::drain()
{
    std::vector<BusMessage> out;
    while (!m_queue.empty()) {
        auto msg = std::move(m_queue.front());
        m_queue.pop_front();
        if (msg.difficulty < m_min || !pow_valid(msg)) {
            ++m_dropped;
            continue;
        }
        out.push_back(std::move(msg));
    }
    return out;
}

std::string_view to_string(Draft d) { return d == Draft::Unlock ? "unlock" : "refund"; }

std::string_view to_string(OrisiState s)
{
    switch (s) {
    case OrisiState::Proposed: return "Proposed";
    case OrisiState::Acked: return "Acked";
    case OrisiState::Active: return "Active";
    case OrisiState::Settled: return "Settled";
    case OrisiState::Refunded: return "Refunded";
    }
    return "?";
}

std::vector<TxOut> standard_fee_outputs(std::span<const OracleInfo> oracles, Amount oracle_fee, const PubKey& project_pub,
                                        Amount project_fee)
{
    std::vector<TxOut> out;
    for (const auto& o : oracles) out.push_back(TxOut{oracle_fee, LockScript::pay_to_key(o.pub)});
    out.push_back(TxOut{project_fee, LockScript::pay_to_key(project_pub)});
    return out;
}

std::vector<KeyPair> make_agent_keys(std::string_view seed, int count)
{
    std::vector<KeyPair> out;
    for (int i = 0; i < count; ++i) out.push_back(keygen("orisi/agent/" + std::string(seed) + "/" + std::to_string(i)));
    return out;
}

Bytes SignatureNotice::encode() const
{
    ByteWriter w;
    w.str("orisi/sig");
    w.blob(contract_id);
    w.str(oracle_id);
    w.u8(draft == Draft::Unlock ? 0 : 1);
    w.blob(sig.signer);
    w.blob(sig.digest);
    w.blob(sig.tag);
    return std::move(w).take();
}

SignatureNotice SignatureNotice::decode(ByteView data)
{
    ByteReader r(data);
    if (r.str() != "orisi/sig") throw Error(Errc::Malformed, "not an orisi signature notice");
    SignatureNotice n;
    n.contract_id = r.blob<HashTag>();
    n.oracle_id = r.str();
    const auto d = r.u8();
    if (d > 1) throw Error(Errc::Malformed, "bad draft tag");
    n.draft = d == 0 ? Draft::Unlock : Draft::Refund;
    n.sig.signer = r.blob<PubKeyTag>();
    n.sig.digest = r.blob<HashTag>();
    n.sig.tag = r.blob<HashTag>();
    if (!r.done()) throw Error(Errc::Malformed, "trailing bytes after notice");
    return n;
}

LockScript OrisiContract::safe_redeem() const
{
    std::vector<PubKey> keys;
    for (const auto& o : m_oracles) keys.push_back(o.pub);
    keys.insert(keys.end(), m_agents.begin(), m_agents.end());
    return LockScript::multisig(static_cast<std::size_t>(m_params.threshold), std::move(keys));
}

OrisiContract OrisiContract::propose(const Chain& chain, const KeyPair& alice, const PubKey& bob, std::vector<OracleInfo> oracles,
                                     int m, std::span<const PubKey> agent_pubs, OrisiCondition condition, Amount amount,
                                     std::vector<TxOut> fee_outputs, Amount tx_fee, Amount funding_fee, const Mempool* pool)
{
    OrisiContract c;
    c.m_params = compute_safe_params(m, static_cast<int>(oracles.size()));
    if (amount <= 0) throw Error(Errc::InvalidArgument, "contract amount must be positive");
    if (static_cast<int>(agent_pubs.size()) != c.m_params.agent_keys)
        throw Error(Errc::InvalidArgument, "need exactly " + std::to_string(c.m_params.agent_keys) + " agent keys");
    if (static_cast<int>(fee_outputs.size()) != c.m_params.n + 1)
        throw Error(Errc::InvalidArgument, "fee outputs must cover every oracle plus the project");
    if (tx_fee < 0) throw Error(Errc::InvalidArgument, "negative fee");
    Amount fees = tx_fee;
    for (const auto& f : fee_outputs) {
        if (f.value <= 0) throw Error(Errc::InvalidArgument, "fee outputs must be positive");
        fees += f.value;
    }
    if (fees >= amount) throw Error(Errc::InvalidArgument, "fees consume the whole amount");

    c.m_oracles = std::move(oracles);
    c.m_agents.assign(agent_pubs.begin(), agent_pubs.end());
    c.m_condition = std::move(condition);
    c.m_amount = amount;
    c.m_funding = build_payment(chain, alice, {TxOut{amount, p2sh_lock(c.safe_redeem())}}, funding_fee, pool);
    c.m_id = c.m_funding.txid();

    auto draft_to = [&](const PubKey& payee) {
        Transaction tx;
        tx.inputs.push_back(TxIn{c.safe_outpoint(), {}});
        tx.outputs.push_back(TxOut{amount - fees, LockScript::pay_to_key(payee)});
        tx.outputs.insert(tx.outputs.end(), fee_outputs.begin(), fee_outputs.end());
        return tx;
    };
    c.m_unlock = draft_to(bob);
    c.m_refund = draft_to(alice.pub);
    return c;
}

const OracleInfo* OrisiContract::find_oracle(const std::string& id) const
{
    for (const auto& o : m_oracles)
        if (o.id == id) return &o;
    return nullptr;
}

void OrisiContract::oracle_ack(const OracleNode& oracle)
{
    auto fail = [&](const std::string& why) { throw Error(Errc::VerificationFailed, "oracle " + oracle.id + ": " + why); };
    if (m_state != OrisiState::Proposed && m_state != OrisiState::Acked) throw Error(Errc::InvalidState, "contract already active");

    const auto* listed = find_oracle(oracle.id);
    if (!listed || listed->pub != oracle.keys.pub) fail("not in the oracle set");
    if (!oracle.feed || oracle.feed->id() != m_condition.source_id) fail("cannot evaluate the condition");
    if (m_funding.outputs.empty() || m_funding.outputs[0].lock != p2sh_lock(safe_redeem()) || m_funding.outputs[0].value != m_amount)
        fail("funding does not pay the safe");

    for (const auto* d : {&m_unlock, &m_refund}) {
        if (d->inputs.size() != 1 || d->inputs[0].prevout != safe_outpoint()) fail("draft does not spend the safe");
        if (d->output_total() > m_amount) fail("draft overspends the safe");
        bool paid = false;
        for (const auto& out : d->outputs) {
            const auto* p2k = out.lock.as<PayToKey>();
            if (p2k && p2k->key == oracle.keys.pub && out.value >= oracle.required_fee) paid = true;
        }
        if (!paid) fail("draft lacks this oracle's fee");
    }

    m_acks.insert(oracle.id);
    if (m_acks.size() == m_oracles.size()) m_state = OrisiState::Acked;
}

const Transaction& OrisiContract::activate()
{
    if (m_state == OrisiState::Active) return m_funding;
    if (m_state != OrisiState::Acked)
        throw Error(Errc::NotAllAcked, std::to_string(m_acks.size()) + "/" + std::to_string(m_oracles.size()) + " oracles acknowledged");
    m_state = OrisiState::Active;
    return m_funding;
}

std::optional<BusMessage> OrisiContract::poll_and_sign(const OracleNode& oracle, Timestamp now, unsigned difficulty) const
{
    if (m_state != OrisiState::Active) return std::nullopt;
    const auto* listed = find_oracle(oracle.id);
    if (!listed || listed->pub != oracle.keys.pub || !oracle.feed) throw Error(Errc::InvalidArgument, "not an oracle of this contract");

    std::optional<Draft> pick;
    try {
        const auto obs = oracle.feed->query(m_condition.key, now);
        if (compare(obs.value, m_condition.cmp, m_condition.threshold))
            pick = Draft::Unlock;
        else if (now >= m_condition.settle_time)
            pick = Draft::Refund;
    } catch (const Error& e) {
        if (e.code() != Errc::NoData) throw;
    }
    if (!pick) return std::nullopt;

    SignatureNotice n{m_id, oracle.id, *pick, sign(oracle.keys.secret, draft(*pick).sighash(0))};
    return seal_message(n.encode(), difficulty);
}

bool OrisiContract::receive(const BusMessage& msg, const SignatureVerifier& verifier)
{
    SignatureNotice n;
    try {
        n = SignatureNotice::decode(msg.payload);
    } catch (const Error&) {
        return false;
    }
    if (n.contract_id != m_id) return false;
    const auto* o = find_oracle(n.oracle_id);
    if (!o || n.sig.signer != o->pub) return false;
    try {
        if (!verifier.verify(n.sig, o->pub, draft(n.draft).sighash(0))) return false;
    } catch (const Error&) {
        return false;
    }
    m_sigs[n.draft].insert_or_assign(n.oracle_id, n.sig);
    return true;
}

std::size_t OrisiContract::signature_count(Draft d) const
{
    auto it = m_sigs.find(d);
    return it == m_sigs.end() ? 0 : it->second.size();
}

Transaction OrisiContract::assemble(Draft d, std::span<const KeyPair> agent_keys) const
{
    auto tx = draft(d);
    auto& w = tx.inputs[0].witness;
    w.redeem = safe_redeem();
    if (auto it = m_sigs.find(d); it != m_sigs.end())
        for (const auto& o : m_oracles)
            if (auto s = it->second.find(o.id); s != it->second.end()) w.signatures.push_back(s->second);
    for (const auto& k : agent_keys) sign_input(tx, 0, k.secret);
    return tx;
}

Transaction OrisiContract::finalize(Draft d, std::span<const KeyPair> agent_keys, const SignatureVerifier& verifier)
{
    if (m_finalized && *m_finalized != d) throw Error(Errc::InvalidState, "the other draft was already finalized");
    if (m_state != OrisiState::Active && !m_finalized) throw Error(Errc::InvalidState, "contract not active");

    std::set<PubKey> agents;
    for (const auto& k : agent_keys)
        if (std::find(m_agents.begin(), m_agents.end(), k.pub) != m_agents.end()) agents.insert(k.pub);
    const auto have = signature_count(d) + agents.size();
    if (have < static_cast<std::size_t>(m_params.threshold))
        throw Error(Errc::QuorumNotReached, std::to_string(have) + " of " + std::to_string(m_params.threshold) + " signatures");

    auto tx = assemble(d, agent_keys);
    if (check_lock(p2sh_lock(safe_redeem()), tx.inputs[0].witness, tx.sighash(0), 0, verifier))
        throw Error(Errc::BadWitness, "assembled witness does not satisfy the safe");
    m_finalized = d;
    m_state = d == Draft::Unlock ? OrisiState::Settled : OrisiState::Refunded;
    return tx;
}

} // namespace oraclesim

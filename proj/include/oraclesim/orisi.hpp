// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_ORISI_HPP
#define ORACLESIM_ORISI_HPP

#include <oraclesim/chain.hpp>
#include <oraclesim/datafeed.hpp>
#include <oraclesim/mempool.hpp>

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace oraclesim {

/**
 * An m-of-n oracle majority padded into an (n+1)-of-(2n-m+1) safe: the
 * n-m+1 extra keys belong to the agents, so the oracles alone never reach
 * the threshold while m of them plus the agents do.
 */
struct SafeParams {
    int m = 0;
    int n = 0;
    int threshold = 0;
    int total_keys = 0;
    int agent_keys = 0;
};

/** Errors: BadQuorum (m < 1 or m > n), KeyLimitExceeded (total over 15). */
SafeParams compute_safe_params(int m, int n);

inline constexpr unsigned DEFAULT_BUS_DIFFICULTY = 8;
inline constexpr Timestamp DEFAULT_POLL_INTERVAL = 3'600;

struct BusMessage {
    Bytes payload;
    std::uint64_t nonce = 0;
    unsigned difficulty = DEFAULT_BUS_DIFFICULTY;

    Hash256 work_hash() const;
    Bytes serialize() const;
    static BusMessage deserialize(ByteView data);
};

/** Search nonces from 0 upward until the work hash has `difficulty` leading zero bits. */
BusMessage seal_message(Bytes payload, unsigned difficulty = DEFAULT_BUS_DIFFICULTY);
bool pow_valid(const BusMessage& msg);

/** Ordered in-memory queue. Messages without enough work are dropped at delivery. */
class MessageBus {
public:
    explicit MessageBus(unsigned min_difficulty = DEFAULT_BUS_DIFFICULTY) : m_min(min_difficulty) {}

    void post(BusMessage msg) { m_queue.push_back(std::move(msg)); }
    std::vector<BusMessage> drain();

    std::size_t dropped() const { return m_dropped; }
    std::size_t pending() const { return m_queue.size(); }

private:
    unsigned m_min;
    std::deque<BusMessage> m_queue;
    std::size_t m_dropped = 0;
};

/** `value <cmp> threshold` on (source, key), settled false once settle_time passes without it holding. */
struct OrisiCondition {
    std::string source_id;
    std::string key;
    Comparator cmp = Comparator::IsTrue;
    double threshold = 0.0;
    Timestamp settle_time = 0;
};

struct OracleInfo {
    std::string id;
    PubKey pub;
};

/** An oracle actor: its keys, the feed it reads and the fee it demands. */
struct OracleNode {
    std::string id;
    KeyPair keys;
    const DataSource* feed = nullptr;
    Amount required_fee = 0;

    OracleInfo info() const { return {id, keys.pub}; }
};

enum class Draft { Unlock, Refund };
std::string_view to_string(Draft d);

enum class OrisiState { Proposed, Acked, Active, Settled, Refunded };
std::string_view to_string(OrisiState s);

/** One fee output per oracle, in oracle order, then the project fee. */
std::vector<TxOut> standard_fee_outputs(std::span<const OracleInfo> oracles, Amount oracle_fee, const PubKey& project_pub,
                                        Amount project_fee);

/** Padding keys shared by the two agents. */
std::vector<KeyPair> make_agent_keys(std::string_view seed, int count);

struct SignatureNotice {
    Hash256 contract_id;
    std::string oracle_id;
    Draft draft = Draft::Unlock;
    Signature sig;

    Bytes encode() const;
    static SignatureNotice decode(ByteView data);
};

class OrisiContract {
public:
    /**
     * Alice pre-signs (but does not broadcast) her funding of the safe, then
     * drafts the unlock (to Bob) and refund (to her) transactions spending it.
     * `fee_outputs` must hold exactly n + 1 entries.
     */
    static OrisiContract propose(const Chain& chain, const KeyPair& alice, const PubKey& bob, std::vector<OracleInfo> oracles,
                                 int m, std::span<const PubKey> agent_pubs, OrisiCondition condition, Amount amount,
                                 std::vector<TxOut> fee_outputs, Amount tx_fee, Amount funding_fee, const Mempool* pool = nullptr);

    const SafeParams& params() const { return m_params; }
    const std::vector<OracleInfo>& oracles() const { return m_oracles; }
    const std::vector<PubKey>& agent_pubs() const { return m_agents; }
    const OrisiCondition& condition() const { return m_condition; }
    OrisiState state() const { return m_state; }
    const std::set<std::string>& acks() const { return m_acks; }
    const Hash256& id() const { return m_id; }

    LockScript safe_redeem() const;
    const Transaction& funding_tx() const { return m_funding; }
    OutPoint safe_outpoint() const { return {m_id, 0}; }
    Amount amount() const { return m_amount; }
    const Transaction& draft(Draft d) const { return d == Draft::Unlock ? m_unlock : m_refund; }

    /** The oracle checks the drafts, the safe and its fee. Errors: VerificationFailed. */
    void oracle_ack(const OracleNode& oracle);

    /** The pre-signed funding tx to broadcast. Errors: NotAllAcked. */
    const Transaction& activate();

    /**
     * Read the condition at `now`. True signs the unlock draft; false at or
     * after settle_time signs the refund; otherwise, or on NoData, nothing.
     * The sealed notice is returned for posting on the bus.
     */
    std::optional<BusMessage> poll_and_sign(const OracleNode& oracle, Timestamp now, unsigned difficulty = DEFAULT_BUS_DIFFICULTY) const;

    /**
     * Accept a notice off the bus. Ignores notices for other contracts;
     * returns false for bad signatures or unknown oracles.
     */
    bool receive(const BusMessage& msg, const SignatureVerifier& verifier);

    std::size_t signature_count(Draft d) const;

    /** Witness from every collected oracle signature plus the given agent keys. No quorum check. */
    Transaction assemble(Draft d, std::span<const KeyPair> agent_keys) const;

    /** Errors: QuorumNotReached, BadWitness, InvalidState (other draft already finalized). */
    Transaction finalize(Draft d, std::span<const KeyPair> agent_keys, const SignatureVerifier& verifier);

    std::optional<Draft> finalized() const { return m_finalized; }

private:
    OrisiContract() = default;
    const OracleInfo* find_oracle(const std::string& id) const;

    SafeParams m_params;
    std::vector<OracleInfo> m_oracles;
    std::vector<PubKey> m_agents;
    OrisiCondition m_condition;
    Amount m_amount = 0;
    Transaction m_funding;
    Hash256 m_id;
    Transaction m_unlock;
    Transaction m_refund;
    OrisiState m_state = OrisiState::Proposed;
    std::set<std::string> m_acks;
    std::map<Draft, std::map<std::string, Signature>> m_sigs;
    std::optional<Draft> m_finalized;
};

} // namespace oraclesim

#endif // ORACLESIM_ORISI_HPP

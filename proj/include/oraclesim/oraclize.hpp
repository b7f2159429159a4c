// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_ORACLIZE_HPP
#define ORACLESIM_ORACLIZE_HPP

#include <oraclesim/chain.hpp>
#include <oraclesim/datafeed.hpp>
#include <oraclesim/mempool.hpp>

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace oraclesim::oraclize {

inline constexpr Timestamp DEFAULT_POLL_INTERVAL = 3'600;

struct Condition {
    std::string source_id;
    std::string key;
    Comparator cmp = Comparator::Gt;
    double threshold = 0.0;
    PubKey beneficiary;
};

/** The numeric values a comparator accepts, as one interval of the real line. */
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    bool lo_closed = false;
    double hi = std::numeric_limits<double>::infinity();
    bool hi_closed = false;

    static Interval of(Comparator cmp, double threshold);
    bool contains(double x) const;
    bool intersects(const Interval& o) const;
};

/**
 * Can one observation satisfy both? Only conditions on the same (source,
 * key) can. Two event-true conditions always overlap; an event-true and a
 * numeric one never do, since one value cannot be both a boolean and a
 * number.
 */
bool conditions_overlap(const Condition& a, const Condition& b);

struct ContractTerms {
    PubKey alice;
    PubKey bob;
    PubKey oracle;
    std::optional<PubKey> arbitrator; //!< takes the oracle's slot in the 2-of-3
    std::vector<Condition> conditions;
    PubKey default_beneficiary;
    Timestamp start = 0;
    Timestamp end = 0;
    Timestamp poll_interval = DEFAULT_POLL_INTERVAL;
    Height refund_locktime = 0;
    bool proofshield = true;
    Amount alice_stake = 0;
    Amount bob_stake = 0;
    Amount fee = 0; //!< per spend of the funding output
};

/** Errors: OverlappingConditions, NonSSLSource, EmptyTimeframe, UnknownSource, InvalidArgument. */
void check_terms(const ContractTerms& terms, const FeedSet& feeds);

/** The oracle actor. `tamper`, when set, corrupts each proof after it is made. */
struct OracleService {
    KeyPair keys;
    const FeedSet* feeds = nullptr;
    std::string attestor_id = "oraclize";
    bool online = true;
    std::function<void(AuthenticityProof&)> tamper;
};

struct AuditRecord {
    Timestamp time = 0;
    std::optional<std::size_t> condition;
    std::optional<Observation> observation;
    std::optional<AuthenticityProof> proof;
    bool verified_before_signing = false;
    bool audit_passed = false; //!< proof re-verified against the observation
    bool signed_ = false;
    std::string note;
};

struct SignedSettlement {
    Transaction tx;
    std::optional<std::size_t> condition;
    std::optional<Observation> observation;
    std::optional<AuthenticityProof> proof;
    bool verified_before_signing = false;
    Signature signature;
    PubKey pays_to;
};

enum class ContractState { Active, SettledCondition, SettledDefault, Refunded };
std::string_view to_string(ContractState s);

class ConditionalContract {
public:
    /**
     * Alice and Bob fund a 2-of-3 {alice, bob, oracle-or-arbitrator} output
     * and pre-sign a refund spending it with nLockTime = refund_locktime.
     */
    static ConditionalContract build(const Chain& chain, ContractTerms terms, const FeedSet& feeds, const KeyPair& alice,
                                     const KeyPair& bob, const Mempool* pool = nullptr);

    const ContractTerms& terms() const { return m_terms; }
    LockScript funding_lock() const;
    const Transaction& funding_tx() const { return m_funding; }
    OutPoint funding_outpoint() const { return {m_funding_txid, 0}; }
    Amount value() const { return m_terms.alice_stake + m_terms.bob_stake; }
    const Transaction& refund_tx() const { return m_refund; }

    ContractState state() const { return m_state; }
    std::optional<std::size_t> settled_condition() const { return m_settled_condition; }
    const std::vector<AuditRecord>& audit() const { return m_audit; }
    std::string audit_json() const;

    /** start + k * poll_interval, inside [start, end). */
    bool is_poll_time(Timestamp now) const;

    /**
     * Scheduled poll. The first condition, in list order, that holds at
     * `now` triggers a settlement with an authenticity proof. ProofShield
     * refuses to sign an unverifiable proof (ProofInvalid); without it the
     * oracle signs and the audit record shows the failure. Conditions whose
     * source has no data yet are skipped. Errors: BadPollTime,
     * AlreadySettled, InvalidState (oracle offline).
     */
    std::optional<SignedSettlement> poll(const OracleService& oracle, Timestamp now);

    /** Errors: TooEarly (now < end), AlreadySettled. */
    SignedSettlement settle_default(const OracleService& oracle, Timestamp now);

    /** Arbitrator variant: Carol picks the payee. */
    SignedSettlement arbitrate(const KeyPair& carol, const PubKey& pays_to, Timestamp now);

    /** The pre-signed refund, once height >= locktime. Errors: TooEarly, AlreadySettled. */
    const Transaction& refund_expiry(Height height);

    /** Add `signer`'s signature; errors BadWitness if the 2-of-3 is still unmet. */
    Transaction co_sign(const SignedSettlement& s, const KeyPair& signer, const SignatureVerifier& verifier) const;

private:
    ConditionalContract() = default;
    Transaction settlement_to(const PubKey& payee) const;
    void require_active() const;

    ContractTerms m_terms;
    Transaction m_funding;
    Txid m_funding_txid;
    Transaction m_refund;
    ContractState m_state = ContractState::Active;
    std::optional<std::size_t> m_settled_condition;
    std::vector<AuditRecord> m_audit;
};

} // namespace oraclesim::oraclize

#endif // ORACLESIM_ORACLIZE_HPP

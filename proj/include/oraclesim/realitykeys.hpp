// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_REALITYKEYS_HPP
#define ORACLESIM_REALITYKEYS_HPP

#include <oraclesim/chain.hpp>
#include <oraclesim/datafeed.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace oraclesim {

enum class Outcome { Yes, No };

std::string_view to_string(Outcome o);
std::optional<Outcome> parse_outcome(std::string_view s);

inline constexpr Timestamp DEFAULT_OBJECTION_WINDOW = 86'400;
inline constexpr Amount MIN_OBJECTION_TIP = 1'000'000; // 10 mBTC

struct SourceRef {
    std::string source_id;
    std::string key;
    Comparator cmp = Comparator::Ge;
    double threshold = 0.0;
};

enum class FactState { Registered, ResultPosted, Finalized };

std::string_view to_string(FactState s);

using FactId = std::uint64_t;

/** Public view of a fact. Secrets never appear here. */
struct FactInfo {
    FactId id = 0;
    std::string question;
    Timestamp resolution_time = 0;
    SourceRef source;
    PubKey yes_pub;
    PubKey no_pub;
    FactState state = FactState::Registered;
    std::optional<Outcome> posted_result;
    Timestamp objection_deadline = 0;
    std::optional<Outcome> human_override;
    Amount tips_collected = 0;
    std::optional<Outcome> final_result;

    Outcome effective_result() const { return human_override.value_or(posted_result.value_or(Outcome::No)); }
    const PubKey& pub_for(Outcome o) const { return o == Outcome::Yes ? yes_pub : no_pub; }
};

enum class SecretStatus {
    Withheld,  //!< not yet finalized
    Released,  //!< published winning secret
    Destroyed, //!< losing secret, erased at finalization
};

std::string_view to_string(SecretStatus s);

struct SecretQuery {
    SecretStatus status = SecretStatus::Withheld;
    std::optional<SecretKey> secret;
};

/**
 * Human adjudication hook, consulted when an objection carries enough tip.
 * Returns the verdict. Scenarios script it; the default keeps the posted
 * result.
 */
using HumanCheck = std::function<Outcome(const FactInfo& fact, Outcome claimed)>;

/**
 * Off-chain fact registry. Each fact gets a yes and a no key pair; pubs are
 * published at registration and exactly one secret is ever released.
 */
class RealityKeys {
public:
    RealityKeys(const FeedSet& feeds, KeyRegistry& registry, std::string seed,
                Timestamp objection_window = DEFAULT_OBJECTION_WINDOW);

    void set_human_check(HumanCheck hook) { m_human = std::move(hook); }

    /** Errors: PastResolution, UnknownSource. */
    const FactInfo& register_fact(std::string question, Timestamp resolution_time, SourceRef source, Timestamp now);

    /** Errors: TooEarly, NoData, InvalidState (already posted). */
    const FactInfo& post_result(FactId id, Timestamp now);

    /** Errors: TipTooSmall, WindowClosed, InvalidState (nothing posted yet). */
    const FactInfo& object(FactId id, Amount tip, Outcome claimed, Timestamp now);

    /** Idempotent. Errors: TooEarly (before the deadline or before a result). */
    SecretKey finalize(FactId id, Timestamp now);

    SecretQuery secret(FactId id, Outcome which) const;

    const FactInfo& fact(FactId id) const;
    const std::map<FactId, FactInfo>& facts() const { return m_info; }
    Timestamp objection_window() const { return m_window; }

    /** Registry export for assertions: facts keyed by id, pubs in hex. */
    std::string export_json() const;

private:
    struct Secrets {
        std::optional<SecretKey> yes;
        std::optional<SecretKey> no;
    };

    FactInfo& mut(FactId id);

    const FeedSet& m_feeds;
    KeyRegistry& m_registry;
    std::string m_seed;
    Timestamp m_window;
    HumanCheck m_human;
    FactId m_next = 1;
    std::map<FactId, FactInfo> m_info;
    std::map<FactId, Secrets> m_secrets;
};

// Demo contract: (alice AND yes) OR (bob AND no), behind a script hash.

/** `makekeys`: one key pair per party, used for its temporary address and contract branch. */
KeyPair demo_makekeys(std::string_view seed);

/** Everything both parties agree on before setup. Each side rebuilds from this. */
struct DemoTerms {
    FactId fact_id = 0;
    PubKey yes_pub;
    PubKey no_pub;
    PubKey alice_pub;
    PubKey bob_pub;
    OutPoint alice_temp;
    OutPoint bob_temp;
    Amount alice_stake = 0;
    Amount bob_stake = 0;
    Amount fee = 0;
};

LockScript demo_redeem(const DemoTerms& terms);

/** The unsigned setup tx both sides must agree on byte for byte. */
Transaction demo_unsigned_setup(const DemoTerms& terms);

/** Alice's partially signed setup. Throws InvalidState unless both temp coins are confirmed with the agreed values. */
Transaction demo_setup(const Chain& chain, const DemoTerms& terms, const KeyPair& alice);

/** Bob rebuilds from his own terms, compares, then signs. Throws ReconstructionMismatch. */
Transaction demo_countersign(const Chain& chain, const DemoTerms& bob_terms, const KeyPair& bob, const Transaction& partial);

/**
 * Spend the contract output through the claimant's branch with the
 * released fact secret. Errors: NotFinalized, WrongBranch.
 */
Transaction demo_claim(const RealityKeys& rk, const DemoTerms& terms, const OutPoint& contract, Amount contract_value,
                       const KeyPair& claimant, const PubKey& dest, Amount fee);

/** Take one's own temporary coin back. Throws AlreadySpent once setup consumed it. */
Transaction demo_refund(const Chain& chain, const OutPoint& temp, const KeyPair& party, const PubKey& dest, Amount fee);

} // namespace oraclesim

#endif // ORACLESIM_REALITYKEYS_HPP

// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_TRUTHCOIN_HPP
#define ORACLESIM_TRUTHCOIN_HPP

#include <oraclesim/datafeed.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace oraclesim::truthcoin {

/** CSH, VTC and shares are all counted in 1e-8 base units. */
using Units = std::int64_t;
inline constexpr Units UNIT = 100'000'000;

using Address = std::string;
using DecisionId = std::uint64_t;
using MarketId = std::uint64_t;
using BallotId = std::uint64_t;

// LMSR, in whole-coin doubles.

/** C(q) = b ln Σ exp(q_j / b), evaluated as log-sum-exp. */
double lmsr_cost(std::span<const double> q, double b);
double lmsr_price(std::span<const double> q, double b, std::size_t i);
std::vector<double> lmsr_prices(std::span<const double> q, double b);

/** round_half_even(C(q) * 1e8) for base-unit share quantities. */
Units lmsr_cost_units(std::span<const Units> q, double b);

/** ceil(b ln(states) * 1e8): what the author must stake to open a market. */
Units initial_liquidity(double b, std::size_t states);

/**
 * Charge for moving the market from q to q + delta, in base units. Since
 * each charge is a difference of the same rounded cost function, any
 * sequence of trades telescopes to the cost of the net change.
 */
Units trade_charge(std::span<const Units> q, std::size_t state, Units delta, double b);

struct Params {
    double quorum = 0.5;                     //!< fraction of total VTC that must take part
    double severity = 1.0;                   //!< sigma
    Timestamp commit_period = 86'400;
    Timestamp reveal_period = 86'400;
    Timestamp waiting_period = 7 * 86'400;
    std::size_t veto_window = 100;           //!< side-blocks
};

enum class DecisionKind { Binary, Scalar };

enum class DecisionState { Open, Mature, Resolved, Revote, Confirmed };
std::string_view to_string(DecisionState s);

struct Decision {
    DecisionId id = 0;
    Address author;
    std::string prompt;
    DecisionKind kind = DecisionKind::Binary;
    double xmin = 0.0;
    double xmax = 1.0;
    Timestamp maturity_time = 0;
    DecisionState state = DecisionState::Open;
    std::optional<double> outcome;
    bool unresolvable = false; //!< quorum missed; pays .5 either way
    std::optional<BallotId> ballot;

    double range() const { return kind == DecisionKind::Binary ? 1.0 : xmax - xmin; }

    /** Outcome mapped into [0,1]; .5 stays .5. */
    double normalized_outcome() const;
};

struct Market {
    MarketId id = 0;
    Address author;
    std::vector<DecisionId> decisions;
    double b = 0.0;
    double fee_rate = 0.0;
    std::vector<Units> q;       //!< outstanding shares per state, 2^k states
    Units collateral = 0;       //!< CSH held by the market
    std::map<Address, std::vector<Units>> holdings;
};

/**
 * Payoff per share of `state` given the decisions' normalized outcomes.
 * Bit j of the state selects outcome (1) or its complement (0) for
 * decision j; the per-decision payoffs multiply. Payoffs over all states
 * sum to 1.
 */
double state_payoff(std::size_t state, std::span<const double> normalized);

using Reports = std::map<DecisionId, double>;

/** H(reports || salt) with reports encoded as u32 count then (u64 id, f64 value) pairs in id order. */
Hash256 vote_commitment(const Reports& reports, ByteView salt);

struct Vote {
    Hash256 commitment;
    bool committed = false;
    Units stake = 0;
    std::optional<Reports> reveal;
};

enum class BallotState { Voting, Resolved, Confirmed, Revoted };
std::string_view to_string(BallotState s);

struct Ballot {
    BallotId id = 0;
    std::vector<DecisionId> decisions;
    Timestamp created = 0;
    Timestamp commit_end = 0;
    Timestamp reveal_end = 0;
    std::map<Address, Vote> votes;
    BallotState state = BallotState::Voting;
    Timestamp resolved_at = 0;
    std::map<Address, Units> deltas; //!< VTC reallocation applied at resolution
    std::map<DecisionId, double> outcomes;
    std::optional<BallotId> revote_of;
};

struct SideBlock {
    std::uint64_t height = 0;
    std::string miner_id;
    Timestamp time = 0;
    std::set<BallotId> veto_flags;
};

enum class VetoResult { Confirmed, Revote };

/** Revote iff strictly more than half of the window's blocks flag the ballot. */
VetoResult tally_veto(std::span<const SideBlock> window, BallotId ballot);

/** One decision's resolution on its own, for testing the rule in isolation. */
struct DecisionResolution {
    double outcome = 0.5;
    bool quorum_met = false;
    std::map<Address, Units> slash;
    std::map<Address, Units> reward;
};

/**
 * Stake-weighted majority (binary) or lower weighted median (scalar),
 * distance-proportional slashing and pro-rata redistribution by
 * stake * (1 - d) with largest-remainder rounding. `divisor` splits the
 * slash across the ballot's decisions. `total_vtc` sets the quorum base.
 */
DecisionResolution resolve_decision(const Decision& d, const std::map<Address, Units>& stakes,
                                    const std::map<Address, std::optional<double>>& reports, Units total_vtc,
                                    const Params& params, std::size_t divisor = 1);

class Engine {
public:
    explicit Engine(Params params = {}) : m_params(params) {}

    const Params& params() const { return m_params; }

    // Ledger.
    void peg_in(const Address& who, Units csh);
    void peg_out(const Address& who, Units csh);
    /** Genesis allocation; refuses once any ballot exists, so supply stays fixed. */
    void grant_vtc(const Address& who, Units vtc);

    Units csh(const Address& who) const;
    Units vtc(const Address& who) const;
    Units frozen_vtc(const Address& who) const;
    Units total_vtc() const;
    Units total_csh() const;      //!< Σ balances + Σ market collateral
    Units btc_reserve() const { return m_reserve; }

    // Decisions and markets.
    DecisionId add_decision(const Address& author, std::string prompt, DecisionKind kind, double xmin, double xmax,
                            Timestamp maturity_time, Timestamp now);
    MarketId add_market(const Address& author, std::vector<DecisionId> decisions, double b, double fee_rate, Timestamp now);

    /** Positive delta buys, negative sells. Returns the CSH charged (negative when paid out), fee excluded. */
    Units trade(MarketId market, const Address& trader, std::size_t state, Units delta, Timestamp now);

    std::vector<double> prices(MarketId market) const;

    // Voting.
    /** Collect decisions mature at `now` into a new ballot; nullopt when none. */
    std::optional<BallotId> mature_and_ballot(Timestamp now);
    void commit_vote(const Address& voter, BallotId ballot, const Hash256& commitment, Units stake, Timestamp now);
    void reveal_vote(const Address& voter, BallotId ballot, const Reports& reports, ByteView salt, Timestamp now);
    void resolve_ballot(BallotId ballot, Timestamp now);

    // Veto and redemption.
    void add_side_block(SideBlock block);
    /**
     * Decide the ballot once its veto window has filled. Revote reverts the
     * reallocation and opens a new ballot carrying the frozen stakes.
     * Errors: WindowOpen.
     */
    VetoResult veto_window(BallotId ballot, Timestamp now);
    Units redeem(MarketId market, const Address& holder);

    const Decision& decision(DecisionId id) const;
    const Market& market(MarketId id) const;
    const Ballot& ballot(BallotId id) const;
    const std::map<BallotId, Ballot>& ballots() const { return m_ballots; }
    const std::map<DecisionId, Decision>& decisions() const { return m_decisions; }
    const std::map<MarketId, Market>& markets() const { return m_markets; }
    const std::vector<SideBlock>& side_blocks() const { return m_side; }

    /** Ballots, votes and resolutions as JSON. */
    std::string export_json() const;

private:
    Decision& mut_decision(DecisionId id);
    Market& mut_market(MarketId id);
    Ballot& mut_ballot(BallotId id);
    BallotId open_ballot(std::vector<DecisionId> decisions, Timestamp now);
    void debit_csh(const Address& who, Units amount);

    Params m_params;
    std::map<Address, Units> m_csh;
    std::map<Address, Units> m_vtc;
    std::map<Address, Units> m_frozen;
    Units m_reserve = 0;

    std::map<DecisionId, Decision> m_decisions;
    std::map<MarketId, Market> m_markets;
    std::map<BallotId, Ballot> m_ballots;
    std::vector<SideBlock> m_side;
    DecisionId m_next_decision = 1;
    MarketId m_next_market = 1;
    BallotId m_next_ballot = 1;
};

} // namespace oraclesim::truthcoin

#endif // ORACLESIM_TRUTHCOIN_HPP

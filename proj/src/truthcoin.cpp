// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/truthcoin.hpp>
#include <oraclesim/errors.hpp>
#include <oraclesim/hash.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oraclesim::truthcoin {

namespace {

__extension__ typedef unsigned __int128 u128;

std::string units_str(Units u) { return std::to_string(u); }

} // namespace

double lmsr_cost(std::span<const double> q, double b)
{
    if (q.empty() || !(b > 0.0)) throw Error(Errc::InvalidArgument, "lmsr needs states and b > 0");
    double m = q[0] / b;
    for (double x : q) m = std::max(m, x / b);
    double s = 0.0;
    for (double x : q) s += std::exp(x / b - m);
    return b * (m + std::log(s));
}

std::vector<double> lmsr_prices(std::span<const double> q, double b)
{
    if (q.empty() || !(b > 0.0)) throw Error(Errc::InvalidArgument, "lmsr needs states and b > 0");
    double m = q[0] / b;
    for (double x : q) m = std::max(m, x / b);
    std::vector<double> e;
    double s = 0.0;
    for (double x : q) s += e.emplace_back(std::exp(x / b - m));
    for (auto& v : e) v /= s;
    return e;
}

double lmsr_price(std::span<const double> q, double b, std::size_t i)
{
    if (i >= q.size()) throw Error(Errc::InvalidArgument, "state out of range");
    return lmsr_prices(q, b)[i];
}

Units lmsr_cost_units(std::span<const Units> q, double b)
{
    std::vector<double> d;
    d.reserve(q.size());
    for (auto u : q) d.push_back(static_cast<double>(u) / static_cast<double>(UNIT));
    return static_cast<Units>(std::nearbyint(lmsr_cost(d, b) * static_cast<double>(UNIT)));
}

Units initial_liquidity(double b, std::size_t states)
{
    if (states < 2 || !(b > 0.0)) throw Error(Errc::InvalidArgument, "market needs at least two states and b > 0");
    return static_cast<Units>(std::ceil(b * std::log(static_cast<double>(states)) * static_cast<double>(UNIT)));
}

Units trade_charge(std::span<const Units> q, std::size_t state, Units delta, double b)
{
    if (state >= q.size()) throw Error(Errc::InvalidArgument, "state out of range");
    std::vector<Units> next(q.begin(), q.end());
    next[state] += delta;
    if (next[state] < 0) throw Error(Errc::InsufficientShares, "outstanding shares would go negative");
    return lmsr_cost_units(next, b) - lmsr_cost_units(q, b);
}

std::string_view to_string(DecisionState s)
{
    switch (s) {
    case DecisionState::Open: return "Open";
    case DecisionState::Mature: return "Mature";
    case DecisionState::Resolved: return "Resolved";
    case DecisionState::Revote: return "Revote";
    case DecisionState::Confirmed: return "Confirmed";
    }
    return "?";
}

std::string_view to_string(BallotState s)
{
    switch (s) {
    case BallotState::Voting: return "Voting";
    case BallotState::Resolved: return "Resolved";
    case BallotState::Confirmed: return "Confirmed";
    case BallotState::Revoted: return "Revoted";
    }
    return "?";
}

double Decision::normalized_outcome() const
{
    if (!outcome) throw Error(Errc::InvalidState, "decision has no outcome");
    if (unresolvable) return 0.5;
    if (kind == DecisionKind::Binary) return *outcome;
    return std::clamp((*outcome - xmin) / range(), 0.0, 1.0);
}

double state_payoff(std::size_t state, std::span<const double> normalized)
{
    double p = 1.0;
    for (std::size_t j = 0; j < normalized.size(); ++j) p *= (state >> j & 1) ? normalized[j] : 1.0 - normalized[j];
    return p;
}

Hash256 vote_commitment(const Reports& reports, ByteView salt)
{
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(reports.size()));
    for (const auto& [id, v] : reports) {
        w.u64(id);
        w.f64(v);
    }
    w.raw(salt);
    return sha256(w.data());
}

VetoResult tally_veto(std::span<const SideBlock> window, BallotId ballot)
{
    std::size_t vetoes = 0;
    for (const auto& b : window)
        if (b.veto_flags.contains(ballot)) ++vetoes;
    return 2 * vetoes > window.size() ? VetoResult::Revote : VetoResult::Confirmed;
}

DecisionResolution resolve_decision(const Decision& d, const std::map<Address, Units>& stakes,
                                    const std::map<Address, std::optional<double>>& reports, Units total_vtc,
                                    const Params& params, std::size_t divisor)
{
    if (divisor == 0) throw Error(Errc::InvalidArgument, "zero divisor");
    auto valid = [&](double r) {
        if (!std::isfinite(r)) return false;
        if (d.kind == DecisionKind::Binary) return r == 0.0 || r == 1.0;
        return r >= d.xmin && r <= d.xmax;
    };
    auto report_of = [&](const Address& a) -> std::optional<double> {
        auto it = reports.find(a);
        if (it == reports.end() || !it->second || !valid(*it->second)) return std::nullopt;
        return it->second;
    };

    Units participating = 0;
    std::vector<std::pair<double, Units>> valid_reports;
    for (const auto& [a, stake] : stakes) {
        if (auto r = report_of(a)) {
            participating += stake;
            valid_reports.emplace_back(*r, stake);
        }
    }

    DecisionResolution res;
    res.quorum_met = total_vtc > 0 && participating > 0 &&
                     static_cast<long double>(participating) >= static_cast<long double>(params.quorum) * total_vtc;
    if (!res.quorum_met) {
        res.outcome = 0.5;
        return res;
    }

    if (d.kind == DecisionKind::Binary) {
        Units w0 = 0, w1 = 0;
        for (const auto& [r, s] : valid_reports) (r == 1.0 ? w1 : w0) += s;
        res.outcome = w1 > w0 ? 1.0 : w0 > w1 ? 0.0 : 0.5;
    } else {
        std::stable_sort(valid_reports.begin(), valid_reports.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        Units cum = 0;
        for (const auto& [r, s] : valid_reports) {
            cum += s;
            if (2 * cum >= participating) {
                res.outcome = r;
                break;
            }
        }
        res.outcome = std::clamp(res.outcome, d.xmin, d.xmax);
    }

    std::map<Address, Units> weight;
    Units total_slash = 0;
    Units total_weight = 0;
    for (const auto& [a, stake] : stakes) {
        const auto r = report_of(a);
        const long double dist = r ? std::fabs(*r - res.outcome) / d.range() : 1.0L;
        Units slash = static_cast<Units>(std::floor(stake * dist * params.severity / divisor));
        slash = std::clamp<Units>(slash, 0, stake);
        const Units w = r ? stake - static_cast<Units>(std::floor(stake * dist)) : 0;
        if (slash > 0) res.slash[a] = slash;
        total_slash += slash;
        if (w > 0) weight[a] = w;
        total_weight += w;
    }
    if (total_weight == 0 || total_slash == 0) {
        res.slash.clear();
        return res;
    }

    // Largest remainder; ties go to the earlier address.
    std::vector<std::pair<u128, Address>> remainders;
    Units handed = 0;
    for (const auto& [a, w] : weight) {
        const u128 num = static_cast<u128>(total_slash) * static_cast<u128>(w);
        const auto base = static_cast<Units>(num / static_cast<u128>(total_weight));
        remainders.emplace_back(num % static_cast<u128>(total_weight), a);
        if (base > 0) res.reward[a] = base;
        handed += base;
    }
    std::stable_sort(remainders.begin(), remainders.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    for (std::size_t i = 0; handed < total_slash; ++i, ++handed) res.reward[remainders[i % remainders.size()].second] += 1;
    return res;
}

// Engine ---------------------------------------------------------------------

void Engine::peg_in(const Address& who, Units csh)
{
    if (csh <= 0) throw Error(Errc::InvalidArgument, "peg-in must be positive");
    m_csh[who] += csh;
    m_reserve += csh;
}

void Engine::debit_csh(const Address& who, Units amount)
{
    if (csh(who) < amount) throw Error(Errc::InsufficientCSH, who + " has " + units_str(csh(who)) + ", needs " + units_str(amount));
    m_csh[who] -= amount;
}

void Engine::peg_out(const Address& who, Units amount)
{
    if (amount <= 0) throw Error(Errc::InvalidArgument, "peg-out must be positive");
    debit_csh(who, amount);
    m_reserve -= amount;
}

void Engine::grant_vtc(const Address& who, Units vtc)
{
    if (!m_ballots.empty()) throw Error(Errc::InvalidState, "VTC supply is fixed once voting starts");
    if (vtc <= 0) throw Error(Errc::InvalidArgument, "grant must be positive");
    m_vtc[who] += vtc;
}

Units Engine::csh(const Address& who) const
{
    auto it = m_csh.find(who);
    return it == m_csh.end() ? 0 : it->second;
}

Units Engine::vtc(const Address& who) const
{
    auto it = m_vtc.find(who);
    return it == m_vtc.end() ? 0 : it->second;
}

Units Engine::frozen_vtc(const Address& who) const
{
    auto it = m_frozen.find(who);
    return it == m_frozen.end() ? 0 : it->second;
}

Units Engine::total_vtc() const
{
    Units t = 0;
    for (const auto& [a, v] : m_vtc) t += v;
    for (const auto& [a, v] : m_frozen) t += v;
    return t;
}

Units Engine::total_csh() const
{
    Units t = 0;
    for (const auto& [a, v] : m_csh) t += v;
    for (const auto& [id, m] : m_markets) t += m.collateral;
    return t;
}

Decision& Engine::mut_decision(DecisionId id)
{
    auto it = m_decisions.find(id);
    if (it == m_decisions.end()) throw Error(Errc::UnknownDecision, "unknown decision " + std::to_string(id));
    return it->second;
}

Market& Engine::mut_market(MarketId id)
{
    auto it = m_markets.find(id);
    if (it == m_markets.end()) throw Error(Errc::UnknownMarket, "unknown market " + std::to_string(id));
    return it->second;
}

Ballot& Engine::mut_ballot(BallotId id)
{
    auto it = m_ballots.find(id);
    if (it == m_ballots.end()) throw Error(Errc::UnknownBallot, "unknown ballot " + std::to_string(id));
    return it->second;
}

const Decision& Engine::decision(DecisionId id) const { return const_cast<Engine*>(this)->mut_decision(id); }
const Market& Engine::market(MarketId id) const { return const_cast<Engine*>(this)->mut_market(id); }
const Ballot& Engine::ballot(BallotId id) const { return const_cast<Engine*>(this)->mut_ballot(id); }

DecisionId Engine::add_decision(const Address& author, std::string prompt, DecisionKind kind, double xmin, double xmax,
                                Timestamp maturity_time, Timestamp now)
{
    if (maturity_time <= now) throw Error(Errc::PastMaturity, "maturity must be in the future");
    if (kind == DecisionKind::Scalar && !(xmin < xmax)) throw Error(Errc::BadScalarRange, "scalar decision needs xmin < xmax");
    Decision d;
    d.id = m_next_decision++;
    d.author = author;
    d.prompt = std::move(prompt);
    d.kind = kind;
    if (kind == DecisionKind::Scalar) {
        d.xmin = xmin;
        d.xmax = xmax;
    }
    d.maturity_time = maturity_time;
    return m_decisions.emplace(d.id, std::move(d)).first->first;
}

MarketId Engine::add_market(const Address& author, std::vector<DecisionId> decisions, double b, double fee_rate, Timestamp now)
{
    if (decisions.empty() || decisions.size() > 8) throw Error(Errc::InvalidArgument, "market needs 1 to 8 decisions");
    if (!(fee_rate >= 0.0 && fee_rate < 1.0)) throw Error(Errc::InvalidArgument, "fee rate outside [0,1)");
    for (auto id : decisions) {
        const auto& d = decision(id);
        if (d.state != DecisionState::Open || d.maturity_time <= now) throw Error(Errc::PastMaturity, "decision already mature");
    }
    const std::size_t states = std::size_t{1} << decisions.size();
    const Units liquidity = initial_liquidity(b, states);
    debit_csh(author, liquidity);

    Market m;
    m.id = m_next_market++;
    m.author = author;
    m.decisions = std::move(decisions);
    m.b = b;
    m.fee_rate = fee_rate;
    m.q.assign(states, 0);
    m.collateral = liquidity;
    return m_markets.emplace(m.id, std::move(m)).first->first;
}

Units Engine::trade(MarketId id, const Address& trader, std::size_t state, Units delta, Timestamp now)
{
    auto& m = mut_market(id);
    if (state >= m.q.size()) throw Error(Errc::InvalidArgument, "state out of range");
    if (delta == 0) throw Error(Errc::InvalidArgument, "empty trade");
    for (auto did : m.decisions) {
        const auto& d = decision(did);
        if (d.state != DecisionState::Open || now >= d.maturity_time) throw Error(Errc::PastMaturity, "trading closed at maturity");
    }
    auto& held = m.holdings[trader];
    if (held.empty()) held.assign(m.q.size(), 0);
    if (delta < 0 && held[state] < -delta) throw Error(Errc::InsufficientShares, "trader holds too few shares");

    const Units charge = trade_charge(m.q, state, delta, m.b);
    const Units fee = static_cast<Units>(std::floor(std::fabs(static_cast<double>(charge)) * m.fee_rate));
    if (charge >= 0) {
        debit_csh(trader, charge + fee);
    } else {
        m_csh[trader] += -charge - fee;
    }
    if (fee > 0) m_csh[m.author] += fee;
    m.collateral += charge;
    m.q[state] += delta;
    held[state] += delta;
    return charge;
}

std::vector<double> Engine::prices(MarketId id) const
{
    const auto& m = market(id);
    std::vector<double> q;
    for (auto u : m.q) q.push_back(static_cast<double>(u) / static_cast<double>(UNIT));
    return lmsr_prices(q, m.b);
}

BallotId Engine::open_ballot(std::vector<DecisionId> decisions, Timestamp now)
{
    Ballot b;
    b.id = m_next_ballot++;
    b.decisions = std::move(decisions);
    b.created = now;
    b.commit_end = now + m_params.commit_period;
    b.reveal_end = b.commit_end + m_params.reveal_period;
    for (auto id : b.decisions) mut_decision(id).ballot = b.id;
    return m_ballots.emplace(b.id, std::move(b)).first->first;
}

std::optional<BallotId> Engine::mature_and_ballot(Timestamp now)
{
    std::vector<DecisionId> ready;
    for (auto& [id, d] : m_decisions) {
        if (d.state == DecisionState::Open && d.maturity_time <= now) {
            d.state = DecisionState::Mature;
            ready.push_back(id);
        }
    }
    if (ready.empty()) return std::nullopt;
    return open_ballot(std::move(ready), now);
}

void Engine::commit_vote(const Address& voter, BallotId id, const Hash256& commitment, Units stake, Timestamp now)
{
    auto& b = mut_ballot(id);
    if (b.state != BallotState::Voting || now >= b.commit_end) throw Error(Errc::CommitClosed, "commit phase over");
    if (stake < 0) throw Error(Errc::InvalidArgument, "negative stake");
    auto it = b.votes.find(voter);
    if (it != b.votes.end() && it->second.committed) throw Error(Errc::InvalidState, voter + " already committed");
    const Units carried = it == b.votes.end() ? 0 : it->second.stake;
    if (carried + stake == 0) throw Error(Errc::InvalidArgument, "stake must be positive");
    if (vtc(voter) < stake) throw Error(Errc::InsufficientVTC, voter + " has " + units_str(vtc(voter)) + " free VTC");

    m_vtc[voter] -= stake;
    m_frozen[voter] += stake;
    auto& v = b.votes[voter];
    v.commitment = commitment;
    v.committed = true;
    v.stake = carried + stake;
}

void Engine::reveal_vote(const Address& voter, BallotId id, const Reports& reports, ByteView salt, Timestamp now)
{
    auto& b = mut_ballot(id);
    if (b.state != BallotState::Voting || now >= b.reveal_end) throw Error(Errc::RevealClosed, "reveal phase over");
    auto it = b.votes.find(voter);
    if (it == b.votes.end() || !it->second.committed) throw Error(Errc::InvalidState, voter + " never committed");
    for (const auto& [did, v] : reports)
        if (std::find(b.decisions.begin(), b.decisions.end(), did) == b.decisions.end())
            throw Error(Errc::UnknownDecision, "decision " + std::to_string(did) + " not on this ballot");
    if (vote_commitment(reports, salt) != it->second.commitment) throw Error(Errc::RevealMismatch, "reveal does not match commitment");
    it->second.reveal = reports;
}

void Engine::resolve_ballot(BallotId id, Timestamp now)
{
    auto& b = mut_ballot(id);
    if (b.state != BallotState::Voting) throw Error(Errc::InvalidState, "ballot already resolved");
    if (now < b.reveal_end) throw Error(Errc::RevealOpen, "reveal phase still open");

    std::map<Address, Units> stakes;
    for (const auto& [a, v] : b.votes)
        if (v.stake > 0) stakes[a] = v.stake;
    const Units total = total_vtc();

    for (auto did : b.decisions) {
        auto& d = mut_decision(did);
        std::map<Address, std::optional<double>> reports;
        for (const auto& [a, v] : b.votes) {
            if (!v.reveal) continue;
            if (auto r = v.reveal->find(did); r != v.reveal->end()) reports[a] = r->second;
        }
        const auto res = resolve_decision(d, stakes, reports, total, m_params, b.decisions.size());
        for (const auto& [a, s] : res.slash) b.deltas[a] -= s;
        for (const auto& [a, r] : res.reward) b.deltas[a] += r;
        d.outcome = res.outcome;
        d.unresolvable = !res.quorum_met;
        d.state = DecisionState::Resolved;
        b.outcomes[did] = res.outcome;
    }
    for (const auto& [a, delta] : b.deltas) m_frozen[a] += delta;
    b.state = BallotState::Resolved;
    b.resolved_at = now;
}

void Engine::add_side_block(SideBlock block)
{
    if (!m_side.empty() && block.time < m_side.back().time) throw Error(Errc::InvalidArgument, "side-block time went backwards");
    m_side.push_back(std::move(block));
}

VetoResult Engine::veto_window(BallotId id, Timestamp now)
{
    auto& b = mut_ballot(id);
    if (b.state == BallotState::Confirmed) return VetoResult::Confirmed;
    if (b.state == BallotState::Revoted) return VetoResult::Revote;
    if (b.state != BallotState::Resolved) throw Error(Errc::InvalidState, "ballot not resolved");

    const Timestamp opens = b.resolved_at + m_params.waiting_period;
    std::vector<SideBlock> window;
    for (const auto& sb : m_side) {
        if (sb.time < opens) continue;
        if (window.size() == m_params.veto_window) break;
        window.push_back(sb);
    }
    if (now < opens || window.size() < m_params.veto_window)
        throw Error(Errc::WindowOpen, "veto window has " + std::to_string(window.size()) + "/" + std::to_string(m_params.veto_window) + " blocks");

    const auto result = tally_veto(window, id);
    if (result == VetoResult::Confirmed) {
        for (const auto& [a, v] : b.votes) {
            const Units back = v.stake + (b.deltas.contains(a) ? b.deltas.at(a) : 0);
            m_frozen[a] -= back;
            m_vtc[a] += back;
        }
        for (auto did : b.decisions) mut_decision(did).state = DecisionState::Confirmed;
        b.state = BallotState::Confirmed;
        return result;
    }

    for (const auto& [a, delta] : b.deltas) m_frozen[a] -= delta;
    b.state = BallotState::Revoted;
    for (auto did : b.decisions) {
        auto& d = mut_decision(did);
        d.state = DecisionState::Revote;
        d.outcome.reset();
        d.unresolvable = false;
    }
    const auto next = open_ballot(b.decisions, now);
    auto& nb = m_ballots.at(next);
    nb.revote_of = id;
    for (const auto& [a, v] : m_ballots.at(id).votes)
        if (v.stake > 0) nb.votes[a].stake = v.stake;
    return result;
}

Units Engine::redeem(MarketId id, const Address& holder)
{
    auto& m = mut_market(id);
    std::vector<double> normalized;
    for (auto did : m.decisions) {
        const auto& d = decision(did);
        if (d.state != DecisionState::Confirmed) throw Error(Errc::NotConfirmed, "decision " + std::to_string(did) + " not confirmed");
        normalized.push_back(d.normalized_outcome());
    }
    auto it = m.holdings.find(holder);
    if (it == m.holdings.end()) return 0;
    Units payout = 0;
    for (std::size_t s = 0; s < it->second.size(); ++s) {
        const Units shares = it->second[s];
        if (shares == 0) continue;
        payout += static_cast<Units>(std::floor(static_cast<long double>(shares) * state_payoff(s, normalized)));
        m.q[s] -= shares;
        it->second[s] = 0;
    }
    if (payout > m.collateral) throw Error(Errc::InvalidState, "market insolvent");
    m.collateral -= payout;
    m_csh[holder] += payout;
    return payout;
}

std::string Engine::export_json() const
{
    using nlohmann::json;
    json out;
    json ballots = json::array();
    for (const auto& [id, b] : m_ballots) {
        json jb;
        jb["id"] = id;
        jb["state"] = to_string(b.state);
        jb["decisions"] = b.decisions;
        jb["commit_end"] = b.commit_end;
        jb["reveal_end"] = b.reveal_end;
        jb["resolved_at"] = b.resolved_at;
        if (b.revote_of) jb["revote_of"] = *b.revote_of;
        json votes = json::object();
        for (const auto& [a, v] : b.votes) {
            json jv;
            jv["commitment"] = v.committed ? json(v.commitment.hex()) : json();
            jv["stake"] = v.stake;
            if (v.reveal) {
                json r = json::object();
                for (const auto& [did, val] : *v.reveal) r[std::to_string(did)] = val;
                jv["reveal"] = r;
            }
            votes[a] = jv;
        }
        jb["votes"] = votes;
        json outcomes = json::object();
        for (const auto& [did, o] : b.outcomes) outcomes[std::to_string(did)] = o;
        jb["outcomes"] = outcomes;
        json deltas = json::object();
        for (const auto& [a, d] : b.deltas) deltas[a] = d;
        jb["deltas"] = deltas;
        ballots.push_back(jb);
    }
    out["ballots"] = ballots;
    json decisions = json::array();
    for (const auto& [id, d] : m_decisions) {
        decisions.push_back({{"id", id},
                             {"prompt", d.prompt},
                             {"kind", d.kind == DecisionKind::Binary ? "binary" : "scalar"},
                             {"state", to_string(d.state)},
                             {"outcome", d.outcome ? json(*d.outcome) : json()},
                             {"unresolvable", d.unresolvable}});
    }
    out["decisions"] = decisions;
    out["total_vtc"] = total_vtc();
    out["total_csh"] = total_csh();
    return out.dump();
}

} // namespace oraclesim::truthcoin

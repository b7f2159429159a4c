// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_HARNESS_INTERNAL_HPP
#define ORACLESIM_HARNESS_INTERNAL_HPP

#include <oraclesim/chain.hpp>
#include <oraclesim/datafeed.hpp>
#include <oraclesim/harness.hpp>
#include <oraclesim/mempool.hpp>
#include <oraclesim/mining.hpp>
#include <oraclesim/policy.hpp>
#include <oraclesim/rng.hpp>

#include <map>
#include <memory>
#include <set>

namespace oraclesim::harness::detail {

using nlohmann::json;

/** Everything a run shares. Never moved once built: drivers keep references. */
struct Ctx {
    std::string name;
    std::uint64_t seed = 0;
    std::unique_ptr<Rng> rng;
    StandardnessPolicy policy;
    KeyRegistry registry;
    std::unique_ptr<Chain> chain;
    std::unique_ptr<Mempool> pool;
    std::vector<Miner> miners;
    FeedSet feeds;
    std::vector<std::string> actors; //!< declared, in genesis order
    EventLog log;

    std::int64_t tick = 0;
    Timestamp now = 0;
    Timestamp start_time = 0;
    Timestamp tick_seconds = 600;
    std::int64_t ticks = 0;

    std::map<std::string, Txid> label_txid;
    std::map<Txid, std::string> txid_label;
    std::map<std::string, SubmitResult> label_submit;
    std::map<std::string, Inclusion> label_inclusion;
    json action_results = json::object();
    std::size_t actions_failed = 0;

    /** Keys for a named party, derived from the name and enrolled on first use. */
    const KeyPair& key(const std::string& name);
    /** Party name for a pub, or a short hex prefix. */
    std::string name_of(const PubKey& pub) const;

    void emit(std::string_view module, std::string_view kind, json payload) { log.append(tick, module, kind, std::move(payload)); }

    /** Pool a tx under a label and log the outcome. */
    SubmitResult submit(const Transaction& tx, const std::string& label, std::string_view module);
    /** submit(), throwing InvalidState unless accepted. */
    Txid submit_or_throw(const Transaction& tx, const std::string& label, std::string_view module);

    bool confirmed(const std::string& label) const;
    bool confirmed(const Txid& txid) const { return chain->is_confirmed(txid); }

    Timestamp time_at(std::int64_t t) const { return start_time + t * tick_seconds; }
    /** Epoch seconds, {"tick": n, "plus": s}, or "now". */
    Timestamp parse_time(const json& v) const;

private:
    std::map<std::string, KeyPair> m_keys;
    std::map<PubKey, std::string> m_names;
};

class Driver {
public:
    virtual ~Driver() = default;
    virtual std::string module() const = 0;
    virtual const std::set<std::string>& verbs() const = 0;
    virtual void setup(Ctx&, const json& /*params*/) {}
    /** Run one scripted action; returns its result payload. */
    virtual json action(Ctx& ctx, const std::string& verb, const json& a) = 0;
    /** Automatic protocol behavior after the tick's actions. */
    virtual void poll(Ctx&) {}
    virtual void after_block(Ctx&, const MinedBlock&) {}
    virtual bool has_side_chain() const { return false; }
    virtual void side_block(Ctx&) {}
    /** Extra per-tick summary fields (vtc, xcp). */
    virtual void summary(Ctx&, json&) {}
    virtual void facts(Ctx&, json&) {}
};

/** Errors: ParseError for an unknown protocol. */
std::unique_ptr<Driver> make_driver(const std::string& protocol);

// Small field readers shared by the drivers.
inline std::string str_at(const json& a, const char* k) { return a.at(k).get<std::string>(); }
inline std::int64_t int_at(const json& a, const char* k) { return a.at(k).get<std::int64_t>(); }
inline std::int64_t int_or(const json& a, const char* k, std::int64_t d) { return a.contains(k) ? a.at(k).get<std::int64_t>() : d; }
inline double num_at(const json& a, const char* k) { return a.at(k).get<double>(); }
Comparator cmp_at(const json& a, const char* k);
FeedValue feed_value_from_json(const json& v);

} // namespace oraclesim::harness::detail

#endif // ORACLESIM_HARNESS_INTERNAL_HPP

// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "harness_internal.hpp"

#include <oraclesim/errors.hpp>
#include <oraclesim/hash.hpp>
#include <oraclesim/wallet.hpp>

#include <fstream>
#include <sstream>

namespace oraclesim::harness {

using nlohmann::json;

void EventLog::append(std::int64_t tick, std::string_view module, std::string_view kind, json payload)
{
    json rec = {{"tick", tick}, {"module", module}, {"kind", kind}, {"payload", std::move(payload)}};
    m_text += rec.dump();
    m_text += '\n';
    ++m_count;
}

Hash256 EventLog::digest() const { return log_digest(m_text); }

Hash256 log_digest(std::string_view log_text) { return sha256(as_bytes(log_text)); }

bool verify_logs(std::string_view a, std::string_view b) { return log_digest(a) == log_digest(b); }

bool RunResult::passed() const
{
    for (const auto& a : assertions)
        if (!a.ok) return false;
    return true;
}

std::string RunResult::first_failure() const
{
    for (const auto& a : assertions)
        if (!a.ok) return a.fact + " " + a.op + " " + a.expected.dump() + " (actual " + a.actual.dump() + ")";
    return {};
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view data)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write '" + path + "'");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(Errc::Io, "short write to '" + path + "'");
}

namespace detail {

const KeyPair& Ctx::key(const std::string& name)
{
    auto it = m_keys.find(name);
    if (it != m_keys.end()) return it->second;
    const auto kp = keygen("oraclesim/party/" + name);
    registry.enroll(kp);
    m_names.emplace(kp.pub, name);
    return m_keys.emplace(name, kp).first->second;
}

std::string Ctx::name_of(const PubKey& pub) const
{
    auto it = m_names.find(pub);
    return it != m_names.end() ? it->second : pub.hex().substr(0, 16);
}

SubmitResult Ctx::submit(const Transaction& tx, const std::string& label, std::string_view module)
{
    auto res = pool->submit(*chain, tx);
    json p = {{"label", label},
              {"txid", res.txid.hex()},
              {"status", std::string(to_string(res.status))},
              {"standard", res.standard}};
    if (res.reason) p["reason"] = std::string(to_string(*res.reason));
    if (!res.detail.empty()) p["detail"] = res.detail;
    if (res.accepted()) {
        const auto* e = pool->find(res.txid);
        p["fee"] = e->fee;
        p["size"] = e->size;
        label_txid[label] = res.txid;
        txid_label[res.txid] = label;
    }
    label_submit[label] = res;
    emit(module, "submit", std::move(p));
    return res;
}

Txid Ctx::submit_or_throw(const Transaction& tx, const std::string& label, std::string_view module)
{
    auto res = submit(tx, label, module);
    if (!res.accepted())
        throw Error(Errc::InvalidState, label + " not accepted: " + std::string(to_string(res.status)) + (res.detail.empty() ? "" : " (" + res.detail + ")"));
    return res.txid;
}

bool Ctx::confirmed(const std::string& label) const
{
    auto it = label_txid.find(label);
    return it != label_txid.end() && chain->is_confirmed(it->second);
}

Timestamp Ctx::parse_time(const json& v) const
{
    if (v.is_number_integer()) return v.get<Timestamp>();
    if (v.is_string() && v.get<std::string>() == "now") return now;
    if (v.is_object()) return time_at(v.at("tick").get<std::int64_t>()) + v.value("plus", Timestamp{0});
    throw Error(Errc::ParseError, "bad time value " + v.dump());
}

Comparator cmp_at(const json& a, const char* k)
{
    const auto s = str_at(a, k);
    auto c = parse_comparator(s);
    if (!c) throw Error(Errc::ParseError, "unknown comparator '" + s + "'");
    return *c;
}

FeedValue feed_value_from_json(const json& v)
{
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return v.get<std::string>();
    throw Error(Errc::ParseError, "feed value must be a number, boolean or string");
}

namespace {

struct PendingAction {
    std::size_t index = 0; //!< position in the scenario's action list
    json spec;
    int attempts = 0;
};

const std::set<std::string> OPS = {"eq", "ne", "lt", "le", "gt", "ge"};

bool compare_fact(const json& actual, const std::string& op, const json& expected)
{
    if (actual.is_null()) return false;
    if (actual.is_number() && expected.is_number()) {
        if (actual.is_number_integer() && expected.is_number_integer()) {
            const auto x = actual.get<std::int64_t>(), y = expected.get<std::int64_t>();
            if (op == "eq") return x == y;
            if (op == "ne") return x != y;
            if (op == "lt") return x < y;
            if (op == "le") return x <= y;
            if (op == "gt") return x > y;
            return x >= y;
        }
        const auto x = actual.get<double>(), y = expected.get<double>();
        if (op == "eq") return x == y;
        if (op == "ne") return x != y;
        if (op == "lt") return x < y;
        if (op == "le") return x <= y;
        if (op == "gt") return x > y;
        return x >= y;
    }
    if (op == "eq") return actual == expected;
    if (op == "ne") return actual != expected;
    return false;
}

json generic_facts(Ctx& ctx)
{
    json f = json::object();
    f["height"] = ctx.chain->height();
    f["mempool.size"] = ctx.pool->size();
    f["actions.failed"] = ctx.actions_failed;
    for (const auto& a : ctx.actors) f["balance." + a] = balance(*ctx.chain, ctx.key(a).pub);
    for (const auto& [label, res] : ctx.label_submit) {
        f["tx." + label + ".status"] = std::string(to_string(res.status));
        f["tx." + label + ".standard"] = res.standard;
        f["tx." + label + ".confirmed"] = res.accepted() && ctx.chain->is_confirmed(res.txid);
    }
    for (const auto& [label, inc] : ctx.label_inclusion) f["tx." + label + ".delay"] = inc.delay();
    for (const auto& [id, r] : ctx.action_results.items()) {
        f["action." + id + ".ok"] = r.at("ok");
        if (r.contains("error")) f["action." + id + ".error"] = r.at("error");
    }
    return f;
}

Miner parse_miner(const json& m)
{
    Miner out;
    out.id = str_at(m, "id");
    out.hashrate_share = num_at(m, "share");
    out.accepts_nonstandard = m.value("accepts_nonstandard", false);
    out.block_size_budget = m.value("budget", DEFAULT_BLOCK_BUDGET);
    return out;
}

} // namespace

} // namespace detail

namespace {

using namespace detail;

RunResult run_parsed(const json& sc, std::optional<std::uint64_t> seed_override)
{
    auto ctx_ptr = std::make_unique<Ctx>();
    Ctx& ctx = *ctx_ptr;

    const auto protocol = str_at(sc, "protocol");
    auto driver = make_driver(protocol);

    ctx.name = str_at(sc, "name");
    ctx.seed = seed_override ? *seed_override : sc.value("seed", std::uint64_t{0});
    ctx.rng = std::make_unique<Rng>(ctx.seed);
    const auto era_s = sc.value("era", std::string("v090"));
    const auto era = parse_era(era_s);
    if (!era) throw Error(Errc::ParseError, "unknown era '" + era_s + "'");
    ctx.policy = StandardnessPolicy::for_era(*era);
    ctx.pool = std::make_unique<Mempool>(ctx.policy, sc.value("expiry_blocks", DEFAULT_EXPIRY_BLOCKS));
    ctx.start_time = sc.value("start_time", Timestamp{0});
    ctx.tick_seconds = sc.value("tick_seconds", Timestamp{600});
    ctx.ticks = int_at(sc, "ticks");
    if (ctx.ticks <= 0 || ctx.tick_seconds <= 0) throw Error(Errc::ParseError, "ticks and tick_seconds must be positive");
    ctx.now = ctx.start_time;

    for (const auto& m : sc.at("miners")) ctx.miners.push_back(parse_miner(m));
    try {
        check_miner_table(ctx.miners);
    } catch (const Error& e) {
        throw Error(Errc::ParseError, std::string("miners: ") + e.what());
    }

    std::vector<TxOut> genesis;
    json genesis_log = json::array();
    for (const auto& a : sc.value("actors", json::array())) {
        const auto name = str_at(a, "name");
        ctx.actors.push_back(name);
        const auto& kp = ctx.key(name);
        std::vector<Amount> coins;
        const auto& funds = a.value("funds", json(0));
        if (funds.is_array())
            for (const auto& c : funds) coins.push_back(c.get<Amount>());
        else if (const auto v = funds.get<Amount>(); v != 0)
            coins.push_back(v);
        for (auto c : coins) {
            if (!money_range(c) || c == 0) throw Error(Errc::ParseError, "actor '" + name + "': bad coin value");
            genesis.push_back(TxOut{c, LockScript::pay_to_key(kp.pub)});
        }
        genesis_log.push_back({{"name", name}, {"pub", kp.pub.hex()}, {"coins", coins}});
    }
    ctx.chain = std::make_unique<Chain>(ctx.registry, std::move(genesis));

    for (const auto& f : sc.value("feeds", json::array())) {
        auto& src = ctx.feeds.add(DataSource(str_at(f, "id"), f.value("ssl", true), f.value("signs_data", false)));
        ctx.registry.enroll(src.keys());
        for (const auto& o : f.value("observations", json::array()))
            src.add(str_at(o, "key"), ctx.parse_time(o.at("time")), feed_value_from_json(o.at("value")));
    }

    // Validate the script before anything runs.
    std::vector<std::vector<PendingAction>> schedule(static_cast<std::size_t>(ctx.ticks));
    const auto actions = sc.value("actions", json::array());
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const auto& a = actions[i];
        const auto t = int_at(a, "tick");
        const auto verb = str_at(a, "do");
        if (t < 0 || t >= ctx.ticks) throw Error(Errc::ParseError, "action " + std::to_string(i) + ": tick out of range");
        if (verb != "pay" && verb != "note" && !driver->verbs().contains(verb))
            throw Error(Errc::ParseError, "action " + std::to_string(i) + ": unknown verb '" + verb + "' for " + protocol);
        schedule[static_cast<std::size_t>(t)].push_back({i, a, 0});
    }
    const auto assertions = sc.value("assertions", json::array());
    for (const auto& as : assertions) {
        str_at(as, "fact");
        if (!OPS.contains(as.value("op", std::string("eq")))) throw Error(Errc::ParseError, "unknown assertion op " + as.value("op", std::string()));
        if (!as.contains("value")) throw Error(Errc::ParseError, "assertion without value");
    }

    ctx.emit("harness", "start",
             {{"name", ctx.name}, {"protocol", protocol}, {"seed", ctx.seed}, {"era", std::string(to_string(*era))},
              {"ticks", ctx.ticks}, {"tick_seconds", ctx.tick_seconds}, {"start_time", ctx.start_time}});
    ctx.emit("chain", "genesis", {{"txid", ctx.chain->genesis_txid().hex()}, {"actors", genesis_log}});
    driver->setup(ctx, sc.value("params", json::object()));

    auto run_action = [&](const json& a) -> json {
        const auto verb = str_at(a, "do");
        if (verb == "note") return {{"text", a.value("text", std::string())}};
        if (verb == "pay") {
            const auto& from = ctx.key(str_at(a, "from"));
            const auto& to = ctx.key(str_at(a, "to"));
            auto tx = build_payment(*ctx.chain, from, {TxOut{int_at(a, "amount"), LockScript::pay_to_key(to.pub)}}, int_or(a, "fee", 1000),
                                    ctx.pool.get());
            const auto txid = ctx.submit_or_throw(tx, a.value("label", "pay." + std::to_string(ctx.tick)), "wallet");
            return {{"txid", txid.hex()}};
        }
        return driver->action(ctx, verb, a);
    };

    std::vector<PendingAction> carried;
    for (ctx.tick = 0; ctx.tick < ctx.ticks; ++ctx.tick) {
        ctx.now = ctx.time_at(ctx.tick);
        auto due = std::move(carried);
        carried.clear();
        for (auto& p : schedule[static_cast<std::size_t>(ctx.tick)]) due.push_back(std::move(p));

        for (auto& p : due) {
            ++p.attempts;
            const auto& a = p.spec;
            const auto verb = str_at(a, "do");
            const auto id = a.value("id", std::string());
            try {
                auto result = run_action(a);
                ctx.emit("action", "ok", {{"index", p.index}, {"do", verb}, {"id", id}, {"attempts", p.attempts}, {"result", result}});
                if (!id.empty()) ctx.action_results[id] = {{"ok", true}};
            } catch (const Error& e) {
                if (e.code() == Errc::ParseError) throw;
                if (int_or(a, "retry_until", -1) > ctx.tick) {
                    carried.push_back(std::move(p));
                    continue;
                }
                ++ctx.actions_failed;
                const auto code = std::string(errc_name(e.code()));
                ctx.emit("action", "failed",
                         {{"index", p.index}, {"do", verb}, {"id", id}, {"attempts", p.attempts}, {"error", code}, {"message", e.what()}});
                if (!id.empty()) ctx.action_results[id] = {{"ok", false}, {"error", code}};
            } catch (const json::exception& e) {
                throw Error(Errc::ParseError, "action " + std::to_string(p.index) + ": " + e.what());
            }
        }

        driver->poll(ctx);

        auto mined = mine_next(*ctx.chain, *ctx.pool, ctx.miners, *ctx.rng);
        json included = json::array();
        for (const auto& inc : mined.included) {
            json j = {{"txid", inc.txid.hex()}, {"arrival", inc.arrival}, {"delay", inc.delay()}, {"standard", inc.standard}};
            if (auto it = ctx.txid_label.find(inc.txid); it != ctx.txid_label.end()) {
                j["label"] = it->second;
                ctx.label_inclusion[it->second] = inc;
            }
            included.push_back(std::move(j));
        }
        json expired = json::array();
        for (const auto& t : mined.expired) expired.push_back(t.hex());
        ctx.emit("chain", "block",
                 {{"height", mined.block.height}, {"miner", mined.block.miner_id}, {"hash", mined.block.hash().hex()},
                  {"included", included}, {"expired", expired}});
        driver->after_block(ctx, mined);
        if (driver->has_side_chain()) driver->side_block(ctx);

        json summary = {{"height", ctx.chain->height()}, {"mempool", ctx.pool->size()}};
        json balances = json::object();
        for (const auto& a : ctx.actors) balances[a] = balance(*ctx.chain, ctx.key(a).pub);
        summary["balances"] = balances;
        driver->summary(ctx, summary);
        ctx.emit("harness", "tick", std::move(summary));
    }
    ctx.tick = ctx.ticks - 1;
    for (const auto& p : carried) {
        ++ctx.actions_failed;
        const auto id = p.spec.value("id", std::string());
        ctx.emit("action", "failed", {{"index", p.index}, {"do", p.spec.at("do")}, {"id", id}, {"attempts", p.attempts}, {"error", "Unfinished"}});
        if (!id.empty()) ctx.action_results[id] = {{"ok", false}, {"error", "Unfinished"}};
    }

    RunResult r;
    r.name = ctx.name;
    r.protocol = protocol;
    r.seed = ctx.seed;
    r.facts = generic_facts(ctx);
    driver->facts(ctx, r.facts);

    json checked = json::array();
    for (const auto& as : assertions) {
        AssertionOutcome o;
        o.fact = str_at(as, "fact");
        o.op = as.value("op", std::string("eq"));
        o.expected = as.at("value");
        o.actual = r.facts.contains(o.fact) ? r.facts.at(o.fact) : json();
        o.ok = compare_fact(o.actual, o.op, o.expected);
        checked.push_back({{"fact", o.fact}, {"op", o.op}, {"expected", o.expected}, {"actual", o.actual}, {"ok", o.ok}});
        r.assertions.push_back(std::move(o));
    }
    ctx.emit("harness", "end", {{"facts", r.facts}, {"assertions", checked}, {"passed", r.passed()}});

    r.log_text = ctx.log.text();
    r.digest = ctx.log.digest();
    return r;
}

} // namespace

RunResult run_scenario(std::string_view scenario_json, std::optional<std::uint64_t> seed_override)
{
    json sc;
    try {
        sc = json::parse(scenario_json);
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    }
    try {
        return run_parsed(sc, seed_override);
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    } catch (const Error& e) {
        // Setup failures (bad feed, bad key material) mean the scenario does not validate.
        if (e.code() == Errc::ParseError) throw;
        throw Error(Errc::ParseError, std::string(errc_name(e.code())) + ": " + e.what());
    }
}

RunResult run_scenario_file(const std::string& path, std::optional<std::uint64_t> seed_override)
{
    return run_scenario(read_file(path), seed_override);
}

std::string metrics_csv(std::string_view log_text)
{
    struct Row {
        json tick_summary;
        std::size_t blocks = 0;
        std::size_t included = 0;
        std::size_t nonstandard = 0;
        std::vector<std::pair<std::string, std::uint64_t>> delays;
    };
    std::map<std::int64_t, Row> rows;
    std::set<std::string> balance_cols, vtc_cols, xcp_cols;

    std::istringstream in{std::string(log_text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json ev;
        try {
            ev = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(Errc::ParseError, "log line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!ev.contains("tick") || !ev.contains("kind")) throw Error(Errc::ParseError, "log line " + std::to_string(lineno) + ": not an event");
        auto& row = rows[ev.at("tick").get<std::int64_t>()];
        const auto module = ev.value("module", std::string());
        const auto kind = ev.at("kind").get<std::string>();
        const auto& p = ev.value("payload", json::object());
        if (module == "chain" && kind == "block") {
            ++row.blocks;
            for (const auto& inc : p.at("included")) {
                ++row.included;
                if (!inc.value("standard", true)) ++row.nonstandard;
                row.delays.emplace_back(inc.value("label", inc.at("txid").get<std::string>().substr(0, 16)), inc.at("delay").get<std::uint64_t>());
            }
        } else if (module == "harness" && kind == "tick") {
            row.tick_summary = p;
            if (p.contains("balances")) for (const auto& [k, _] : p.at("balances").items()) balance_cols.insert(k);
            if (p.contains("vtc")) for (const auto& [k, _] : p.at("vtc").items()) vtc_cols.insert(k);
            if (p.contains("xcp")) for (const auto& [k, _] : p.at("xcp").items()) xcp_cols.insert(k);
        }
    }

    std::ostringstream out;
    out << "tick,height,mempool,blocks,txs_included,nonstandard_included,mean_inclusion_delay,max_inclusion_delay,inclusion_delays";
    for (const auto& c : balance_cols) out << ",balance." << c;
    for (const auto& c : vtc_cols) out << ",vtc." << c;
    for (const auto& c : xcp_cols) out << ",xcp." << c;
    out << '\n';

    auto cell = [](const json& obj, const char* group, const std::string& key) -> std::string {
        if (!obj.contains(group) || !obj.at(group).contains(key)) return "";
        return obj.at(group).at(key).dump();
    };
    for (const auto& [tick, row] : rows) {
        const auto& s = row.tick_summary;
        out << tick << ',' << (s.contains("height") ? s.at("height").dump() : "") << ',' << (s.contains("mempool") ? s.at("mempool").dump() : "")
            << ',' << row.blocks << ',' << row.included << ',' << row.nonstandard << ',';
        std::uint64_t sum = 0, mx = 0;
        std::string list;
        for (const auto& [label, d] : row.delays) {
            sum += d;
            mx = std::max(mx, d);
            if (!list.empty()) list += ';';
            list += label + '=' + std::to_string(d);
        }
        if (!row.delays.empty()) {
            std::ostringstream mean;
            mean.precision(6);
            mean << std::fixed << static_cast<double>(sum) / static_cast<double>(row.delays.size());
            out << mean.str();
        }
        out << ',';
        if (!row.delays.empty()) out << mx;
        out << ',' << list;
        for (const auto& c : balance_cols) out << ',' << cell(s, "balances", c);
        for (const auto& c : vtc_cols) out << ',' << cell(s, "vtc", c);
        for (const auto& c : xcp_cols) out << ',' << cell(s, "xcp", c);
        out << '\n';
    }
    return out.str();
}

} // namespace oraclesim::harness

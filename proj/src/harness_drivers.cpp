// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "harness_internal.hpp"

#include <oraclesim/codec.hpp>
#include <oraclesim/counterparty.hpp>
#include <oraclesim/errors.hpp>
#include <oraclesim/oraclize.hpp>
#include <oraclesim/orisi.hpp>
#include <oraclesim/realitykeys.hpp>
#include <oraclesim/truthcoin.hpp>
#include <oraclesim/wallet.hpp>
#include <oraclesim/will_oracle.hpp>

namespace oraclesim::harness::detail {

namespace {

std::string code_name(const Error& e) { return std::string(errc_name(e.code())); }

// ---------------------------------------------------------------------------
// Inheritance will with a single passive oracle.

class WillDriver final : public Driver {
public:
    std::string module() const override { return "will"; }
    const std::set<std::string>& verbs() const override
    {
        static const std::set<std::string> v = {"will.create", "will.claim"};
        return v;
    }

    void setup(Ctx& ctx, const json& params) override
    {
        m_server.emplace(ctx.key(params.value("oracle", std::string("oracle"))), ctx.feeds.at(str_at(params, "source")));
    }

    json action(Ctx& ctx, const std::string& verb, const json& a) override
    {
        if (verb == "will.create") {
            Entry e;
            e.expression = str_at(a, "expression");
            e.heir = str_at(a, "heir");
            auto made = create_will(*ctx.chain, ctx.key(str_at(a, "creator")), m_server->pub(), ctx.key(e.heir).pub, e.expression,
                                    int_at(a, "amount"), int_or(a, "fee", 1000), ctx.pool.get());
            e.contract = made.contract;
            e.label = a.value("label", "will.funding." + std::to_string(m_wills.size()));
            ctx.submit_or_throw(made.funding, e.label, module());
            m_wills.push_back(std::move(e));
            return {{"will", m_wills.size() - 1}, {"expr_hash", made.contract.expr_hash.hex()}, {"lock", lock_to_json(made.contract.lock())}};
        }
        // will.claim
        const auto idx = static_cast<std::size_t>(int_or(a, "will", 0));
        if (idx >= m_wills.size()) throw Error(Errc::InvalidArgument, "no will " + std::to_string(idx));
        auto& e = m_wills[idx];
        if (!ctx.confirmed(e.label)) throw Error(Errc::InvalidState, "will funding not confirmed");
        if (e.claimed_label) throw Error(Errc::AlreadySpent, "will already claimed");
        const auto expr = a.value("expression", e.expression);
        const auto dest = ctx.key(a.value("dest", e.heir)).pub;
        const auto fee = int_or(a, "fee", 1000);
        const auto partial = build_claim(e.contract, expr, dest, fee);
        Signature sig;
        try {
            sig = m_server->request_signature(*ctx.chain, expr, partial, 0, ctx.now);
        } catch (const Error& err) {
            m_refusal = code_name(err);
            ctx.emit(module(), "oracle_refused", {{"will", idx}, {"error", m_refusal}});
            throw;
        }
        ctx.emit(module(), "oracle_signed", {{"will", idx}, {"digest", sig.digest.hex()}});
        auto tx = claim(e.contract, expr, ctx.key(e.heir), sig, dest, fee);
        const auto label = a.value("label", "will.claim." + std::to_string(idx));
        ctx.submit_or_throw(tx, label, module());
        e.claimed_label = label;
        return {{"will", idx}, {"label", label}};
    }

    void facts(Ctx& ctx, json& f) override
    {
        f["will.count"] = m_wills.size();
        f["will.oracle_refusal"] = m_refusal;
        for (std::size_t i = 0; i < m_wills.size(); ++i) {
            const auto p = "will." + std::to_string(i) + ".";
            f[p + "funded"] = ctx.confirmed(m_wills[i].label);
            f[p + "claimed"] = m_wills[i].claimed_label && ctx.confirmed(*m_wills[i].claimed_label);
        }
    }

private:
    struct Entry {
        WillContract contract;
        std::string expression;
        std::string heir;
        std::string label;
        std::optional<std::string> claimed_label;
    };
    std::optional<OracleServer> m_server;
    std::vector<Entry> m_wills;
    std::string m_refusal;
};

// ---------------------------------------------------------------------------
// Reality Keys registry plus the two-party P2SH bet.

class RealityKeysDriver final : public Driver {
public:
    std::string module() const override { return "realitykeys"; }
    const std::set<std::string>& verbs() const override
    {
        static const std::set<std::string> v = {"rk.register", "rk.fund_temps", "rk.setup", "rk.object", "rk.claim", "rk.refund"};
        return v;
    }

    void setup(Ctx& ctx, const json& params) override
    {
        m_rk = std::make_unique<RealityKeys>(ctx.feeds, ctx.registry, params.value("seed", ctx.name),
                                             params.value("objection_window", DEFAULT_OBJECTION_WINDOW));
        const auto checks = params.value("human_check", json::object());
        for (const auto& [id, verdict] : checks.items()) m_verdicts[std::stoull(id)] = verdict.get<std::string>();
        m_rk->set_human_check([this](const FactInfo& f, Outcome claimed) {
            auto it = m_verdicts.find(f.id);
            if (it == m_verdicts.end()) return *f.posted_result;
            if (it->second == "claimed") return claimed;
            auto o = parse_outcome(it->second);
            if (!o) throw Error(Errc::ParseError, "human_check verdict must be yes, no or claimed");
            return *o;
        });
    }

    json action(Ctx& ctx, const std::string& verb, const json& a) override
    {
        if (verb == "rk.register") {
            SourceRef src{str_at(a, "source"), str_at(a, "key"), cmp_at(a, "cmp"), num_at(a, "threshold")};
            const auto& f = m_rk->register_fact(str_at(a, "question"), ctx.parse_time(a.at("resolution_time")), src, ctx.now);
            return {{"fact", f.id}, {"yes_pub", f.yes_pub.hex()}, {"no_pub", f.no_pub.hex()}};
        }
        if (verb == "rk.fund_temps") {
            const auto& fact = m_rk->fact(static_cast<FactId>(int_at(a, "fact")));
            Bet b;
            b.alice = str_at(a, "alice");
            b.bob = str_at(a, "bob");
            b.alice_temp = demo_makekeys(ctx.name + "/" + b.alice);
            b.bob_temp = demo_makekeys(ctx.name + "/" + b.bob);
            ctx.registry.enroll(b.alice_temp);
            ctx.registry.enroll(b.bob_temp);
            b.terms.fact_id = fact.id;
            b.terms.yes_pub = fact.yes_pub;
            b.terms.no_pub = fact.no_pub;
            b.terms.alice_pub = b.alice_temp.pub;
            b.terms.bob_pub = b.bob_temp.pub;
            b.terms.alice_stake = int_at(a, "alice_stake");
            b.terms.bob_stake = int_at(a, "bob_stake");
            b.terms.fee = int_or(a, "contract_fee", 1000);
            const auto fee = int_or(a, "fee", 1000);
            auto ta = build_payment(*ctx.chain, ctx.key(b.alice), {TxOut{b.terms.alice_stake, LockScript::pay_to_key(b.alice_temp.pub)}}, fee, ctx.pool.get());
            auto tb = build_payment(*ctx.chain, ctx.key(b.bob), {TxOut{b.terms.bob_stake, LockScript::pay_to_key(b.bob_temp.pub)}}, fee, ctx.pool.get());
            b.terms.alice_temp = {ctx.submit_or_throw(ta, "rk.temp." + b.alice, module()), 0};
            b.terms.bob_temp = {ctx.submit_or_throw(tb, "rk.temp." + b.bob, module()), 0};
            m_bet = std::move(b);
            return {{"alice_temp", m_bet->alice_temp.pub.hex()}, {"bob_temp", m_bet->bob_temp.pub.hex()}};
        }
        if (!m_bet && verb != "rk.object") throw Error(Errc::InvalidState, "no bet funded");
        if (verb == "rk.setup") {
            auto partial = demo_setup(*ctx.chain, m_bet->terms, m_bet->alice_temp);
            auto full = demo_countersign(*ctx.chain, m_bet->terms, m_bet->bob_temp, partial);
            ctx.submit_or_throw(full, "rk.contract", module());
            return {{"redeem", lock_to_json(demo_redeem(m_bet->terms))}};
        }
        if (verb == "rk.object") {
            const auto claimed = parse_outcome(str_at(a, "claimed"));
            if (!claimed) throw Error(Errc::ParseError, "claimed must be yes or no");
            const auto& f = m_rk->object(static_cast<FactId>(int_at(a, "fact")), int_at(a, "tip"), *claimed, ctx.now);
            return {{"fact", f.id}, {"human_override", f.human_override ? json(std::string(to_string(*f.human_override))) : json()}};
        }
        if (verb == "rk.claim") {
            if (!ctx.confirmed("rk.contract")) throw Error(Errc::InvalidState, "contract not confirmed");
            const auto who = str_at(a, "claimant");
            const KeyPair& signer = who == m_bet->alice ? m_bet->alice_temp : who == m_bet->bob ? m_bet->bob_temp : ctx.key(who);
            const auto value = m_bet->terms.alice_stake + m_bet->terms.bob_stake - m_bet->terms.fee;
            auto tx = demo_claim(*m_rk, m_bet->terms, {ctx.label_txid.at("rk.contract"), 0}, value, signer, ctx.key(who).pub, int_or(a, "fee", 1000));
            ctx.submit_or_throw(tx, "rk.claim", module());
            m_claimed_by = who;
            return {{"claimant", who}};
        }
        // rk.refund
        const auto who = str_at(a, "party");
        const bool is_alice = who == m_bet->alice;
        if (!is_alice && who != m_bet->bob) throw Error(Errc::InvalidArgument, "not a party to the bet");
        auto tx = demo_refund(*ctx.chain, is_alice ? m_bet->terms.alice_temp : m_bet->terms.bob_temp, is_alice ? m_bet->alice_temp : m_bet->bob_temp,
                              ctx.key(who).pub, int_or(a, "fee", 1000));
        ctx.submit_or_throw(tx, "rk.refund." + who, module());
        return {{"party", who}};
    }

    void poll(Ctx& ctx) override
    {
        for (const auto& [id, f] : m_rk->facts()) {
            try {
                if (f.state == FactState::Registered && ctx.now >= f.resolution_time) {
                    const auto& g = m_rk->post_result(id, ctx.now);
                    ctx.emit(module(), "posted", {{"fact", id}, {"result", std::string(to_string(*g.posted_result))}, {"deadline", g.objection_deadline}});
                } else if (f.state == FactState::ResultPosted && ctx.now >= f.objection_deadline) {
                    m_rk->finalize(id, ctx.now);
                    const auto& g = m_rk->fact(id);
                    ctx.emit(module(), "finalized", {{"fact", id}, {"result", std::string(to_string(*g.final_result))}});
                }
            } catch (const Error& e) {
                if (e.code() != Errc::NoData) throw;
                ctx.emit(module(), "no_data", {{"fact", id}});
            }
        }
    }

    void facts(Ctx& ctx, json& out) override
    {
        for (const auto& [id, f] : m_rk->facts()) {
            const auto p = "rk.fact." + std::to_string(id) + ".";
            out[p + "state"] = std::string(to_string(f.state));
            out[p + "posted"] = f.posted_result ? json(std::string(to_string(*f.posted_result))) : json("none");
            out[p + "override"] = f.human_override ? json(std::string(to_string(*f.human_override))) : json("none");
            out[p + "final"] = f.final_result ? json(std::string(to_string(*f.final_result))) : json("none");
            out[p + "tips"] = f.tips_collected;
            out[p + "yes_secret"] = std::string(to_string(m_rk->secret(id, Outcome::Yes).status));
            out[p + "no_secret"] = std::string(to_string(m_rk->secret(id, Outcome::No).status));
        }
        out["rk.contract.confirmed"] = ctx.confirmed("rk.contract");
        out["rk.claim.confirmed"] = ctx.confirmed("rk.claim");
        out["rk.claimed_by"] = m_claimed_by;
    }

private:
    struct Bet {
        DemoTerms terms;
        KeyPair alice_temp;
        KeyPair bob_temp;
        std::string alice;
        std::string bob;
    };
    std::unique_ptr<RealityKeys> m_rk;
    std::map<FactId, std::string> m_verdicts;
    std::optional<Bet> m_bet;
    std::string m_claimed_by;
};

// ---------------------------------------------------------------------------
// Orisi: padded multisig safe, oracle set, PoW message bus.

class OrisiDriver final : public Driver {
public:
    std::string module() const override { return "orisi"; }
    const std::set<std::string>& verbs() const override
    {
        static const std::set<std::string> v = {"orisi.propose", "orisi.ack", "orisi.activate", "orisi.theft", "orisi.offline", "orisi.online", "orisi.spam"};
        return v;
    }

    void setup(Ctx& ctx, const json& params) override
    {
        m_m = static_cast<int>(int_at(params, "m"));
        m_difficulty = static_cast<unsigned>(params.value("bus_difficulty", DEFAULT_BUS_DIFFICULTY));
        m_bus = MessageBus(m_difficulty);
        m_poll_interval = params.value("poll_interval", DEFAULT_POLL_INTERVAL);
        for (const auto& o : params.at("oracles")) {
            OracleNode n;
            n.id = str_at(o, "id");
            n.keys = ctx.key(n.id);
            n.feed = &ctx.feeds.at(str_at(o, "feed"));
            n.required_fee = int_or(o, "fee", 0);
            m_nodes.push_back(std::move(n));
        }
    }

    json action(Ctx& ctx, const std::string& verb, const json& a) override
    {
        if (verb == "orisi.propose") {
            const auto sp = compute_safe_params(m_m, static_cast<int>(m_nodes.size()));
            m_agents = make_agent_keys(ctx.name, sp.agent_keys);
            std::vector<PubKey> agent_pubs;
            for (const auto& k : m_agents) {
                ctx.registry.enroll(k);
                agent_pubs.push_back(k.pub);
            }
            std::vector<OracleInfo> infos;
            for (const auto& n : m_nodes) infos.push_back(n.info());
            const auto& c = a.at("condition");
            OrisiCondition cond{str_at(c, "source"), str_at(c, "key"), cmp_at(c, "cmp"), c.value("threshold", 0.0), ctx.parse_time(c.at("settle_time"))};
            auto fees = standard_fee_outputs(infos, int_at(a, "oracle_fee"), ctx.key(str_at(a, "project")).pub, int_at(a, "project_fee"));
            m_alice = str_at(a, "alice");
            m_bob = str_at(a, "bob");
            m_contract = OrisiContract::propose(*ctx.chain, ctx.key(m_alice), ctx.key(m_bob).pub, infos, m_m, agent_pubs, cond, int_at(a, "amount"),
                                                std::move(fees), int_or(a, "tx_fee", 1000), int_or(a, "funding_fee", 1000), ctx.pool.get());
            m_poll_start = ctx.now;
            return {{"contract", m_contract->id().hex()},
                    {"threshold", sp.threshold},
                    {"total_keys", sp.total_keys},
                    {"agent_keys", sp.agent_keys},
                    {"safe_redeem", lock_to_json(m_contract->safe_redeem())}};
        }
        if (verb == "orisi.offline" || verb == "orisi.online") {
            for (const auto& id : a.at("oracles")) {
                if (verb == "orisi.offline")
                    m_offline.insert(id.get<std::string>());
                else
                    m_offline.erase(id.get<std::string>());
            }
            return {{"offline", m_offline}};
        }
        if (verb == "orisi.spam") {
            const auto count = int_at(a, "count");
            const auto diff = static_cast<unsigned>(int_or(a, "difficulty", 0));
            for (std::int64_t i = 0; i < count; ++i) {
                ByteWriter w;
                w.str("spam");
                w.i64(ctx.tick);
                w.i64(i);
                m_bus.post(seal_message(std::move(w).take(), diff));
            }
            return {{"posted", count}, {"difficulty", diff}};
        }
        if (!m_contract) throw Error(Errc::InvalidState, "no contract proposed");
        if (verb == "orisi.ack") {
            json acked = json::array();
            for (const auto& n : m_nodes) {
                if (a.contains("oracles") && std::find(a.at("oracles").begin(), a.at("oracles").end(), n.id) == a.at("oracles").end()) continue;
                m_contract->oracle_ack(n);
                acked.push_back(n.id);
            }
            return {{"acked", acked}, {"state", std::string(to_string(m_contract->state()))}};
        }
        if (verb == "orisi.activate") {
            ctx.submit_or_throw(m_contract->activate(), "orisi.funding", module());
            return {{"safe", m_contract->safe_outpoint().txid.hex()}};
        }
        // orisi.theft: colluding oracles sign a spend of the safe to themselves.
        auto tx = spend_to(m_contract->safe_outpoint(), ctx.key(str_at(a, "dest")).pub, m_contract->amount() - int_or(a, "fee", 1000));
        json signers = json::array();
        for (const auto& n : m_nodes) {
            if (std::find(a.at("oracles").begin(), a.at("oracles").end(), n.id) == a.at("oracles").end()) continue;
            sign_input(tx, 0, n.keys.secret);
            signers.push_back(n.id);
        }
        tx.inputs[0].witness.redeem = m_contract->safe_redeem();
        ++m_theft_attempts;
        const auto res = ctx.submit(tx, "orisi.theft." + std::to_string(m_theft_attempts), module());
        if (res.accepted()) m_theft_accepted = true;
        return {{"signers", signers}, {"status", std::string(to_string(res.status))}, {"reason", res.reason ? json(std::string(to_string(*res.reason))) : json()}};
    }

    void poll(Ctx& ctx) override
    {
        if (!m_contract) return;
        if (m_settle && !ctx.chain->is_confirmed(m_settle_txid) && !ctx.pool->contains(m_settle_txid)) {
            ctx.emit(module(), "resubmit", {{"txid", m_settle_txid.hex()}});
            ctx.submit(*m_settle, "orisi.settle", module());
        }
        if (m_contract->state() != OrisiState::Active || !ctx.confirmed("orisi.funding")) return;

        if ((ctx.now - m_poll_start) % m_poll_interval == 0) {
            json signers = json::array();
            for (const auto& n : m_nodes) {
                if (m_offline.contains(n.id)) continue;
                if (auto msg = m_contract->poll_and_sign(n, ctx.now, m_difficulty)) {
                    m_bus.post(std::move(*msg));
                    signers.push_back(n.id);
                }
            }
            if (!signers.empty()) ctx.emit(module(), "oracles_signed", {{"oracles", signers}});
        }
        const auto before = m_bus.dropped();
        std::size_t accepted = 0, delivered = 0;
        for (const auto& msg : m_bus.drain()) {
            ++delivered;
            if (m_contract->receive(msg, ctx.registry)) ++accepted;
        }
        if (delivered || m_bus.dropped() != before)
            ctx.emit(module(), "bus", {{"delivered", delivered}, {"accepted", accepted}, {"dropped", m_bus.dropped() - before}});

        for (auto d : {Draft::Unlock, Draft::Refund}) {
            if (m_contract->signature_count(d) + m_agents.size() < static_cast<std::size_t>(m_contract->params().threshold)) continue;
            auto tx = m_contract->finalize(d, m_agents, ctx.registry);
            m_settle_txid = ctx.submit(tx, "orisi.settle", module()).txid;
            m_settle = std::move(tx);
            ctx.emit(module(), "finalized", {{"draft", std::string(to_string(d))}, {"oracle_signatures", m_contract->signature_count(d)}});
            break;
        }
    }

    void facts(Ctx& ctx, json& f) override
    {
        f["orisi.bus_dropped"] = m_bus.dropped();
        f["orisi.theft_attempts"] = m_theft_attempts;
        f["orisi.theft_accepted"] = m_theft_accepted;
        if (!m_contract) return;
        f["orisi.state"] = std::string(to_string(m_contract->state()));
        f["orisi.finalized"] = m_contract->finalized() ? json(std::string(to_string(*m_contract->finalized()))) : json("none");
        f["orisi.acks"] = m_contract->acks().size();
        f["orisi.threshold"] = m_contract->params().threshold;
        f["orisi.total_keys"] = m_contract->params().total_keys;
        f["orisi.sigs.unlock"] = m_contract->signature_count(Draft::Unlock);
        f["orisi.sigs.refund"] = m_contract->signature_count(Draft::Refund);
        f["orisi.settle.confirmed"] = m_settle && ctx.chain->is_confirmed(m_settle_txid);
    }

private:
    int m_m = 0;
    unsigned m_difficulty = DEFAULT_BUS_DIFFICULTY;
    Timestamp m_poll_interval = DEFAULT_POLL_INTERVAL;
    Timestamp m_poll_start = 0;
    MessageBus m_bus;
    std::vector<OracleNode> m_nodes;
    std::set<std::string> m_offline;
    std::vector<KeyPair> m_agents;
    std::optional<OrisiContract> m_contract;
    std::string m_alice, m_bob;
    std::optional<Transaction> m_settle;
    Txid m_settle_txid;
    int m_theft_attempts = 0;
    bool m_theft_accepted = false;
};

// ---------------------------------------------------------------------------
// Truthcoin: markets, ballots, side-chain veto.

class TruthcoinDriver final : public Driver {
public:
    std::string module() const override { return "truthcoin"; }
    const std::set<std::string>& verbs() const override
    {
        static const std::set<std::string> v = {"tc.grant", "tc.peg_in", "tc.peg_out", "tc.decision", "tc.market",
                                                "tc.trade", "tc.commit", "tc.reveal", "tc.redeem"};
        return v;
    }
    bool has_side_chain() const override { return true; }

    void setup(Ctx& ctx, const json& params) override
    {
        truthcoin::Params p;
        p.quorum = params.value("quorum", p.quorum);
        p.severity = params.value("severity", p.severity);
        p.commit_period = params.value("commit_period", p.commit_period);
        p.reveal_period = params.value("reveal_period", p.reveal_period);
        p.waiting_period = params.value("waiting_period", p.waiting_period);
        p.veto_window = params.value("veto_window", p.veto_window);
        m_engine = std::make_unique<truthcoin::Engine>(p);
        for (const auto& m : params.value("side_miners", json::array({{{"id", "side"}, {"share", 1.0}}})))
            m_side_miners.push_back({Miner{str_at(m, "id"), num_at(m, "share"), false, DEFAULT_BLOCK_BUDGET}, m.value("veto", false)});
        std::vector<Miner> table;
        for (const auto& s : m_side_miners) table.push_back(s.miner);
        try {
            check_miner_table(table);
        } catch (const Error& e) {
            throw Error(Errc::ParseError, std::string("side_miners: ") + e.what());
        }
        m_side_rng = std::make_unique<Rng>(ctx.seed ^ 0x9e3779b97f4a7c15ULL);
    }

    json action(Ctx& ctx, const std::string& verb, const json& a) override
    {
        using namespace truthcoin;
        auto& e = *m_engine;
        if (verb == "tc.grant") {
            e.grant_vtc(track(str_at(a, "who")), int_at(a, "vtc"));
            return {{"vtc", e.vtc(str_at(a, "who"))}};
        }
        if (verb == "tc.peg_in") {
            e.peg_in(track(str_at(a, "who")), int_at(a, "csh"));
            return {{"csh", e.csh(str_at(a, "who"))}};
        }
        if (verb == "tc.peg_out") {
            e.peg_out(str_at(a, "who"), int_at(a, "csh"));
            return {{"csh", e.csh(str_at(a, "who"))}};
        }
        if (verb == "tc.decision") {
            const auto kind = a.value("kind", std::string("binary")) == "scalar" ? DecisionKind::Scalar : DecisionKind::Binary;
            const auto id = e.add_decision(str_at(a, "author"), str_at(a, "prompt"), kind, a.value("xmin", 0.0), a.value("xmax", 1.0),
                                           ctx.parse_time(a.at("maturity_time")), ctx.now);
            return {{"decision", id}};
        }
        if (verb == "tc.market") {
            const auto id = e.add_market(track(str_at(a, "author")), a.at("decisions").get<std::vector<DecisionId>>(), num_at(a, "b"),
                                         a.value("fee_rate", 0.0), ctx.now);
            return {{"market", id}, {"collateral", e.market(id).collateral}};
        }
        if (verb == "tc.trade") {
            const auto m = static_cast<MarketId>(int_at(a, "market"));
            const auto charge = e.trade(m, track(str_at(a, "who")), static_cast<std::size_t>(int_at(a, "state")), int_at(a, "shares"), ctx.now);
            return {{"charge", charge}, {"prices", e.prices(m)}};
        }
        if (verb == "tc.commit" || verb == "tc.reveal") {
            Reports reports;
            for (const auto& [id, v] : a.at("reports").items()) reports[std::stoull(id)] = v.get<double>();
            const auto salt = a.value("salt", std::string("salt"));
            const auto who = track(str_at(a, "who"));
            const auto ballot = static_cast<BallotId>(int_at(a, "ballot"));
            if (verb == "tc.commit") {
                e.commit_vote(who, ballot, vote_commitment(reports, as_bytes(salt)), int_at(a, "stake"), ctx.now);
                return {{"frozen", e.frozen_vtc(who)}};
            }
            e.reveal_vote(who, ballot, reports, as_bytes(salt), ctx.now);
            return {{"revealed", true}};
        }
        // tc.redeem
        const auto who = str_at(a, "who");
        const auto paid = e.redeem(static_cast<MarketId>(int_at(a, "market")), who);
        m_redeemed[who] += paid;
        return {{"paid", paid}};
    }

    void poll(Ctx& ctx) override
    {
        using namespace truthcoin;
        auto& e = *m_engine;
        if (auto b = e.mature_and_ballot(ctx.now)) ctx.emit(module(), "ballot_opened", ballot_json(*b));
        std::vector<BallotId> ids;
        for (const auto& [id, _] : e.ballots()) ids.push_back(id);
        for (auto id : ids) {
            const auto& b = e.ballot(id);
            if (b.state == BallotState::Voting && ctx.now >= b.reveal_end) {
                e.resolve_ballot(id, ctx.now);
                ctx.emit(module(), "ballot_resolved", ballot_json(id));
            } else if (b.state == BallotState::Resolved) {
                try {
                    const auto r = e.veto_window(id, ctx.now);
                    ctx.emit(module(), r == VetoResult::Revote ? "ballot_revote" : "ballot_confirmed", ballot_json(id));
                    if (r == VetoResult::Revote) {
                        const auto newest = e.ballots().rbegin()->first;
                        ctx.emit(module(), "ballot_opened", ballot_json(newest));
                    }
                } catch (const Error& err) {
                    if (err.code() != Errc::WindowOpen) throw;
                }
            }
        }
    }

    void side_block(Ctx& ctx) override
    {
        using namespace truthcoin;
        std::vector<Miner> table;
        for (const auto& s : m_side_miners) table.push_back(s.miner);
        const auto& winner = draw_miner(table, *m_side_rng);
        bool veto = false;
        for (const auto& s : m_side_miners)
            if (s.miner.id == winner.id) veto = s.veto;
        SideBlock sb;
        sb.height = m_engine->side_blocks().size() + 1;
        sb.miner_id = winner.id;
        sb.time = ctx.now;
        if (veto)
            for (const auto& [id, b] : m_engine->ballots())
                if (b.state == BallotState::Resolved) sb.veto_flags.insert(id);
        m_engine->add_side_block(sb);
        if (!sb.veto_flags.empty()) ctx.emit(module(), "side_veto", {{"height", sb.height}, {"miner", sb.miner_id}, {"ballots", sb.veto_flags}});
    }

    void summary(Ctx&, json& s) override
    {
        json vtc = json::object(), csh = json::object();
        for (const auto& a : m_addresses) {
            vtc[a] = m_engine->vtc(a) + m_engine->frozen_vtc(a);
            csh[a] = m_engine->csh(a);
        }
        s["vtc"] = vtc;
        s["csh"] = csh;
    }

    void facts(Ctx&, json& f) override
    {
        using namespace truthcoin;
        const auto& e = *m_engine;
        for (const auto& a : m_addresses) {
            f["tc.vtc." + a] = e.vtc(a);
            f["tc.frozen." + a] = e.frozen_vtc(a);
            f["tc.vtc_total." + a] = e.vtc(a) + e.frozen_vtc(a);
            f["tc.csh." + a] = e.csh(a);
            f["tc.redeemed." + a] = m_redeemed.contains(a) ? m_redeemed.at(a) : 0;
        }
        f["tc.total_vtc"] = e.total_vtc();
        f["tc.total_csh"] = e.total_csh();
        f["tc.reserve"] = e.btc_reserve();
        f["tc.side_blocks"] = e.side_blocks().size();
        for (const auto& [id, d] : e.decisions()) {
            const auto p = "tc.decision." + std::to_string(id) + ".";
            f[p + "state"] = std::string(to_string(d.state));
            f[p + "outcome"] = d.outcome ? json(*d.outcome) : json();
            f[p + "unresolvable"] = d.unresolvable;
        }
        for (const auto& [id, b] : e.ballots()) f["tc.ballot." + std::to_string(id) + ".state"] = std::string(to_string(b.state));
        f["tc.ballots"] = e.ballots().size();
        for (const auto& [id, m] : e.markets()) {
            const auto p = "tc.market." + std::to_string(id) + ".";
            f[p + "collateral"] = m.collateral;
            f[p + "solvent"] = solvent(m);
        }
    }

private:
    struct SideMiner {
        Miner miner;
        bool veto = false;
    };

    const std::string& track(const std::string& who) { return *m_addresses.insert(who).first; }

    json ballot_json(truthcoin::BallotId id) const
    {
        const auto& b = m_engine->ballot(id);
        json outcomes = json::object();
        for (const auto& [d, v] : b.outcomes) outcomes[std::to_string(d)] = v;
        return {{"ballot", id},
                {"decisions", b.decisions},
                {"state", std::string(to_string(b.state))},
                {"commit_end", b.commit_end},
                {"reveal_end", b.reveal_end},
                {"outcomes", outcomes},
                {"deltas", b.deltas},
                {"revote_of", b.revote_of ? json(*b.revote_of) : json()}};
    }

    /** Collateral covers every outstanding claim: exact payoffs once confirmed, the worst state before. */
    bool solvent(const truthcoin::Market& m) const
    {
        using namespace truthcoin;
        std::vector<Units> outstanding(m.q.size(), 0);
        for (const auto& [_, h] : m.holdings)
            for (std::size_t s = 0; s < h.size(); ++s) outstanding[s] += h[s];
        bool confirmed = true;
        std::vector<double> norm;
        for (auto d : m.decisions) {
            const auto& dec = m_engine->decision(d);
            if (dec.state != DecisionState::Confirmed) confirmed = false;
            norm.push_back(confirmed ? dec.normalized_outcome() : 0.0);
        }
        if (!confirmed) return m.collateral >= *std::max_element(outstanding.begin(), outstanding.end());
        Units owed = 0;
        for (std::size_t s = 0; s < outstanding.size(); ++s)
            owed += static_cast<Units>(std::floor(static_cast<double>(outstanding[s]) * state_payoff(s, norm)));
        return m.collateral >= owed;
    }

    std::unique_ptr<truthcoin::Engine> m_engine;
    std::vector<SideMiner> m_side_miners;
    std::unique_ptr<Rng> m_side_rng;
    std::set<std::string> m_addresses;
    std::map<std::string, truthcoin::Units> m_redeemed;
};

// ---------------------------------------------------------------------------
// Counterparty: meta-protocol messages in host transactions.

class CounterpartyDriver final : public Driver {
public:
    std::string module() const override { return "counterparty"; }
    const std::set<std::string>& verbs() const override
    {
        static const std::set<std::string> v = {"cp.burn", "cp.send", "cp.broadcast", "cp.bet", "cp.rate"};
        return v;
    }

    void setup(Ctx&, const json& params) override
    {
        m_cfg = counterparty::default_config();
        m_cfg.burn_rate = params.value("burn_rate", m_cfg.burn_rate);
    }

    json action(Ctx& ctx, const std::string& verb, const json& a) override
    {
        using namespace counterparty;
        if (verb == "cp.rate") {
            const auto& r = m_ratings.rate(ctx.key(str_at(a, "feed")).pub, str_at(a, "rater"), static_cast<int>(int_at(a, "stars")),
                                           a.value("comment", std::string()));
            return {{"stars", r.stars}};
        }
        const auto who = str_at(a, "who");
        MetaMessage msg;
        std::vector<TxOut> extra;
        if (verb == "cp.burn") {
            const auto btc = int_at(a, "btc");
            msg = Burn{btc};
            extra.push_back(TxOut{btc, LockScript::pay_to_key(m_cfg.burn_pub)});
        } else if (verb == "cp.send") {
            msg = Send{ASSET_XCP, int_at(a, "qty"), ctx.key(str_at(a, "to")).pub};
        } else if (verb == "cp.broadcast") {
            msg = Broadcast{a.contains("timestamp") ? ctx.parse_time(a.at("timestamp")) : ctx.now, num_at(a, "value"),
                            static_cast<std::uint64_t>(int_or(a, "fee_fraction", 0)), a.value("text", std::string())};
        } else {
            Bet b;
            b.feed = ctx.key(str_at(a, "feed")).pub;
            b.cmp = cmp_at(a, "cmp");
            b.target = num_at(a, "target");
            b.deadline = ctx.parse_time(a.at("deadline"));
            b.wager = int_at(a, "wager");
            b.counterwager = int_at(a, "counterwager");
            b.side = a.value("side", std::string("yes")) == "no" ? BetSide::No : BetSide::Yes;
            msg = b;
        }
        auto tx = build_message_tx(*ctx.chain, ctx.key(who), msg, ctx.policy, int_or(a, "fee", 1000), std::move(extra), ctx.pool.get());
        const auto label = a.value("label", verb + "." + std::to_string(ctx.tick) + "." + who);
        ctx.submit_or_throw(tx, label, module());
        return {{"label", label}, {"message", message_to_json(msg)}};
    }

    void after_block(Ctx& ctx, const MinedBlock& mined) override
    {
        const auto first = m_state.log.size();
        counterparty::apply_block(m_state, *ctx.chain, mined.block, m_cfg);
        for (auto i = first; i < m_state.log.size(); ++i) {
            const auto& e = m_state.log[i];
            json p = {{"height", e.height}, {"index", e.index}, {"txid", e.txid.hex()}, {"kind", e.kind}, {"valid", e.valid}, {"reason", e.reason}};
            if (auto it = ctx.txid_label.find(e.txid); it != ctx.txid_label.end()) p["label"] = it->second;
            ctx.emit(module(), "meta", std::move(p));
        }
        if (m_state.circulating() != m_state.issued)
            ctx.emit(module(), "conservation_broken", {{"issued", m_state.issued}, {"circulating", m_state.circulating()}});
    }

    void summary(Ctx& ctx, json& s) override
    {
        json xcp = json::object();
        for (const auto& a : ctx.actors) xcp[a] = m_state.balance(ctx.key(a).pub);
        s["xcp"] = xcp;
    }

    void facts(Ctx& ctx, json& f) override
    {
        using namespace counterparty;
        for (const auto& a : ctx.actors) {
            f["cp.xcp." + a] = m_state.balance(ctx.key(a).pub);
            if (auto avg = m_ratings.average(ctx.key(a).pub)) f["cp.rating." + a] = *avg;
        }
        f["cp.issued"] = m_state.issued;
        f["cp.burned_btc"] = m_state.burned_btc;
        f["cp.escrowed"] = m_state.escrowed();
        f["cp.circulating"] = m_state.circulating();
        f["cp.conserved"] = m_state.circulating() == m_state.issued;
        f["cp.host_circulating_supply"] = circulating_supply(*ctx.chain, m_cfg);
        std::size_t valid = 0;
        for (const auto& e : m_state.log) {
            if (e.valid) ++valid;
            if (auto it = ctx.txid_label.find(e.txid); it != ctx.txid_label.end()) {
                f["cp.valid." + it->second] = e.valid;
                f["cp.reason." + it->second] = e.reason;
            }
        }
        f["cp.log.valid"] = valid;
        f["cp.log.invalid"] = m_state.log.size() - valid;
        for (std::size_t i = 0; i < m_state.bets.size(); ++i) {
            f["cp.bet." + std::to_string(i) + ".state"] = std::string(to_string(m_state.bets[i].state));
            f["cp.bet." + std::to_string(i) + ".payout"] = m_state.bets[i].payout;
        }
        f["cp.digest"] = m_state.digest().hex();
        f["cp.replay_matches"] = replay(*ctx.chain, m_cfg).digest() == m_state.digest();
    }

private:
    counterparty::Config m_cfg;
    counterparty::MetaState m_state;
    counterparty::RatingBook m_ratings;
};

// ---------------------------------------------------------------------------
// Oraclize-style conditional contract with authenticity proofs.

class OraclizeDriver final : public Driver {
public:
    std::string module() const override { return "oraclize"; }
    const std::set<std::string>& verbs() const override
    {
        static const std::set<std::string> v = {"oz.build", "oz.offline", "oz.online", "oz.tamper", "oz.arbitrate"};
        return v;
    }

    void setup(Ctx& ctx, const json& params) override
    {
        m_oracle_name = params.value("oracle", std::string("oracle"));
        m_svc.keys = ctx.key(m_oracle_name);
        m_svc.feeds = &ctx.feeds;
        m_svc.attestor_id = params.value("attestor", std::string("oraclize"));
        m_cosigner = params.value("cosigner", std::string());
    }

    json action(Ctx& ctx, const std::string& verb, const json& a) override
    {
        using namespace oraclize;
        if (verb == "oz.offline" || verb == "oz.online") {
            m_svc.online = verb == "oz.online";
            return {{"online", m_svc.online}};
        }
        if (verb == "oz.tamper") {
            const bool on = a.value("on", true);
            if (on)
                m_svc.tamper = [](AuthenticityProof& p) { p.response_digest.bytes[0] ^= 0x01; };
            else
                m_svc.tamper = nullptr;
            return {{"tamper", on}};
        }
        if (verb == "oz.arbitrate") {
            if (!m_contract || m_arbitrator.empty()) throw Error(Errc::InvalidState, "no arbitrated contract");
            auto s = m_contract->arbitrate(ctx.key(m_arbitrator), ctx.key(str_at(a, "to")).pub, ctx.now);
            broadcast(ctx, s, "oz.settle");
            return {{"to", str_at(a, "to")}};
        }
        ContractTerms t;
        m_alice = str_at(a, "alice");
        m_bob = str_at(a, "bob");
        t.alice = ctx.key(m_alice).pub;
        t.bob = ctx.key(m_bob).pub;
        t.oracle = m_svc.keys.pub;
        if (a.contains("arbitrator")) {
            m_arbitrator = str_at(a, "arbitrator");
            t.arbitrator = ctx.key(m_arbitrator).pub;
        }
        for (const auto& c : a.at("conditions"))
            t.conditions.push_back({str_at(c, "source"), str_at(c, "key"), cmp_at(c, "cmp"), c.value("threshold", 0.0), ctx.key(str_at(c, "beneficiary")).pub});
        t.default_beneficiary = ctx.key(str_at(a, "default_beneficiary")).pub;
        t.start = ctx.parse_time(a.at("start"));
        t.end = ctx.parse_time(a.at("end"));
        t.poll_interval = int_or(a, "poll_interval", oraclize::DEFAULT_POLL_INTERVAL);
        t.refund_locktime = static_cast<Height>(int_at(a, "refund_locktime"));
        t.proofshield = a.value("proofshield", true);
        t.alice_stake = int_at(a, "alice_stake");
        t.bob_stake = int_at(a, "bob_stake");
        t.fee = int_or(a, "fee", 1000);
        m_contract = ConditionalContract::build(*ctx.chain, t, ctx.feeds, ctx.key(m_alice), ctx.key(m_bob), ctx.pool.get());
        ctx.submit_or_throw(m_contract->funding_tx(), "oz.funding", module());
        return {{"funding_lock", lock_to_json(m_contract->funding_lock())}, {"refund_locktime", t.refund_locktime}};
    }

    void poll(Ctx& ctx) override
    {
        using namespace oraclize;
        if (!m_contract) return;
        if (m_pending && !ctx.chain->is_confirmed(m_pending->txid()) && !ctx.pool->contains(m_pending->txid())) {
            ctx.emit(module(), "resubmit", {{"txid", m_pending->txid().hex()}});
            ctx.submit(*m_pending, m_pending_label, module());
        }
        if (m_contract->state() != ContractState::Active || !ctx.confirmed("oz.funding")) return;
        const auto& t = m_contract->terms();

        if (m_svc.online && m_contract->is_poll_time(ctx.now)) {
            ++m_polls;
            try {
                if (auto s = m_contract->poll(m_svc, ctx.now)) {
                    ctx.emit(module(), "settled_condition", settlement_json(*s));
                    broadcast(ctx, *s, "oz.settle");
                    return;
                }
                ctx.emit(module(), "poll", {{"time", ctx.now}, {"result", "no condition holds"}});
            } catch (const Error& e) {
                if (e.code() != Errc::ProofInvalid) throw;
                ++m_refused;
                ctx.emit(module(), "proof_refused", {{"time", ctx.now}});
            }
        }
        if (m_svc.online && ctx.now >= t.end) {
            auto s = m_contract->settle_default(m_svc, ctx.now);
            ctx.emit(module(), "settled_default", settlement_json(s));
            broadcast(ctx, s, "oz.settle");
            return;
        }
        const auto next_height = ctx.chain->height() + 1;
        if (next_height >= t.refund_locktime) {
            const auto& tx = m_contract->refund_expiry(next_height);
            ctx.emit(module(), "refund", {{"height", next_height}});
            m_pending = tx;
            m_pending_label = "oz.refund";
            ctx.submit(tx, "oz.refund", module());
        }
    }

    void facts(Ctx& ctx, json& f) override
    {
        using namespace oraclize;
        f["oz.polls"] = m_polls;
        f["oz.refused"] = m_refused;
        if (!m_contract) return;
        f["oz.state"] = std::string(to_string(m_contract->state()));
        f["oz.condition"] = m_contract->settled_condition() ? json(*m_contract->settled_condition()) : json(-1);
        f["oz.pays_to"] = m_pays_to;
        std::size_t unverified = 0, signed_count = 0;
        for (const auto& r : m_contract->audit()) {
            if (!r.signed_) continue;
            ++signed_count;
            if (r.proof && !r.audit_passed) ++unverified;
        }
        f["oz.signed"] = signed_count;
        f["oz.signed_unverified"] = unverified;
        f["oz.audit_entries"] = m_contract->audit().size();
        f["oz.settle.confirmed"] = ctx.confirmed("oz.settle");
        f["oz.refund.confirmed"] = ctx.confirmed("oz.refund");
        f["oz.audit"] = json::parse(m_contract->audit_json());
    }

private:
    json settlement_json(const oraclize::SignedSettlement& s) const
    {
        json j = {{"condition", s.condition ? json(*s.condition) : json()}, {"verified_before_signing", s.verified_before_signing}, {"txid", s.tx.txid().hex()}};
        if (s.observation) j["value"] = feed_value_to_string(s.observation->value);
        return j;
    }

    /** The payee (or a scripted stand-in) adds the second signature and broadcasts. */
    void broadcast(Ctx& ctx, const oraclize::SignedSettlement& s, const std::string& label)
    {
        m_pays_to = ctx.name_of(s.pays_to);
        const auto& signer = ctx.key(m_cosigner.empty() ? m_pays_to : m_cosigner);
        auto tx = m_contract->co_sign(s, signer, ctx.registry);
        ctx.emit(module(), "cosigned", {{"signer", ctx.name_of(signer.pub)}, {"pays_to", m_pays_to}});
        m_pending = tx;
        m_pending_label = label;
        ctx.submit(tx, label, module());
    }

    oraclize::OracleService m_svc;
    std::string m_oracle_name;
    std::string m_cosigner;
    std::string m_alice, m_bob, m_arbitrator;
    std::optional<oraclize::ConditionalContract> m_contract;
    std::optional<Transaction> m_pending;
    std::string m_pending_label;
    std::string m_pays_to;
    std::size_t m_polls = 0;
    std::size_t m_refused = 0;
};

} // namespace

std::unique_ptr<Driver> make_driver(const std::string& protocol)
{
    if (protocol == "will") return std::make_unique<WillDriver>();
    if (protocol == "realitykeys") return std::make_unique<RealityKeysDriver>();
    if (protocol == "orisi") return std::make_unique<OrisiDriver>();
    if (protocol == "truthcoin") return std::make_unique<TruthcoinDriver>();
    if (protocol == "counterparty") return std::make_unique<CounterpartyDriver>();
    if (protocol == "oraclize") return std::make_unique<OraclizeDriver>();
    throw Error(Errc::ParseError, "unknown protocol '" + protocol + "'");
}

} // namespace oraclesim::harness::detail

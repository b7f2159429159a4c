// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "generators.hpp"
#include "helpers.hpp"

#include <oraclesim/codec.hpp>
#include <oraclesim/harness.hpp>

#include <filesystem>
#include <set>
#include <sstream>

using namespace oraclesim;
using nlohmann::json;
namespace run = oraclesim::harness;

namespace {

std::vector<std::filesystem::path> scenario_files()
{
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(ORACLESIM_SCENARIO_DIR))
        if (e.path().extension() == ".json") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

json load(const std::string& name)
{
    return json::parse(run::read_file(std::string(ORACLESIM_SCENARIO_DIR) + "/" + name + ".json"));
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

BOOST_AUTO_TEST_SUITE(codec)

BOOST_AUTO_TEST_CASE(json_round_trip_property)
{
    Rng rng(404);
    for (int i = 0; i < 500; ++i) {
        const auto tx = testutil::random_tx(rng);
        const auto j = tx_to_json(tx);
        BOOST_TEST_REQUIRE(j.at("txid").get<std::string>() == tx.txid().hex());
        const auto back = tx_from_json(json::parse(j.dump()));
        BOOST_TEST_REQUIRE(back.serialize() == tx.serialize());
        BOOST_TEST_REQUIRE(tx_from_json(json{{"hex", to_hex(tx.serialize())}}).serialize() == tx.serialize());
        const auto lock = testutil::random_lock(rng, 0);
        BOOST_TEST_REQUIRE(lock_from_json(lock_to_json(lock)).serialize() == lock.serialize());
    }
}

BOOST_AUTO_TEST_CASE(malformed_json)
{
    CHECK_ERRC(lock_from_json(json{{"type", "teleport"}}), Errc::ParseError);
    CHECK_ERRC(lock_from_json(json{{"type", "pay_to_key"}, {"key", "abcd"}}), Errc::ParseError);
    CHECK_ERRC(lock_from_json(json{{"type", "multisig"}, {"required", 3}, {"keys", json::array()}}), Errc::ParseError);
    CHECK_ERRC(tx_from_json(json{{"hex", "zz"}}), Errc::ParseError);
    CHECK_ERRC(tx_from_json(json{{"hex", "0100"}}), Errc::ParseError);
    CHECK_ERRC(tx_from_json(json{{"inputs", json::array()}}), Errc::ParseError);
    CHECK_ERRC(tx_from_json(json::array()), Errc::ParseError);
}

BOOST_AUTO_TEST_CASE(message_json)
{
    const counterparty::Bet bet{keygen("f").pub, Comparator::Ge, 400.0, 10, 5, 6, counterparty::BetSide::No};
    const auto j = message_to_json(bet);
    BOOST_TEST(j.at("kind") == "bet");
    BOOST_TEST(j.at("cmp") == "ge");
    BOOST_TEST(j.at("side") == "no");
    BOOST_TEST(j.at("counterwager") == 6);
    BOOST_TEST(message_to_json(counterparty::Burn{7}).at("btc") == 7);
}

BOOST_AUTO_TEST_SUITE_END()

BOOST_AUTO_TEST_SUITE(harness)

BOOST_AUTO_TEST_CASE(event_log_lines)
{
    run::EventLog log;
    log.append(0, "chain", "genesis", {{"x", 1}});
    log.append(3, "harness", "tick", json::object());
    BOOST_TEST(log.size() == 2u);
    BOOST_TEST(count_lines(log.text()) == 2u);
    BOOST_TEST(log.text().substr(0, log.text().find('\n')) == R"({"kind":"genesis","module":"chain","payload":{"x":1},"tick":0})");
    BOOST_TEST((log.digest() == sha256(as_bytes(log.text()))));
    BOOST_TEST(run::verify_logs(log.text(), log.text()));
    BOOST_TEST(!run::verify_logs(log.text(), log.text() + "\n"));
}

BOOST_AUTO_TEST_CASE(every_scenario_passes_twice_identically)
{
    const auto files = scenario_files();
    BOOST_TEST(files.size() >= 15u);
    for (const auto& f : files) {
        BOOST_TEST_CONTEXT(f.filename().string())
        {
            const auto a = run::run_scenario_file(f.string());
            const auto b = run::run_scenario_file(f.string());
            BOOST_TEST(a.passed(), a.first_failure());
            BOOST_TEST(a.first_failure().empty());
            BOOST_TEST((a.digest == b.digest));
            BOOST_TEST(a.log_text == b.log_text);
            BOOST_TEST(a.facts == b.facts);
            BOOST_TEST((a.digest == run::log_digest(a.log_text)));
            for (const auto& line : std::vector<std::string>{a.log_text.substr(0, a.log_text.find('\n'))})
                BOOST_TEST(json::parse(line).at("kind") == "start");
        }
    }
}

BOOST_AUTO_TEST_CASE(seed_override)
{
    const auto text = load("oraclize_milan").dump();
    const auto a = run::run_scenario(text, 17);
    const auto b = run::run_scenario(text, 18);
    BOOST_TEST(a.seed == 17u);
    BOOST_TEST(a.passed());
    BOOST_TEST(b.passed());
    BOOST_TEST((a.digest != b.digest)); // the seed is logged, so runs are told apart
}

BOOST_AUTO_TEST_CASE(failed_assertions_are_reported)
{
    auto sc = load("will_happy");
    sc["assertions"].push_back({{"fact", "no.such.fact"}, {"value", 1}});
    sc["assertions"].push_back({{"fact", "no.such.fact"}, {"op", "ne"}, {"value", 1}});
    const auto r = run::run_scenario(sc.dump());
    BOOST_TEST(!r.passed());
    BOOST_TEST(r.first_failure().find("no.such.fact") != std::string::npos);
    BOOST_TEST(r.assertions.back().actual.is_null());
    BOOST_TEST(!r.assertions[r.assertions.size() - 2].ok);
}

BOOST_AUTO_TEST_CASE(scenario_parse_errors)
{
    CHECK_ERRC(run::run_scenario("{not json"), Errc::ParseError);
    CHECK_ERRC(run::run_scenario("[]"), Errc::ParseError);
    const auto base = load("will_happy");
    auto broken = [&](auto&& edit) {
        auto sc = base;
        edit(sc);
        return sc.dump();
    };
    CHECK_ERRC(run::run_scenario(broken([](json& s) { s["protocol"] = "carrier_pigeon"; })), Errc::ParseError);
    CHECK_ERRC(run::run_scenario(broken([](json& s) { s["era"] = "2030"; })), Errc::ParseError);
    CHECK_ERRC(run::run_scenario(broken([](json& s) { s["ticks"] = 0; })), Errc::ParseError);
    CHECK_ERRC(run::run_scenario(broken([](json& s) { s.erase("name"); })), Errc::ParseError);
    CHECK_ERRC(run::run_scenario(broken([](json& s) { s["miners"][0]["share"] = 0.5; })), Errc::ParseError);
    CHECK_ERRC(run::run_scenario(broken([](json& s) { s["actions"].push_back({{"tick", 0}, {"do", "dance"}}); })), Errc::ParseError);
    CHECK_ERRC(run::run_scenario(broken([](json& s) { s["actions"][0]["tick"] = 100000; })), Errc::ParseError);
    CHECK_ERRC(run::run_scenario(broken([](json& s) { s["assertions"].push_back({{"fact", "x"}, {"op", "approx"}, {"value", 1}}); })),
               Errc::ParseError);
    CHECK_ERRC(run::run_scenario(broken([](json& s) { s["assertions"].push_back({{"fact", "x"}}); })), Errc::ParseError);
    CHECK_ERRC(run::run_scenario(broken([](json& s) { s["actors"][0]["funds"] = -5; })), Errc::ParseError);
    CHECK_ERRC(run::run_scenario_file("/nonexistent/scenario.json"), Errc::Io);
}

BOOST_AUTO_TEST_CASE(metrics_table)
{
    const auto r = run::run_scenario(load("truthcoin_market").dump());
    const auto csv = run::metrics_csv(r.log_text);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    BOOST_TEST(header.rfind("tick,height,mempool,blocks,txs_included,nonstandard_included,mean_inclusion_delay", 0) == 0u);
    BOOST_TEST(header.find("vtc.") != std::string::npos);
    const auto columns = std::count(header.begin(), header.end(), ',');
    std::set<std::int64_t> ticks;
    for (std::string line; std::getline(in, line);) {
        BOOST_TEST_REQUIRE(std::count(line.begin(), line.end(), ',') == columns);
        ticks.insert(std::stoll(line.substr(0, line.find(','))));
    }
    BOOST_TEST(ticks.size() == count_lines(csv) - 1);
    BOOST_TEST(ticks.size() == static_cast<std::size_t>(load("truthcoin_market").at("ticks").get<int>()));
    CHECK_ERRC(run::metrics_csv("garbage\n"), Errc::ParseError);
    CHECK_ERRC(run::metrics_csv("{\"a\":1}\n"), Errc::ParseError);
    BOOST_TEST(run::metrics_csv("") == header.substr(0, header.find(",vtc.")) + "\n");
}

BOOST_AUTO_TEST_SUITE_END()

// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

// Command-line front end. Talks to the library only through oraclesim.h.

#include <oraclesim/oraclesim.h>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

// Exit codes.
constexpr int EXIT_PASS = 0;
constexpr int EXIT_ASSERTION = 1;
constexpr int EXIT_PARSE = 2;
constexpr int EXIT_ERROR = 3;

int report(int status)
{
    std::cerr << "error: " << oraclesim_errc_name(status) << ": " << oraclesim_last_error() << '\n';
    return status == ORACLESIM_E_PARSE ? EXIT_PARSE : EXIT_ERROR;
}

bool read_text(const std::string& path, std::string& out)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

int cmd_run(const std::string& path, const std::optional<std::uint64_t>& seed, const std::string& out_dir)
{
    oraclesim_run* run = nullptr;
    const std::uint64_t s = seed.value_or(0);
    const int st = oraclesim_run_scenario_file(path.c_str(), seed ? &s : nullptr, &run);
    if (st != ORACLESIM_OK) return report(st);

    const std::string name = oraclesim_run_name(run);
    std::cout << "scenario " << name << " seed " << oraclesim_run_seed(run) << '\n';
    std::cout << "digest " << oraclesim_run_digest(run) << '\n';
    if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        const auto base = std::filesystem::path(out_dir) / name;
        size_t len = 0;
        const char* events = oraclesim_run_events(run, &len);
        std::ofstream log(base.string() + ".jsonl", std::ios::binary | std::ios::trunc);
        log.write(events, static_cast<std::streamsize>(len));
        std::ofstream dig(base.string() + ".digest", std::ios::trunc);
        dig << oraclesim_run_digest(run) << '\n';
        std::ofstream facts(base.string() + ".facts.json", std::ios::trunc);
        facts << oraclesim_run_facts(run) << '\n';
        if (!log || !dig || !facts) {
            oraclesim_run_free(run);
            std::cerr << "error: cannot write to " << out_dir << '\n';
            return EXIT_ERROR;
        }
        std::cout << "log " << base.string() << ".jsonl\n";
    }
    const bool passed = oraclesim_run_passed(run) != 0;
    if (passed)
        std::cout << "PASS\n";
    else
        std::cout << "AssertionFailed: " << oraclesim_run_first_failure(run) << '\n';
    oraclesim_run_free(run);
    return passed ? EXIT_PASS : EXIT_ASSERTION;
}

int cmd_verify(const std::string& a, const std::string& b)
{
    int equal = 0;
    const int st = oraclesim_verify_logs(a.c_str(), b.c_str(), &equal);
    if (st != ORACLESIM_OK) return report(st);
    char* da = nullptr;
    char* db = nullptr;
    if (oraclesim_log_digest(a.c_str(), &da) == ORACLESIM_OK && oraclesim_log_digest(b.c_str(), &db) == ORACLESIM_OK)
        std::cout << (equal ? "match " : "mismatch ") << da << (equal ? "" : std::string(" ") + db) << '\n';
    oraclesim_string_free(da);
    oraclesim_string_free(db);
    return equal ? EXIT_PASS : EXIT_ASSERTION;
}

int cmd_metrics(const std::string& log, const std::string& csv)
{
    size_t rows = 0;
    const int st = oraclesim_export_metrics(log.c_str(), csv.c_str(), &rows);
    if (st != ORACLESIM_OK) return report(st);
    std::cout << "rows " << rows << '\n';
    return EXIT_PASS;
}

int cmd_orisi_params(int m, int n)
{
    oraclesim_safe_params p{};
    const int st = oraclesim_orisi_params(m, n, &p);
    if (st != ORACLESIM_OK) return report(st);
    std::cout << "{\"m\":" << p.m << ",\"n\":" << p.n << ",\"threshold\":" << p.threshold << ",\"total_keys\":" << p.total_keys
              << ",\"agent_keys\":" << p.agent_keys << "}\n";
    return EXIT_PASS;
}

int cmd_decode(const std::string& hex, const std::string& txid)
{
    char* out = nullptr;
    const int st = oraclesim_decode_payload(hex.c_str(), txid.c_str(), &out);
    if (st != ORACLESIM_OK) return report(st);
    std::cout << out << '\n';
    oraclesim_string_free(out);
    return EXIT_PASS;
}

int cmd_classify(const std::string& path, const std::string& era)
{
    std::string text;
    if (!read_text(path, text)) {
        std::cerr << "error: Io: cannot open '" << path << "'\n";
        return EXIT_ERROR;
    }
    char* out = nullptr;
    const int st = oraclesim_classify_tx(text.c_str(), era.c_str(), &out);
    if (st != ORACLESIM_OK) return report(st);
    std::cout << out << '\n';
    oraclesim_string_free(out);
    return EXIT_PASS;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"oraclesim: deterministic simulator of early blockchain oracle protocols"};
    app.require_subcommand(1);

    std::string scenario, out_dir;
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "Run a scenario; exit 0 iff its assertions hold");
    run->add_option("scenario", scenario, "Scenario JSON file")->required();
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--out", out_dir, "Directory for <name>.jsonl, .digest and .facts.json");

    std::string log_a, log_b;
    auto* verify = app.add_subcommand("verify", "Compare two event logs by digest");
    verify->add_option("log_a", log_a)->required();
    verify->add_option("log_b", log_b)->required();

    std::string log, csv;
    auto* metrics = app.add_subcommand("metrics", "Export per-tick metrics CSV from an event log");
    metrics->add_option("log", log)->required();
    metrics->add_option("out_csv", csv)->required();

    int m = 0, n = 0;
    auto* params = app.add_subcommand("orisi-params", "Padded safe parameters for an m-of-n oracle set");
    params->add_option("m", m)->required();
    params->add_option("n", n)->required();

    std::string hex, txid;
    auto* decode = app.add_subcommand("decode-payload", "Decode a keyed meta-protocol payload");
    decode->add_option("hex", hex)->required();
    decode->add_option("txid", txid, "Key: txid of the first input's prevout")->required();

    std::string tx_path, era;
    auto* classify = app.add_subcommand("classify-tx", "Standardness of a JSON transaction");
    classify->add_option("tx", tx_path)->required();
    classify->add_option("--era", era)->required()->check(CLI::IsMember({"test2013", "v090"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : EXIT_PARSE;
    }

    if (*run) return cmd_run(scenario, seed, out_dir);
    if (*verify) return cmd_verify(log_a, log_b);
    if (*metrics) return cmd_metrics(log, csv);
    if (*params) return cmd_orisi_params(m, n);
    if (*decode) return cmd_decode(hex, txid);
    return cmd_classify(tx_path, era);
}

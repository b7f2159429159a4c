// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/oraclesim.h>

#include <oraclesim/codec.hpp>
#include <oraclesim/counterparty.hpp>
#include <oraclesim/errors.hpp>
#include <oraclesim/harness.hpp>
#include <oraclesim/orisi.hpp>
#include <oraclesim/policy.hpp>

#include <cstring>
#include <string>

using namespace oraclesim;

struct oraclesim_run {
    harness::RunResult result;
    std::string digest_hex;
    std::string facts_json;
    std::string first_failure;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg)
{
    g_last_error = msg;
    return code;
}

template <typename F>
int guarded(F&& f)
{
    try {
        g_last_error.clear();
        f();
        return ORACLESIM_OK;
    } catch (const Error& e) {
        return fail(static_cast<int>(e.code()), e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(ORACLESIM_E_PARSE, e.what());
    } catch (const std::exception& e) {
        return fail(ORACLESIM_E_INTERNAL, e.what());
    } catch (...) {
        return fail(ORACLESIM_E_INTERNAL, "unknown exception");
    }
}

char* dup_string(const std::string& s)
{
    auto* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

void require(const void* p, const char* what)
{
    if (!p) throw Error(Errc::InvalidArgument, std::string(what) + " is NULL");
}

std::optional<std::uint64_t> seed_of(const uint64_t* s)
{
    return s ? std::optional<std::uint64_t>(*s) : std::nullopt;
}

oraclesim_run* wrap(harness::RunResult r)
{
    auto* run = new oraclesim_run{std::move(r), {}, {}, {}};
    run->digest_hex = run->result.digest.hex();
    run->facts_json = run->result.facts.dump();
    run->first_failure = run->result.first_failure();
    return run;
}

} // namespace

extern "C" {

const char* oraclesim_last_error(void) { return g_last_error.c_str(); }

const char* oraclesim_errc_name(int code)
{
    if (code == ORACLESIM_OK) return "Ok";
    if (code == ORACLESIM_E_INTERNAL) return "Internal";
    return errc_name(static_cast<Errc>(code)).data();
}

const char* oraclesim_version(void) { return "0.1.0"; }

int oraclesim_run_scenario(const char* scenario_json, const uint64_t* seed_override, oraclesim_run** out)
{
    return guarded([&] {
        require(scenario_json, "scenario_json");
        require(out, "out");
        *out = wrap(harness::run_scenario(scenario_json, seed_of(seed_override)));
    });
}

int oraclesim_run_scenario_file(const char* path, const uint64_t* seed_override, oraclesim_run** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = wrap(harness::run_scenario_file(path, seed_of(seed_override)));
    });
}

int oraclesim_run_passed(const oraclesim_run* run) { return run && run->result.passed() ? 1 : 0; }
const char* oraclesim_run_name(const oraclesim_run* run) { return run ? run->result.name.c_str() : ""; }
uint64_t oraclesim_run_seed(const oraclesim_run* run) { return run ? run->result.seed : 0; }
const char* oraclesim_run_digest(const oraclesim_run* run) { return run ? run->digest_hex.c_str() : ""; }

const char* oraclesim_run_events(const oraclesim_run* run, size_t* len)
{
    if (!run) return "";
    if (len) *len = run->result.log_text.size();
    return run->result.log_text.c_str();
}

const char* oraclesim_run_facts(const oraclesim_run* run) { return run ? run->facts_json.c_str() : ""; }
const char* oraclesim_run_first_failure(const oraclesim_run* run) { return run ? run->first_failure.c_str() : ""; }
void oraclesim_run_free(oraclesim_run* run) { delete run; }

int oraclesim_verify_logs(const char* log_a_path, const char* log_b_path, int* equal)
{
    return guarded([&] {
        require(log_a_path, "log_a_path");
        require(log_b_path, "log_b_path");
        require(equal, "equal");
        *equal = harness::verify_logs(harness::read_file(log_a_path), harness::read_file(log_b_path)) ? 1 : 0;
    });
}

int oraclesim_log_digest(const char* log_path, char** hex_out)
{
    return guarded([&] {
        require(log_path, "log_path");
        require(hex_out, "hex_out");
        *hex_out = dup_string(harness::log_digest(harness::read_file(log_path)).hex());
    });
}

int oraclesim_export_metrics(const char* log_path, const char* csv_path, size_t* rows)
{
    return guarded([&] {
        require(log_path, "log_path");
        require(csv_path, "csv_path");
        const auto csv = harness::metrics_csv(harness::read_file(log_path));
        harness::write_file(csv_path, csv);
        if (rows) {
            const auto lines = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
            *rows = lines > 0 ? lines - 1 : 0;
        }
    });
}

int oraclesim_orisi_params(int m, int n, oraclesim_safe_params* out)
{
    return guarded([&] {
        require(out, "out");
        const auto p = compute_safe_params(m, n);
        *out = {p.m, p.n, p.threshold, p.total_keys, p.agent_keys};
    });
}

int oraclesim_decode_payload(const char* payload_hex, const char* txid_hex, char** json_out)
{
    return guarded([&] {
        require(payload_hex, "payload_hex");
        require(txid_hex, "txid_hex");
        require(json_out, "json_out");
        if (std::strlen(txid_hex) != 64) throw Error(Errc::InvalidArgument, "txid must be 64 hex digits");
        const auto msg = counterparty::decode_payload(from_hex(payload_hex), Txid::from_hex(txid_hex));
        *json_out = dup_string(message_to_json(msg).dump());
    });
}

int oraclesim_classify_tx(const char* tx_json, const char* era, char** json_out)
{
    return guarded([&] {
        require(tx_json, "tx_json");
        require(era, "era");
        require(json_out, "json_out");
        const auto e = parse_era(era);
        if (!e) throw Error(Errc::InvalidArgument, std::string("unknown era '") + era + "'");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(tx_json);
        } catch (const nlohmann::json::exception& ex) {
            throw Error(Errc::ParseError, ex.what());
        }
        const auto tx = tx_from_json(j);
        const auto c = classify(tx, StandardnessPolicy::for_era(*e));
        nlohmann::json out = {{"txid", tx.txid().hex()}, {"era", std::string(to_string(*e))}, {"standard", c.standard()}, {"size", tx.size()}};
        out["reason"] = c.reason ? nlohmann::json(std::string(to_string(*c.reason))) : nlohmann::json();
        *json_out = dup_string(out.dump());
    });
}

void oraclesim_string_free(char* s) { std::free(s); }

} // extern "C"

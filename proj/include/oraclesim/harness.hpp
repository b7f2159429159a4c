// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_HARNESS_HPP
#define ORACLESIM_HARNESS_HPP

#include <oraclesim/bytes.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oraclesim::harness {

/** Append-only run record, one JSON object per line. */
class EventLog {
public:
    void append(std::int64_t tick, std::string_view module, std::string_view kind, nlohmann::json payload);

    const std::string& text() const { return m_text; }
    std::size_t size() const { return m_count; }
    Hash256 digest() const;

private:
    std::string m_text;
    std::size_t m_count = 0;
};

struct AssertionOutcome {
    std::string fact;
    std::string op;
    nlohmann::json expected;
    nlohmann::json actual; //!< null when the fact does not exist
    bool ok = false;
};

struct RunResult {
    std::string name;
    std::string protocol;
    std::uint64_t seed = 0;
    std::string log_text;
    Hash256 digest;
    nlohmann::json facts;
    std::vector<AssertionOutcome> assertions;

    bool passed() const;
    /** "fact op expected (actual ...)" for the first failing assertion, empty if none. */
    std::string first_failure() const;
};

/**
 * Load, validate and run a scenario. The tick loop runs scheduled actions,
 * then protocol polls, then mines one host block, then (Truthcoin only)
 * one side-block. Errors: ParseError for anything malformed; assertion
 * failures are reported in the result, not thrown.
 */
RunResult run_scenario(std::string_view scenario_json, std::optional<std::uint64_t> seed_override = std::nullopt);
RunResult run_scenario_file(const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt);

/** SHA-256 of the log bytes. */
Hash256 log_digest(std::string_view log_text);

/** Two logs replay identically iff their digests match. */
bool verify_logs(std::string_view a, std::string_view b);

/**
 * One CSV row per distinct tick in the log: height, inclusion delays,
 * balances per actor and VTC per voter. Errors: ParseError.
 */
std::string metrics_csv(std::string_view log_text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view data);

} // namespace oraclesim::harness

#endif // ORACLESIM_HARNESS_HPP

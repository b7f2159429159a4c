// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_DATAFEED_HPP
#define ORACLESIM_DATAFEED_HPP

#include <oraclesim/keys.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace oraclesim {

/** Epoch seconds. */
using Timestamp = std::int64_t;

using FeedValue = std::variant<double, bool, std::string>;

std::string feed_value_to_string(const FeedValue& v);

/** Canonical bytes: tag u8 (0 number, 1 bool, 2 string) then payload. */
Bytes encode_feed_value(const FeedValue& v);

enum class Comparator { Lt, Le, Eq, Ge, Gt, IsTrue };

std::string_view to_string(Comparator c);
std::optional<Comparator> parse_comparator(std::string_view s);

/**
 * Evaluate `value <cmp> threshold`. Numeric comparators are false for
 * non-numeric values; IsTrue holds only for boolean true.
 */
bool compare(const FeedValue& value, Comparator cmp, double threshold);

struct Observation {
    std::string source_id;
    std::string key;
    Timestamp time = 0;
    FeedValue value;
    std::optional<Signature> source_signature;

    /** H(key || time || value), what a signing source signs. */
    Hash256 signed_digest() const;
};

struct AuthenticityProof {
    std::string key;
    Timestamp time = 0;
    Hash256 response_digest;
    std::string source_id;
    std::string attestor_id;
    Hash256 attestation;

    friend bool operator==(const AuthenticityProof&, const AuthenticityProof&) = default;
};

/**
 * Fixture-backed data source. Lookups return the latest entry at or before
 * the query time, so feed-style series carry forward and one-off facts are
 * entered at their exact time.
 */
class DataSource {
public:
    DataSource(std::string id, bool ssl, bool signs_data);

    const std::string& id() const { return m_id; }
    bool ssl() const { return m_ssl; }
    bool signs_data() const { return m_signs; }
    const KeyPair& keys() const { return m_keys; }

    void add(const std::string& key, Timestamp time, FeedValue value);

    /** Throws Error(NoData) when no entry exists at or before `time`. */
    Observation query(const std::string& key, Timestamp time) const;

    bool has_key(const std::string& key) const { return m_series.contains(key); }
    const std::map<std::string, std::map<Timestamp, FeedValue>>& series() const { return m_series; }

    /** Load a JSON array of {key, time, value}. */
    void load_fixture_json(std::string_view json_text);

private:
    std::string m_id;
    bool m_ssl;
    bool m_signs;
    KeyPair m_keys;
    std::map<std::string, std::map<Timestamp, FeedValue>> m_series;
};

AuthenticityProof make_proof(const DataSource& source, const std::string& key, Timestamp time, const std::string& attestor_id);

/** The attestation a proof should carry for its own fields. */
Hash256 compute_attestation(const AuthenticityProof& proof);

/**
 * True iff the proof's attestation recomputes, it covers this observation's
 * (source, key, time), and its response digest is H(observation value).
 */
bool verify_proof(const AuthenticityProof& proof, const Observation& obs);

/** Checks the observation's source signature, if the source signs data. */
bool verify_observation(const Observation& obs, const DataSource& source, const SignatureVerifier& verifier);

/** Sources by id. Read-only once the scenario is loaded. */
class FeedSet {
public:
    DataSource& add(DataSource source);
    const DataSource* find(const std::string& id) const;
    const DataSource& at(const std::string& id) const;
    const std::map<std::string, DataSource>& all() const { return m_sources; }

private:
    std::map<std::string, DataSource> m_sources;
};

} // namespace oraclesim

#endif // ORACLESIM_DATAFEED_HPP

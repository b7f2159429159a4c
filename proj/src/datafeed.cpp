// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/datafeed.hpp>
#include <oraclesim/errors.hpp>
#include <oraclesim/hash.hpp>

#include <json.hpp>

#include <cstdio>

namespace oraclesim {

std::string feed_value_to_string(const FeedValue& v)
{
    if (const auto* d = std::get_if<double>(&v)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", *d);
        return buf;
    }
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    return std::get<std::string>(v);
}

Bytes encode_feed_value(const FeedValue& v)
{
    ByteWriter w;
    if (const auto* d = std::get_if<double>(&v)) {
        w.u8(0);
        w.f64(*d);
    } else if (const auto* b = std::get_if<bool>(&v)) {
        w.u8(1);
        w.u8(*b ? 1 : 0);
    } else {
        w.u8(2);
        w.str(std::get<std::string>(v));
    }
    return std::move(w).take();
}

std::string_view to_string(Comparator c)
{
    switch (c) {
    case Comparator::Lt: return "lt";
    case Comparator::Le: return "le";
    case Comparator::Eq: return "eq";
    case Comparator::Ge: return "ge";
    case Comparator::Gt: return "gt";
    case Comparator::IsTrue: return "is_true";
    }
    return "?";
}

std::optional<Comparator> parse_comparator(std::string_view s)
{
    if (s == "lt" || s == "<") return Comparator::Lt;
    if (s == "le" || s == "<=") return Comparator::Le;
    if (s == "eq" || s == "==") return Comparator::Eq;
    if (s == "ge" || s == ">=") return Comparator::Ge;
    if (s == "gt" || s == ">") return Comparator::Gt;
    if (s == "is_true" || s == "event-true") return Comparator::IsTrue;
    return std::nullopt;
}

bool compare(const FeedValue& value, Comparator cmp, double threshold)
{
    if (cmp == Comparator::IsTrue) {
        const auto* b = std::get_if<bool>(&value);
        return b && *b;
    }
    const auto* d = std::get_if<double>(&value);
    if (!d) return false;
    switch (cmp) {
    case Comparator::Lt: return *d < threshold;
    case Comparator::Le: return *d <= threshold;
    case Comparator::Eq: return *d == threshold;
    case Comparator::Ge: return *d >= threshold;
    case Comparator::Gt: return *d > threshold;
    case Comparator::IsTrue: break;
    }
    return false;
}

Hash256 Observation::signed_digest() const
{
    ByteWriter w;
    w.str(key);
    w.i64(time);
    w.raw(encode_feed_value(value));
    return sha256(w.data());
}

DataSource::DataSource(std::string id, bool ssl, bool signs_data)
    : m_id(std::move(id)), m_ssl(ssl), m_signs(signs_data), m_keys(keygen("oraclesim/datafeed/" + m_id))
{
    if (m_id.empty()) throw Error(Errc::InvalidArgument, "data source id must be nonempty");
}

void DataSource::add(const std::string& key, Timestamp time, FeedValue value)
{
    m_series[key].insert_or_assign(time, std::move(value));
}

Observation DataSource::query(const std::string& key, Timestamp time) const
{
    auto sit = m_series.find(key);
    if (sit == m_series.end()) throw Error(Errc::NoData, "source '" + m_id + "' has no key '" + key + "'");
    const auto& series = sit->second;
    auto it = series.upper_bound(time);
    if (it == series.begin())
        throw Error(Errc::NoData, "source '" + m_id + "' has no entry for '" + key + "' at or before " + std::to_string(time));
    --it;
    Observation obs{m_id, key, time, it->second, std::nullopt};
    if (m_signs) obs.source_signature = sign(m_keys.secret, obs.signed_digest());
    return obs;
}

void DataSource::load_fixture_json(std::string_view json_text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, std::string("fixture: ") + e.what());
    }
    if (!doc.is_array()) throw Error(Errc::ParseError, "fixture must be a JSON array");
    for (const auto& row : doc) {
        if (!row.is_object() || !row.contains("key") || !row.contains("time") || !row.contains("value"))
            throw Error(Errc::ParseError, "fixture rows need key, time and value");
        const auto& v = row.at("value");
        FeedValue value;
        if (v.is_boolean())
            value = v.get<bool>();
        else if (v.is_number())
            value = v.get<double>();
        else if (v.is_string())
            value = v.get<std::string>();
        else
            throw Error(Errc::ParseError, "fixture value must be number, boolean or string");
        if (!row.at("key").is_string() || !row.at("time").is_number_integer())
            throw Error(Errc::ParseError, "fixture key must be a string and time an integer");
        add(row.at("key").get<std::string>(), row.at("time").get<Timestamp>(), std::move(value));
    }
}

Hash256 compute_attestation(const AuthenticityProof& p)
{
    ByteWriter w;
    w.str(p.key);
    w.i64(p.time);
    w.blob(p.response_digest);
    w.str(p.source_id);
    w.str(p.attestor_id);
    return sha256(w.data());
}

AuthenticityProof make_proof(const DataSource& source, const std::string& key, Timestamp time, const std::string& attestor_id)
{
    const auto obs = source.query(key, time);
    AuthenticityProof p;
    p.key = key;
    p.time = time;
    p.response_digest = sha256(encode_feed_value(obs.value));
    p.source_id = source.id();
    p.attestor_id = attestor_id;
    p.attestation = compute_attestation(p);
    return p;
}

bool verify_proof(const AuthenticityProof& proof, const Observation& obs)
{
    if (proof.source_id != obs.source_id || proof.key != obs.key || proof.time != obs.time) return false;
    if (proof.response_digest != sha256(encode_feed_value(obs.value))) return false;
    return proof.attestation == compute_attestation(proof);
}

bool verify_observation(const Observation& obs, const DataSource& source, const SignatureVerifier& verifier)
{
    if (!source.signs_data()) return true;
    if (!obs.source_signature) return false;
    return verifier.verify(*obs.source_signature, source.keys().pub, obs.signed_digest());
}

DataSource& FeedSet::add(DataSource source)
{
    auto id = source.id();
    auto [it, inserted] = m_sources.emplace(id, std::move(source));
    if (!inserted) throw Error(Errc::InvalidArgument, "duplicate data source '" + id + "'");
    return it->second;
}

const DataSource* FeedSet::find(const std::string& id) const
{
    auto it = m_sources.find(id);
    return it == m_sources.end() ? nullptr : &it->second;
}

const DataSource& FeedSet::at(const std::string& id) const
{
    const auto* s = find(id);
    if (!s) throw Error(Errc::UnknownSource, "unknown data source '" + id + "'");
    return *s;
}

} // namespace oraclesim

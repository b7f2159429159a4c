// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "helpers.hpp"

#include <oraclesim/datafeed.hpp>
#include <oraclesim/hash.hpp>

#include <cmath>
#include <limits>

using namespace oraclesim;

BOOST_AUTO_TEST_SUITE(datafeed)

BOOST_AUTO_TEST_CASE(lookup_carries_forward)
{
    DataSource s("weather", true, false);
    s.add("temp", 100, 8.0);
    s.add("temp", 200, 12.0);
    CHECK_ERRC(s.query("temp", 99), Errc::NoData);
    CHECK_ERRC(s.query("rain", 500), Errc::NoData);
    BOOST_TEST(std::get<double>(s.query("temp", 100).value) == 8.0);
    BOOST_TEST(std::get<double>(s.query("temp", 199).value) == 8.0);
    BOOST_TEST(std::get<double>(s.query("temp", 10'000).value) == 12.0);
    // The observation carries the query time, not the entry time.
    BOOST_TEST(s.query("temp", 150).time == 150);
}

BOOST_AUTO_TEST_CASE(fixture_json)
{
    DataSource s("x", false, false);
    s.load_fixture_json(R"([{"key":"k","time":5,"value":true},{"key":"n","time":1,"value":3.5},{"key":"s","time":1,"value":"hi"}])");
    BOOST_TEST(std::get<bool>(s.query("k", 5).value));
    BOOST_TEST(std::get<double>(s.query("n", 2).value) == 3.5);
    BOOST_TEST(std::get<std::string>(s.query("s", 2).value) == "hi");
    CHECK_ERRC(s.load_fixture_json("{"), Errc::ParseError);
    CHECK_ERRC(s.load_fixture_json(R"([{"key":"k","time":5}])"), Errc::ParseError);
}

BOOST_AUTO_TEST_CASE(comparator_semantics)
{
    BOOST_TEST(compare(10.0, Comparator::Ge, 10.0));
    BOOST_TEST(!compare(10.0, Comparator::Gt, 10.0));
    BOOST_TEST(compare(10.0, Comparator::Le, 10.0));
    BOOST_TEST(!compare(10.0, Comparator::Lt, 10.0));
    BOOST_TEST(compare(10.0, Comparator::Eq, 10.0));
    BOOST_TEST(compare(true, Comparator::IsTrue, 0.0));
    BOOST_TEST(!compare(false, Comparator::IsTrue, 0.0));
    BOOST_TEST(!compare(1.0, Comparator::IsTrue, 0.0));
    BOOST_TEST(!compare(true, Comparator::Ge, 0.0));
    BOOST_TEST(!compare(std::string("12"), Comparator::Ge, 0.0));
    for (auto c : {Comparator::Lt, Comparator::Le, Comparator::Eq, Comparator::Ge, Comparator::Gt, Comparator::IsTrue})
        BOOST_TEST(parse_comparator(to_string(c)) == c);
}

BOOST_AUTO_TEST_CASE(value_encoding_is_tagged)
{
    BOOST_TEST(to_hex(encode_feed_value(1.0)) == "00000000000000f03f");
    BOOST_TEST(to_hex(encode_feed_value(true)) == "0101");
    BOOST_TEST(to_hex(encode_feed_value(std::string("ab"))) == "02020000006162");
}

BOOST_AUTO_TEST_CASE(proofs_bind_observation)
{
    DataSource s("weather", true, false);
    s.add("temp", 0, 12.0);
    const auto obs = s.query("temp", 50);
    const auto proof = make_proof(s, "temp", 50, "attestor");
    BOOST_TEST(verify_proof(proof, obs));
    BOOST_TEST(proof.attestation == compute_attestation(proof));

    auto bad = proof;
    bad.response_digest.bytes[0] ^= 1;
    BOOST_TEST(!verify_proof(bad, obs));
    bad = proof;
    bad.time = 51;
    BOOST_TEST(!verify_proof(bad, obs));
    bad = proof;
    bad.attestor_id = "someone else";
    BOOST_TEST(!verify_proof(bad, obs));

    auto other = obs;
    other.value = 13.0;
    BOOST_TEST(!verify_proof(proof, other));
}

BOOST_AUTO_TEST_CASE(signed_sources)
{
    KeyRegistry reg;
    DataSource s("exchange", true, true);
    reg.enroll(s.keys());
    s.add("BTCUSD", 0, 400.0);
    auto obs = s.query("BTCUSD", 10);
    BOOST_REQUIRE(obs.source_signature);
    BOOST_TEST(verify_observation(obs, s, reg));
    obs.value = 401.0;
    BOOST_TEST(!verify_observation(obs, s, reg));

    DataSource plain("p", true, false);
    plain.add("k", 0, 1.0);
    BOOST_TEST(!plain.query("k", 0).source_signature);
    BOOST_TEST(verify_observation(plain.query("k", 0), plain, reg));
}

BOOST_AUTO_TEST_CASE(feed_set_lookup)
{
    FeedSet fs;
    fs.add(DataSource("a", true, false));
    BOOST_TEST(fs.find("a") != nullptr);
    BOOST_TEST(fs.find("b") == nullptr);
    CHECK_ERRC(fs.at("b"), Errc::UnknownSource);
}

BOOST_AUTO_TEST_SUITE_END()

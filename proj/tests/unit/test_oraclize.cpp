// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include "helpers.hpp"

#include <oraclesim/oraclize.hpp>
#include <oraclesim/rng.hpp>
#include <oraclesim/wallet.hpp>

using namespace oraclesim;
using namespace oraclesim::oraclize;
using testutil::party;
using testutil::World;

namespace {

constexpr Timestamp T0 = 1'401'580'800;
constexpr Timestamp HOUR = 3'600;
constexpr Amount FEE = 20'000;

Condition cond(Comparator cmp, double t, const PubKey& to = {}, std::string key = "temp")
{
    return Condition{"weather", std::move(key), cmp, t, to};
}

// Alice bets the Milan temperature stays at or below 30 for a day; Bob
// takes the other side. Reading crosses 30 at hour 9.
struct Milan {
    KeyPair alice = party("alice");
    KeyPair bob = party("bob");
    KeyPair oracle_keys = party("oracle");
    World w{{{alice, 5 * COIN}, {bob, 5 * COIN}}};
    FeedSet feeds;
    OracleService oracle;
    std::optional<ConditionalContract> c;

    explicit Milan(bool proofshield = true, bool warm = true, std::optional<PubKey> arbitrator = std::nullopt)
    {
        w.registry.enroll(oracle_keys);
        auto& src = feeds.add(DataSource("weather", true, false));
        src.add("temp", T0, 20.0);
        if (warm) src.add("temp", T0 + 9 * HOUR, 31.0);
        feeds.add(DataSource("plain", false, false));
        oracle.keys = oracle_keys;
        oracle.feeds = &feeds;
        c = ConditionalContract::build(*w.chain, terms(proofshield, arbitrator), feeds, alice, bob);
        w.confirm(c->funding_tx());
    }

    ContractTerms terms(bool proofshield = true, std::optional<PubKey> arbitrator = std::nullopt) const
    {
        ContractTerms t;
        t.alice = alice.pub;
        t.bob = bob.pub;
        t.oracle = oracle_keys.pub;
        t.arbitrator = arbitrator;
        t.conditions = {cond(Comparator::Gt, 30.0, bob.pub)};
        t.default_beneficiary = alice.pub;
        t.start = T0;
        t.end = T0 + 24 * HOUR;
        t.refund_locktime = 50;
        t.proofshield = proofshield;
        t.alice_stake = COIN;
        t.bob_stake = COIN;
        t.fee = FEE;
        return t;
    }
};

} // namespace

BOOST_AUTO_TEST_SUITE(oraclize)

BOOST_AUTO_TEST_CASE(intervals)
{
    BOOST_TEST(Interval::of(Comparator::Gt, 30).contains(30.5));
    BOOST_TEST(!Interval::of(Comparator::Gt, 30).contains(30));
    BOOST_TEST(Interval::of(Comparator::Ge, 30).contains(30));
    BOOST_TEST(Interval::of(Comparator::Eq, 30).contains(30));
    BOOST_TEST(!Interval::of(Comparator::Lt, 30).intersects(Interval::of(Comparator::Ge, 30)));
    BOOST_TEST(Interval::of(Comparator::Le, 30).intersects(Interval::of(Comparator::Ge, 30)));
    BOOST_TEST(!Interval::of(Comparator::Le, 30).intersects(Interval::of(Comparator::Gt, 30)));
    CHECK_ERRC(Interval::of(Comparator::IsTrue, 0), Errc::InvalidArgument);
}

BOOST_AUTO_TEST_CASE(overlap_agrees_with_sampling)
{
    // Endpoints come from a small grid, so testing every grid point, every
    // midpoint and two far points decides intersection exactly.
    const std::vector<double> grid{-2, -1, 0, 0.5, 1, 3};
    std::vector<double> probes{-1e9, 1e9};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        probes.push_back(grid[i]);
        if (i + 1 < grid.size()) probes.push_back((grid[i] + grid[i + 1]) / 2);
    }
    const Comparator numeric[] = {Comparator::Lt, Comparator::Le, Comparator::Eq, Comparator::Ge, Comparator::Gt};
    Rng rng(8);
    for (int i = 0; i < 5000; ++i) {
        const auto a = cond(numeric[rng.below(5)], grid[rng.below(grid.size())]);
        const auto b = cond(numeric[rng.below(5)], grid[rng.below(grid.size())]);
        bool sampled = false;
        for (double x : probes) sampled |= compare(FeedValue{x}, a.cmp, a.threshold) && compare(FeedValue{x}, b.cmp, b.threshold);
        BOOST_TEST_INFO(to_string(a.cmp) << a.threshold << " vs " << to_string(b.cmp) << b.threshold);
        BOOST_TEST_REQUIRE(conditions_overlap(a, b) == sampled);
        BOOST_TEST_REQUIRE(conditions_overlap(a, b) == conditions_overlap(b, a));
    }
    BOOST_TEST(conditions_overlap(cond(Comparator::IsTrue, 0), cond(Comparator::IsTrue, 0)));
    BOOST_TEST(!conditions_overlap(cond(Comparator::IsTrue, 0), cond(Comparator::Gt, 0)));
    BOOST_TEST(!conditions_overlap(cond(Comparator::Gt, 0), cond(Comparator::Gt, 0, {}, "wind")));
}

BOOST_AUTO_TEST_CASE(term_checks)
{
    Milan m;
    auto t = m.terms();
    t.conditions.push_back(cond(Comparator::Ge, 35.0, m.alice.pub));
    CHECK_ERRC(check_terms(t, m.feeds), Errc::OverlappingConditions);
    t.conditions.back().cmp = Comparator::Le;
    t.conditions.back().threshold = 30.0;
    BOOST_CHECK_NO_THROW(check_terms(t, m.feeds));

    t = m.terms();
    t.conditions[0].source_id = "plain";
    CHECK_ERRC(check_terms(t, m.feeds), Errc::NonSSLSource);
    t.conditions[0].source_id = "nowhere";
    CHECK_ERRC(check_terms(t, m.feeds), Errc::UnknownSource);
    t = m.terms();
    t.end = t.start;
    CHECK_ERRC(check_terms(t, m.feeds), Errc::EmptyTimeframe);
    t = m.terms();
    t.fee = 2 * COIN;
    CHECK_ERRC(check_terms(t, m.feeds), Errc::InvalidArgument);
    t = m.terms();
    t.conditions.clear();
    CHECK_ERRC(check_terms(t, m.feeds), Errc::InvalidArgument);
    CHECK_ERRC(ConditionalContract::build(*m.w.chain, m.terms(), m.feeds, m.bob, m.alice), Errc::InvalidArgument);
}

BOOST_AUTO_TEST_CASE(poll_schedule)
{
    Milan m;
    BOOST_TEST(m.c->is_poll_time(T0));
    BOOST_TEST(m.c->is_poll_time(T0 + 23 * HOUR));
    BOOST_TEST(!m.c->is_poll_time(T0 + 24 * HOUR)); // the window is half-open
    BOOST_TEST(!m.c->is_poll_time(T0 - HOUR));
    BOOST_TEST(!m.c->is_poll_time(T0 + 1));
    CHECK_ERRC(m.c->poll(m.oracle, T0 + 60), Errc::BadPollTime);
    m.oracle.online = false;
    CHECK_ERRC(m.c->poll(m.oracle, T0), Errc::InvalidState);
}

BOOST_AUTO_TEST_CASE(milan_pays_bob_on_the_tenth_poll)
{
    Milan m;
    BOOST_TEST(m.w.chain->is_confirmed(m.c->funding_tx().txid()));
    std::optional<SignedSettlement> s;
    int polls = 0;
    for (Timestamp t = T0; !s && m.c->is_poll_time(t); t += HOUR, ++polls) s = m.c->poll(m.oracle, t);
    BOOST_REQUIRE(s);
    BOOST_TEST(polls == 10);
    BOOST_TEST(s->condition == std::size_t{0});
    BOOST_TEST(std::get<double>(s->observation->value) == 31.0);
    BOOST_TEST(verify_proof(*s->proof, *s->observation));
    BOOST_TEST((s->pays_to == m.bob.pub));
    BOOST_TEST(m.c->state() == ContractState::SettledCondition);
    CHECK_ERRC(m.c->poll(m.oracle, T0 + 10 * HOUR), Errc::AlreadySettled);

    // The oracle's signature alone moves nothing.
    BOOST_TEST(m.w.chain->check(s->tx).error == TxError::BadWitness);
    CHECK_ERRC(m.c->co_sign(*s, party("stranger"), m.w.registry), Errc::BadWitness);
    const auto before = balance(*m.w.chain, m.bob.pub);
    m.w.confirm(m.c->co_sign(*s, m.bob, m.w.registry));
    BOOST_TEST(balance(*m.w.chain, m.bob.pub) == before + 2 * COIN - FEE);
}

BOOST_AUTO_TEST_CASE(default_settlement)
{
    Milan m(true, false);
    for (Timestamp t = T0; m.c->is_poll_time(t); t += HOUR) BOOST_TEST(!m.c->poll(m.oracle, t));
    BOOST_TEST(m.c->audit().empty());
    CHECK_ERRC(m.c->settle_default(m.oracle, T0 + 24 * HOUR - 1), Errc::TooEarly);
    const auto s = m.c->settle_default(m.oracle, T0 + 24 * HOUR);
    BOOST_TEST((s.pays_to == m.alice.pub));
    BOOST_TEST(m.c->state() == ContractState::SettledDefault);
    m.w.confirm(m.c->co_sign(s, m.alice, m.w.registry));
    BOOST_TEST(balance(*m.w.chain, m.alice.pub) == 6 * COIN - 2 * FEE);
}

BOOST_AUTO_TEST_CASE(proofshield_refuses_tampered_proof)
{
    Milan m;
    m.oracle.tamper = [](AuthenticityProof& p) { p.response_digest.bytes[0] ^= 1; };
    CHECK_ERRC(m.c->poll(m.oracle, T0 + 9 * HOUR), Errc::ProofInvalid);
    BOOST_TEST(m.c->state() == ContractState::Active);
    BOOST_TEST(m.c->audit().size() == 1u);
    BOOST_TEST(!m.c->audit()[0].signed_);
    BOOST_TEST(m.c->audit()[0].verified_before_signing);

    Milan bare(false);
    bare.oracle.tamper = m.oracle.tamper;
    const auto s = bare.c->poll(bare.oracle, T0 + 9 * HOUR);
    BOOST_REQUIRE(s);
    BOOST_TEST(!s->verified_before_signing);
    BOOST_TEST(bare.c->audit()[0].signed_);
    BOOST_TEST(!bare.c->audit()[0].audit_passed);
}

BOOST_AUTO_TEST_CASE(missing_data_is_skipped)
{
    Milan m;
    auto& later = m.feeds.add(DataSource("late", true, false));
    later.add("flag", T0 + 5 * HOUR, true);
    auto t = m.terms();
    t.conditions = {Condition{"late", "flag", Comparator::IsTrue, 0, m.bob.pub}, cond(Comparator::Gt, 10.0, m.alice.pub)};
    auto c = ConditionalContract::build(*m.w.chain, t, m.feeds, m.alice, m.bob, &m.w.pool);
    // The first condition has no data at T0; the second holds, so it wins.
    const auto s = c.poll(m.oracle, T0);
    BOOST_REQUIRE(s);
    BOOST_TEST(s->condition == std::size_t{1});
}

BOOST_AUTO_TEST_CASE(refund_after_locktime)
{
    Milan m;
    CHECK_ERRC(m.c->refund_expiry(49), Errc::TooEarly);
    BOOST_TEST(m.w.chain->check(m.c->refund_tx()).error == TxError::Premature);
    const auto& refund = m.c->refund_expiry(50);
    BOOST_TEST(m.c->state() == ContractState::Refunded);
    BOOST_TEST(refund.output_total() == 2 * COIN - FEE);
    BOOST_TEST(refund.outputs[0].value == COIN - FEE / 2);
    while (m.w.chain->height() < 49) m.w.mine();
    m.w.confirm(refund);
    CHECK_ERRC(m.c->settle_default(m.oracle, T0 + 24 * HOUR), Errc::AlreadySettled);
}

BOOST_AUTO_TEST_CASE(arbitrator_replaces_oracle)
{
    const auto carol = party("carol");
    Milan m(true, true, carol.pub);
    m.w.registry.enroll(carol);
    BOOST_TEST((m.c->funding_lock().as<MultiSig>()->keys[2] == carol.pub));
    // The oracle can still sign, but its key is no longer part of the lock.
    const auto s = m.c->poll(m.oracle, T0 + 9 * HOUR);
    BOOST_REQUIRE(s);
    CHECK_ERRC(m.c->co_sign(*s, m.bob, m.w.registry), Errc::BadWitness);

    Milan n(true, true, carol.pub);
    n.w.registry.enroll(carol);
    CHECK_ERRC(n.c->arbitrate(party("dave"), n.bob.pub, T0), Errc::InvalidArgument);
    const auto a = n.c->arbitrate(carol, n.bob.pub, T0);
    n.w.confirm(n.c->co_sign(a, n.bob, n.w.registry));
    BOOST_TEST(n.c->state() == ContractState::SettledCondition);
}

BOOST_AUTO_TEST_SUITE_END()

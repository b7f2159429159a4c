// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_TEST_HELPERS_HPP
#define ORACLESIM_TEST_HELPERS_HPP

#include <oraclesim/chain.hpp>
#include <oraclesim/errors.hpp>
#include <oraclesim/keys.hpp>
#include <oraclesim/mempool.hpp>
#include <oraclesim/mining.hpp>
#include <oraclesim/policy.hpp>
#include <oraclesim/rng.hpp>

#include <boost/test/unit_test.hpp>

#include <concepts>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace oraclesim {

// Readable failure output for enums with a to_string overload and for blobs.
template <typename E>
    requires std::is_enum_v<E> && requires(E e) { to_string(e); }
std::ostream& boost_test_print_type(std::ostream& os, const E& e)
{
    return os << to_string(e);
}

inline std::ostream& boost_test_print_type(std::ostream& os, const Errc& e) { return os << errc_name(e); }

template <typename Tag>
std::ostream& boost_test_print_type(std::ostream& os, const Blob32<Tag>& b)
{
    return os << b.hex();
}

} // namespace oraclesim

// ADL only looks in the enum's own namespace.
#define ORACLESIM_TEST_ENUM_PRINTER(ns)                                                \
    namespace oraclesim::ns {                                                          \
    template <typename E>                                                              \
        requires std::is_enum_v<E> && requires(E e) { to_string(e); }                 \
    std::ostream& boost_test_print_type(std::ostream& os, const E& e)                  \
    {                                                                                  \
        return os << to_string(e);                                                     \
    }                                                                                  \
    }

ORACLESIM_TEST_ENUM_PRINTER(truthcoin)
ORACLESIM_TEST_ENUM_PRINTER(counterparty)
ORACLESIM_TEST_ENUM_PRINTER(oraclize)

namespace std {

inline std::ostream& boost_test_print_type(std::ostream& os, const std::vector<std::uint8_t>& v) { return os << oraclesim::to_hex(v); }

template <typename T>
std::ostream& boost_test_print_type(std::ostream& os, const std::optional<T>& o)
{
    if (!o) return os << "nullopt";
    if constexpr (std::is_arithmetic_v<T> || std::is_same_v<T, std::string>) {
        return os << *o;
    } else {
        using oraclesim::boost_test_print_type;
        return boost_test_print_type(os, *o);
    }
}

} // namespace std

// Passes when `expr` throws oraclesim::Error carrying `errc`.
#define CHECK_ERRC(expr, errc)                                                                                  \
    BOOST_CHECK_EXCEPTION(expr, ::oraclesim::Error, [](const ::oraclesim::Error& e) {                           \
        BOOST_TEST_INFO("got " << ::oraclesim::errc_name(e.code()) << ": " << e.what());                         \
        return e.code() == (errc);                                                                               \
    })

namespace testutil {

using namespace oraclesim;

inline KeyPair party(const std::string& name) { return keygen("test/" + name); }

/**
 * A chain with one genesis coin per funded party, everyone enrolled, and a
 * single always-on miner that accepts anything.
 */
struct World {
    KeyRegistry registry;
    std::unique_ptr<Chain> chain;
    Mempool pool{StandardnessPolicy::for_era(PolicyEra::V090)};
    std::vector<Miner> miners{{"all", 1.0, true, DEFAULT_BLOCK_BUDGET}};
    Rng rng{7};

    explicit World(std::vector<std::pair<KeyPair, Amount>> funds)
    {
        std::vector<TxOut> genesis;
        for (const auto& [kp, v] : funds) {
            registry.enroll(kp);
            genesis.push_back(TxOut{v, LockScript::pay_to_key(kp.pub)});
        }
        chain = std::make_unique<Chain>(registry, std::move(genesis));
    }

    OutPoint genesis_out(std::uint32_t i) const { return {chain->genesis_txid(), i}; }

    SubmitResult submit(const Transaction& tx) { return pool.submit(*chain, tx); }

    MinedBlock mine() { return mine_next(*chain, pool, miners, rng); }

    /** Submit and mine until confirmed, failing the test on rejection. */
    void confirm(const Transaction& tx)
    {
        const auto r = submit(tx);
        BOOST_REQUIRE_MESSAGE(r.accepted(), "rejected: " << to_string(r.status) << " " << r.detail);
        for (int i = 0; i < 10 && !chain->is_confirmed(r.txid); ++i) mine();
        BOOST_REQUIRE(chain->is_confirmed(r.txid));
    }
};

} // namespace testutil

#endif // ORACLESIM_TEST_HELPERS_HPP

// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_RNG_HPP
#define ORACLESIM_RNG_HPP

#include <cstdint>
#include <random>

namespace oraclesim {

/**
 * Seeded generator with platform-independent derived draws.
 *
 * std::mt19937_64 output is fixed by the standard; the library's
 * distributions are not, so doubles and bounded integers are derived here.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : m_engine(seed) {}

    std::uint64_t next() { return m_engine(); }

    /** Uniform in [0, 1) with 53 bits of precision. */
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /** Uniform integer in [0, bound). bound must be > 0. */
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    /** Uniform integer in [lo, hi]. */
    std::int64_t range(std::int64_t lo, std::int64_t hi)
    {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool chance(double p) { return uniform() < p; }

private:
    std::mt19937_64 m_engine;
};

} // namespace oraclesim

#endif // ORACLESIM_RNG_HPP

// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_MINING_HPP
#define ORACLESIM_MINING_HPP

#include <oraclesim/chain.hpp>
#include <oraclesim/mempool.hpp>
#include <oraclesim/rng.hpp>

#include <span>
#include <string>
#include <vector>

namespace oraclesim {

inline constexpr std::size_t DEFAULT_BLOCK_BUDGET = 16'384;

struct Miner {
    std::string id;
    double hashrate_share = 0.0;
    bool accepts_nonstandard = false;
    std::size_t block_size_budget = DEFAULT_BLOCK_BUDGET;
};

/** Throws NoMiners / BadMinerTable (shares outside (0,1] or not summing to 1 within 1e-12). */
void check_miner_table(std::span<const Miner> miners);

/** Winner drawn with probability equal to its hashrate share. */
const Miner& draw_miner(std::span<const Miner> miners, Rng& rng);

/**
 * Greedy fee-per-byte selection under the miner's byte budget. Ties go to
 * the earlier arrival, then the smaller txid. Miners that refuse
 * non-standard transactions never see them.
 */
std::vector<const MempoolEntry*> select_transactions(const Chain& chain, const Mempool& pool, const Miner& miner);

struct Inclusion {
    Txid txid;
    Height arrival = 0;
    Height height = 0;
    bool standard = true;

    Height delay() const { return height - arrival; }
};

struct MinedBlock {
    Block block;
    std::vector<Inclusion> included;
    std::vector<Txid> expired;
};

/** Draw a winner, assemble and connect its block, then expire stale entries. */
MinedBlock mine_next(Chain& chain, Mempool& pool, std::span<const Miner> miners, Rng& rng);

} // namespace oraclesim

#endif // ORACLESIM_MINING_HPP

// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/mining.hpp>
#include <oraclesim/errors.hpp>

#include <algorithm>
#include <cmath>

namespace oraclesim {

void check_miner_table(std::span<const Miner> miners)
{
    if (miners.empty()) throw Error(Errc::NoMiners, "empty miner table");
    double total = 0.0;
    for (const auto& m : miners) {
        if (!(m.hashrate_share > 0.0 && m.hashrate_share <= 1.0))
            throw Error(Errc::BadMinerTable, "hashrate share of '" + m.id + "' outside (0,1]");
        total += m.hashrate_share;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw Error(Errc::BadMinerTable, "hashrate shares do not sum to 1");
}

const Miner& draw_miner(std::span<const Miner> miners, Rng& rng)
{
    if (miners.empty()) throw Error(Errc::NoMiners, "empty miner table");
    const double u = rng.uniform();
    double cum = 0.0;
    for (const auto& m : miners) {
        cum += m.hashrate_share;
        if (u < cum) return m;
    }
    return miners.back();
}

namespace {

// a/b > c/d for positive denominators, exact (continued-fraction comparison).
bool ratio_greater(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d)
{
    for (;;) {
        const auto qa = a / b, qc = c / d;
        if (qa != qc) return qa > qc;
        const auto ra = a % b, rc = c % d;
        if (ra == 0) return false;
        if (rc == 0) return true;
        // ra/b > rc/d  <=>  d/rc > b/ra
        const auto nb = b;
        a = d;
        b = rc;
        c = nb;
        d = ra;
    }
}

} // namespace

std::vector<const MempoolEntry*> select_transactions(const Chain& chain, const Mempool& pool, const Miner& miner)
{
    std::vector<const MempoolEntry*> candidates;
    for (const auto& [txid, e] : pool.entries()) {
        if (!miner.accepts_nonstandard && !e.classification.standard()) continue;
        candidates.push_back(&e);
    }
    std::sort(candidates.begin(), candidates.end(), [](const MempoolEntry* a, const MempoolEntry* b) {
        const auto fa = static_cast<std::uint64_t>(a->fee), fb = static_cast<std::uint64_t>(b->fee);
        if (ratio_greater(fa, a->size, fb, b->size)) return true;
        if (ratio_greater(fb, b->size, fa, a->size)) return false;
        if (a->arrival != b->arrival) return a->arrival < b->arrival;
        return a->txid < b->txid;
    });

    const Height next = chain.height() + 1;
    UtxoOverlay view(chain.utxos());
    std::vector<const MempoolEntry*> chosen;
    std::size_t used = 0;
    for (const auto* e : candidates) {
        if (used + e->size > miner.block_size_budget) continue;
        if (!validate_tx(e->tx, view, next, chain.verifier()).valid()) continue;
        view.apply(e->tx, e->txid, next);
        used += e->size;
        chosen.push_back(e);
    }
    return chosen;
}

MinedBlock mine_next(Chain& chain, Mempool& pool, std::span<const Miner> miners, Rng& rng)
{
    check_miner_table(miners);
    const Miner& winner = draw_miner(miners, rng);

    MinedBlock out;
    out.block.height = chain.height() + 1;
    out.block.miner_id = winner.id;
    out.block.parent = chain.tip().hash();
    for (const auto* e : select_transactions(chain, pool, winner)) {
        out.block.txs.push_back(e->tx);
        out.included.push_back(Inclusion{e->txid, e->arrival, out.block.height, e->classification.standard()});
    }
    chain.connect(out.block);
    pool.remove_for_block(chain, out.block);
    out.expired = pool.expire(chain.height());
    return out;
}

} // namespace oraclesim

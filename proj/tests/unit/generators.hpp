// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_TEST_GENERATORS_HPP
#define ORACLESIM_TEST_GENERATORS_HPP

// Random locks and transactions for round-trip properties. Structurally
// valid, not necessarily spendable.

#include <oraclesim/hash.hpp>
#include <oraclesim/rng.hpp>
#include <oraclesim/transaction.hpp>

#include <string>

namespace testutil {

using namespace oraclesim;

inline LockScript random_lock(Rng& rng, int depth)
{
    auto key = [&] { return keygen("k" + std::to_string(rng.below(1000))).pub; };
    const auto pick = depth >= 3 ? rng.below(4) : rng.below(7);
    switch (pick) {
    case 0: return LockScript::pay_to_key(key());
    case 1: {
        std::vector<PubKey> keys(1 + rng.below(15));
        for (auto& k : keys) k = key();
        return LockScript::multisig(1 + rng.below(keys.size()), keys);
    }
    case 2: return LockScript::script_hash(sha256(as_bytes(std::to_string(rng.next()))));
    case 3: {
        Bytes b(rng.below(90));
        for (auto& x : b) x = static_cast<std::uint8_t>(rng.below(256));
        return LockScript::data_carrier(b);
    }
    case 4: return LockScript::time_locked(random_lock(rng, depth + 1), rng.below(1000));
    case 5: return LockScript::hash_locked(random_lock(rng, depth + 1), sha256(as_bytes(std::to_string(rng.next()))));
    default: {
        std::vector<LockScript> br;
        for (std::size_t i = 0, n = 2 + rng.below(3); i < n; ++i) br.push_back(random_lock(rng, depth + 1));
        return LockScript::any_of(std::move(br));
    }
    }
}

inline Transaction random_tx(Rng& rng)
{
    Transaction tx;
    for (std::size_t i = 0, n = rng.below(4); i < n; ++i) {
        TxIn in{OutPoint{sha256(as_bytes(std::to_string(rng.next()))), static_cast<std::uint32_t>(rng.below(5))}, {}};
        for (std::size_t s = 0, k = rng.below(3); s < k; ++s)
            in.witness.signatures.push_back(sign(keygen("s" + std::to_string(s)).secret, sha256(as_bytes("d"))));
        if (rng.chance(0.5)) in.witness.redeem = random_lock(rng, 0);
        if (rng.chance(0.3)) in.witness.expr_preimage = Bytes{1, 2, 3};
        tx.inputs.push_back(std::move(in));
    }
    for (std::size_t i = 0, n = rng.below(4); i < n; ++i)
        tx.outputs.push_back(TxOut{static_cast<Amount>(rng.below(COIN)), random_lock(rng, 0)});
    tx.locktime = rng.below(500);
    return tx;
}

} // namespace testutil

#endif // ORACLESIM_TEST_GENERATORS_HPP

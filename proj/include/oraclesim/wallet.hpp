// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_WALLET_HPP
#define ORACLESIM_WALLET_HPP

#include <oraclesim/chain.hpp>
#include <oraclesim/mempool.hpp>

#include <utility>
#include <vector>

namespace oraclesim {

/** Confirmed PayToKey coins of `owner`, in outpoint order, minus those a pooled tx spends. */
std::vector<std::pair<OutPoint, Coin>> spendable_coins(const Chain& chain, const PubKey& owner, const Mempool* pool = nullptr);

Amount balance(const Chain& chain, const PubKey& owner);

/**
 * Pay `outputs` plus `fee` from the payer's coins, returning change to the
 * payer. Inputs are signed. Throws InsufficientFunds.
 */
Transaction build_payment(const Chain& chain, const KeyPair& payer, std::vector<TxOut> outputs, Amount fee,
                          const Mempool* pool = nullptr);

/** Unsigned single-input spend of `op` paying `value` to `dest`. */
Transaction spend_to(const OutPoint& op, const PubKey& dest, Amount value, Height locktime = 0);

} // namespace oraclesim

#endif // ORACLESIM_WALLET_HPP

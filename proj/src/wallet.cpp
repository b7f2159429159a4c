// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/wallet.hpp>
#include <oraclesim/errors.hpp>

namespace oraclesim {

std::vector<std::pair<OutPoint, Coin>> spendable_coins(const Chain& chain, const PubKey& owner, const Mempool* pool)
{
    std::vector<std::pair<OutPoint, Coin>> out;
    for (const auto& [op, coin] : chain.utxos().coins()) {
        const auto* p2k = coin.out.lock.as<PayToKey>();
        if (!p2k || p2k->key != owner) continue;
        if (pool && pool->spends(op)) continue;
        out.emplace_back(op, coin);
    }
    return out;
}

Amount balance(const Chain& chain, const PubKey& owner)
{
    Amount total = 0;
    for (const auto& [op, coin] : spendable_coins(chain, owner)) total += coin.out.value;
    return total;
}

Transaction build_payment(const Chain& chain, const KeyPair& payer, std::vector<TxOut> outputs, Amount fee, const Mempool* pool)
{
    if (fee < 0) throw Error(Errc::InvalidArgument, "negative fee");
    Transaction tx;
    tx.outputs = std::move(outputs);
    const Amount needed = tx.output_total() + fee;

    Amount gathered = 0;
    for (const auto& [op, coin] : spendable_coins(chain, payer.pub, pool)) {
        if (gathered >= needed && !tx.inputs.empty()) break;
        tx.inputs.push_back(TxIn{op, {}});
        gathered += coin.out.value;
    }
    if (gathered < needed || tx.inputs.empty())
        throw Error(Errc::InsufficientFunds, "need " + std::to_string(needed) + ", have " + std::to_string(gathered));
    if (gathered > needed) tx.outputs.push_back(TxOut{gathered - needed, LockScript::pay_to_key(payer.pub)});
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) sign_input(tx, i, payer.secret);
    return tx;
}

Transaction spend_to(const OutPoint& op, const PubKey& dest, Amount value, Height locktime)
{
    Transaction tx;
    tx.inputs.push_back(TxIn{op, {}});
    tx.outputs.push_back(TxOut{value, LockScript::pay_to_key(dest)});
    tx.locktime = locktime;
    return tx;
}

} // namespace oraclesim

// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/will_oracle.hpp>
#include <oraclesim/errors.hpp>
#include <oraclesim/hash.hpp>
#include <oraclesim/wallet.hpp>

#include <algorithm>
#include <regex>

namespace oraclesim {

LockScript will_lock(const PubKey& oracle, const PubKey& heir, const Hash256& expr_hash)
{
    return LockScript::hash_locked(LockScript::multisig(2, {oracle, heir}), expr_hash);
}

LockScript WillContract::lock() const { return will_lock(oracle_pub, heir_pub, expr_hash); }

WillCreation create_will(const Chain& chain, const KeyPair& creator, const PubKey& oracle_pub, const PubKey& heir_pub,
                         std::string_view expression, Amount amount, Amount fee, const Mempool* pool)
{
    if (expression.empty()) throw Error(Errc::InvalidArgument, "will expression must be nonempty");
    if (amount <= 0) throw Error(Errc::InvalidArgument, "will amount must be positive");

    WillCreation out;
    out.contract.oracle_pub = oracle_pub;
    out.contract.heir_pub = heir_pub;
    out.contract.expr_hash = sha256(as_bytes(expression));
    out.contract.amount = amount;
    out.funding = build_payment(chain, creator, {TxOut{amount, out.contract.lock()}}, fee, pool);
    out.contract.funding_outpoint = OutPoint{out.funding.txid(), 0};
    return out;
}

bool well_formed_expression(std::string_view expr)
{
    static const std::regex re(R"(has_died\('[^']+',\s*born_on=\d{4}/\d{2}/\d{2}\))");
    return std::regex_match(expr.begin(), expr.end(), re);
}

Signature OracleServer::request_signature(const Chain& chain, std::string_view expression, const Transaction& partial_tx,
                                          std::size_t input_index, Timestamp now) const
{
    if (input_index >= partial_tx.inputs.size()) throw Error(Errc::InvalidArgument, "input index out of range");
    const TxOut* spent = chain.find_output(partial_tx.inputs[input_index].prevout);
    const HashLocked* hl = spent ? spent->lock.as<HashLocked>() : nullptr;
    if (!hl) throw Error(Errc::InvalidArgument, "input does not spend a will output");
    const auto* ms = hl->inner->as<MultiSig>();
    if (!ms || std::find(ms->keys.begin(), ms->keys.end(), m_keys.pub) == ms->keys.end())
        throw Error(Errc::InvalidArgument, "will output does not name this oracle");

    if (sha256(as_bytes(expression)) != hl->expr_hash) throw Error(Errc::HashMismatch, "expression does not match committed hash");
    if (!well_formed_expression(expression)) throw Error(Errc::BadExpression, "unsupported expression: " + std::string(expression));

    const auto obs = m_source.query(std::string(expression), now);
    if (!compare(obs.value, Comparator::IsTrue, 0.0)) throw Error(Errc::ConditionFalse, "expression is not true at " + std::to_string(now));
    return sign(m_keys.secret, partial_tx.sighash(input_index));
}

Transaction build_claim(const WillContract& contract, std::string_view expression, const PubKey& dest, Amount fee)
{
    if (fee < 0 || fee > contract.amount) throw Error(Errc::InvalidArgument, "fee outside [0, amount]");
    auto tx = spend_to(contract.funding_outpoint, dest, contract.amount - fee);
    const auto pre = as_bytes(expression);
    tx.inputs[0].witness.expr_preimage = Bytes(pre.begin(), pre.end());
    return tx;
}

Transaction claim(const WillContract& contract, std::string_view expression, const KeyPair& heir, const Signature& oracle_sig,
                  const PubKey& dest, Amount fee)
{
    auto tx = build_claim(contract, expression, dest, fee);
    sign_input(tx, 0, heir.secret);
    tx.inputs[0].witness.signatures.push_back(oracle_sig);
    return tx;
}

} // namespace oraclesim

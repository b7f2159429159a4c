// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_WILL_ORACLE_HPP
#define ORACLESIM_WILL_ORACLE_HPP

#include <oraclesim/chain.hpp>
#include <oraclesim/datafeed.hpp>
#include <oraclesim/mempool.hpp>

#include <string>
#include <string_view>

namespace oraclesim {

/**
 * Single-oracle inheritance contract. The funding output is
 *   <oracle> <heir> 2 CHECKMULTISIGVERIFY <H(expr)>
 * modelled as HashLocked(MultiSig(2, [oracle, heir]), H(expr)). The
 * template is bare and so not standard: funding needs a miner that
 * accepts non-standard transactions.
 */
struct WillContract {
    PubKey oracle_pub;
    PubKey heir_pub;
    Hash256 expr_hash;
    OutPoint funding_outpoint;
    Amount amount = 0;

    LockScript lock() const;
};

LockScript will_lock(const PubKey& oracle, const PubKey& heir, const Hash256& expr_hash);

struct WillCreation {
    WillContract contract;
    Transaction funding;
};

/**
 * Build and sign the creator's funding transaction. Throws
 * InvalidArgument for an empty expression, InsufficientFunds otherwise.
 */
WillCreation create_will(const Chain& chain, const KeyPair& creator, const PubKey& oracle_pub, const PubKey& heir_pub,
                         std::string_view expression, Amount amount, Amount fee, const Mempool* pool = nullptr);

/** Does `expr` have the form has_died('name', born_on=YYYY/MM/DD)? */
bool well_formed_expression(std::string_view expr);

/**
 * Passive oracle server. Signs a spend of a will output only when the
 * supplied expression hashes to the output's commitment and the truth
 * source reports it true at the current time.
 */
class OracleServer {
public:
    OracleServer(KeyPair keys, const DataSource& truth_source) : m_keys(keys), m_source(truth_source) {}

    /** Published on the oracle's website. */
    const PubKey& pub() const { return m_keys.pub; }

    /**
     * Errors: HashMismatch, BadExpression, NoData, ConditionFalse. Also
     * InvalidArgument when the input does not spend a will output known
     * to the chain.
     */
    Signature request_signature(const Chain& chain, std::string_view expression, const Transaction& partial_tx,
                                std::size_t input_index, Timestamp now) const;

private:
    KeyPair m_keys;
    const DataSource& m_source;
};

/** Unsigned claim paying the will amount minus fee to `dest`, carrying the expression preimage. */
Transaction build_claim(const WillContract& contract, std::string_view expression, const PubKey& dest, Amount fee);

/** The heir's signature plus the oracle's. Validation is the chain's business. */
Transaction claim(const WillContract& contract, std::string_view expression, const KeyPair& heir,
                  const Signature& oracle_sig, const PubKey& dest, Amount fee);

} // namespace oraclesim

#endif // ORACLESIM_WILL_ORACLE_HPP

// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_CHAIN_HPP
#define ORACLESIM_CHAIN_HPP

#include <oraclesim/transaction.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace oraclesim {

struct Coin {
    TxOut out;
    Height height = 0;
};

/** Read access to unspent outputs plus the record of spent ones. */
class UtxoView {
public:
    virtual ~UtxoView() = default;
    virtual const Coin* find(const OutPoint& op) const = 0;
    virtual bool was_spent(const OutPoint& op) const = 0;
};

class UtxoSet final : public UtxoView {
public:
    const Coin* find(const OutPoint& op) const override;
    bool was_spent(const OutPoint& op) const override { return m_spent.contains(op); }

    void add(const OutPoint& op, Coin coin) { m_coins.insert_or_assign(op, std::move(coin)); }
    void spend(const OutPoint& op);

    const std::map<OutPoint, Coin>& coins() const { return m_coins; }

private:
    std::map<OutPoint, Coin> m_coins;
    std::set<OutPoint> m_spent;
};

/** Pending spends and creations layered over a base view. */
class UtxoOverlay final : public UtxoView {
public:
    explicit UtxoOverlay(const UtxoView& base) : m_base(base) {}

    const Coin* find(const OutPoint& op) const override;
    bool was_spent(const OutPoint& op) const override;

    void apply(const Transaction& tx, const Txid& txid, Height height);

private:
    const UtxoView& m_base;
    std::map<OutPoint, Coin> m_added;
    std::set<OutPoint> m_spent;
};

enum class TxError {
    MissingInput,
    DoubleSpend,
    BadWitness,
    Overspend,
    Premature,
    UnspendableInput,
};

std::string_view to_string(TxError e);

struct TxValidation {
    std::optional<TxError> error;
    std::string detail;
    Amount fee = 0;

    bool valid() const { return !error; }
};

/**
 * Consensus check of a transaction against a UTXO view for inclusion in a
 * block at `height`. Classification never enters here.
 */
TxValidation validate_tx(const Transaction& tx, const UtxoView& utxos, Height height, const SignatureVerifier& verifier);

/**
 * Does the witness satisfy the lock? Returns nullopt on success or the
 * failure reason (BadWitness, Premature, UnspendableInput).
 */
std::optional<TxError> check_lock(const LockScript& lock, const Witness& witness, const Hash256& sighash,
                                  Height height, const SignatureVerifier& verifier);

struct Block {
    Height height = 0;
    std::string miner_id;
    Hash256 parent;
    std::vector<Transaction> txs;

    Bytes serialize() const;
    static Block deserialize(ByteView data);
    Hash256 hash() const;
};

struct TxLocation {
    Height height = 0;
    std::size_t index = 0;
};

/**
 * Append-only ledger. Height 0 is a genesis block whose single transaction
 * has no inputs and creates the initial allocation.
 */
class Chain {
public:
    Chain(const SignatureVerifier& verifier, std::vector<TxOut> genesis_outputs);

    Height height() const { return m_blocks.back().height; }
    const Block& tip() const { return m_blocks.back(); }
    const std::vector<Block>& blocks() const { return m_blocks; }
    const UtxoSet& utxos() const { return m_utxos; }
    const SignatureVerifier& verifier() const { return m_verifier; }
    const Txid& genesis_txid() const { return m_genesis_txid; }

    /** Validate for inclusion in the next block. */
    TxValidation check(const Transaction& tx) const;

    /** Append a block; throws Error(InvalidState) if any tx fails validation. */
    void connect(Block block);

    std::optional<TxLocation> locate(const Txid& txid) const;
    const Transaction* find_tx(const Txid& txid) const;
    bool is_confirmed(const Txid& txid) const { return m_index.contains(txid); }

    /** Output a spent or unspent outpoint refers to, from chain history. */
    const TxOut* find_output(const OutPoint& op) const;

    /** Σ unspent value, excluding data-carrier outputs. */
    Amount supply() const;

private:
    const SignatureVerifier& m_verifier;
    std::vector<Block> m_blocks;
    UtxoSet m_utxos;
    std::map<Txid, TxLocation> m_index;
    Txid m_genesis_txid;
};

} // namespace oraclesim

#endif // ORACLESIM_CHAIN_HPP

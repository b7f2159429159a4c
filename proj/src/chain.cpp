// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/chain.hpp>
#include <oraclesim/errors.hpp>
#include <oraclesim/hash.hpp>

#include <set>

namespace oraclesim {

const Coin* UtxoSet::find(const OutPoint& op) const
{
    auto it = m_coins.find(op);
    return it == m_coins.end() ? nullptr : &it->second;
}

void UtxoSet::spend(const OutPoint& op)
{
    if (m_coins.erase(op) == 0) throw Error(Errc::InvalidState, "spend of missing coin");
    m_spent.insert(op);
}

const Coin* UtxoOverlay::find(const OutPoint& op) const
{
    if (m_spent.contains(op)) return nullptr;
    if (auto it = m_added.find(op); it != m_added.end()) return &it->second;
    return m_base.find(op);
}

bool UtxoOverlay::was_spent(const OutPoint& op) const { return m_spent.contains(op) || m_base.was_spent(op); }

void UtxoOverlay::apply(const Transaction& tx, const Txid& txid, Height height)
{
    for (const auto& in : tx.inputs) m_spent.insert(in.prevout);
    for (std::uint32_t i = 0; i < tx.outputs.size(); ++i) m_added.insert_or_assign(OutPoint{txid, i}, Coin{tx.outputs[i], height});
}

std::string_view to_string(TxError e)
{
    switch (e) {
    case TxError::MissingInput: return "MissingInput";
    case TxError::DoubleSpend: return "DoubleSpend";
    case TxError::BadWitness: return "BadWitness";
    case TxError::Overspend: return "Overspend";
    case TxError::Premature: return "Premature";
    case TxError::UnspendableInput: return "UnspendableInput";
    }
    return "?";
}

namespace {

bool signed_by(const Witness& witness, const PubKey& key, const Hash256& sighash, const SignatureVerifier& verifier)
{
    if (!verifier.knows(key)) return false;
    for (const auto& sig : witness.signatures) {
        if (sig.signer != key) continue;
        if (verifier.verify(sig, key, sighash)) return true;
    }
    return false;
}

std::optional<TxError> check_lock_impl(const LockScript& lock, const Witness& witness, const Hash256& sighash,
                                       Height height, const SignatureVerifier& verifier, bool redeemed)
{
    if (const auto* p2k = lock.as<PayToKey>()) {
        if (signed_by(witness, p2k->key, sighash, verifier)) return std::nullopt;
        return TxError::BadWitness;
    }
    if (const auto* ms = lock.as<MultiSig>()) {
        std::size_t good = 0;
        std::set<PubKey> seen;
        for (const auto& k : ms->keys) {
            if (!seen.insert(k).second) continue;
            if (signed_by(witness, k, sighash, verifier)) ++good;
        }
        if (good >= ms->required) return std::nullopt;
        return TxError::BadWitness;
    }
    if (const auto* sh = lock.as<ScriptHash>()) {
        if (redeemed || !witness.redeem) return TxError::BadWitness;
        if (witness.redeem->digest() != sh->digest) return TxError::BadWitness;
        return check_lock_impl(*witness.redeem, witness, sighash, height, verifier, true);
    }
    if (lock.is<DataCarrier>()) return TxError::UnspendableInput;
    if (const auto* tl = lock.as<TimeLocked>()) {
        if (height < tl->unlock_height) return TxError::Premature;
        return check_lock_impl(*tl->inner, witness, sighash, height, verifier, redeemed);
    }
    if (const auto* hl = lock.as<HashLocked>()) {
        if (!witness.expr_preimage || sha256(*witness.expr_preimage) != hl->expr_hash) return TxError::BadWitness;
        return check_lock_impl(*hl->inner, witness, sighash, height, verifier, redeemed);
    }
    const auto& any = std::get<AnyOf>(lock.get());
    bool premature = false;
    for (const auto& branch : any.branches) {
        auto r = check_lock_impl(branch, witness, sighash, height, verifier, redeemed);
        if (!r) return std::nullopt;
        if (*r == TxError::Premature) premature = true;
    }
    return premature ? TxError::Premature : TxError::BadWitness;
}

} // namespace

std::optional<TxError> check_lock(const LockScript& lock, const Witness& witness, const Hash256& sighash,
                                  Height height, const SignatureVerifier& verifier)
{
    return check_lock_impl(lock, witness, sighash, height, verifier, false);
}

TxValidation validate_tx(const Transaction& tx, const UtxoView& utxos, Height height, const SignatureVerifier& verifier)
{
    auto fail = [](TxError e, std::string detail) { return TxValidation{e, std::move(detail), 0}; };

    if (tx.inputs.empty()) return fail(TxError::MissingInput, "no inputs");

    std::set<OutPoint> seen;
    Amount in_total = 0;
    std::vector<const Coin*> coins;
    coins.reserve(tx.inputs.size());
    for (const auto& in : tx.inputs) {
        if (!seen.insert(in.prevout).second) return fail(TxError::DoubleSpend, "input repeated within transaction");
        const Coin* coin = utxos.find(in.prevout);
        if (!coin) {
            if (utxos.was_spent(in.prevout)) return fail(TxError::DoubleSpend, "input already spent");
            return fail(TxError::MissingInput, "unknown outpoint " + in.prevout.txid.hex() + ":" + std::to_string(in.prevout.index));
        }
        if (coin->out.lock.is<DataCarrier>()) return fail(TxError::UnspendableInput, "data carrier output");
        in_total += coin->out.value;
        if (!money_range(in_total)) return fail(TxError::Overspend, "input total out of range");
        coins.push_back(coin);
    }

    if (tx.locktime > height) return fail(TxError::Premature, "locktime " + std::to_string(tx.locktime) + " > height " + std::to_string(height));

    for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
        const auto sighash = tx.sighash(i);
        if (auto err = check_lock(coins[i]->out.lock, tx.inputs[i].witness, sighash, height, verifier))
            return fail(*err, "input " + std::to_string(i));
    }

    Amount out_total = 0;
    for (const auto& out : tx.outputs) {
        if (!money_range(out.value)) return fail(TxError::Overspend, "output value out of range");
        out_total += out.value;
        if (!money_range(out_total)) return fail(TxError::Overspend, "output total out of range");
    }
    if (out_total > in_total) return fail(TxError::Overspend, "outputs exceed inputs");
    return TxValidation{std::nullopt, {}, in_total - out_total};
}

Bytes Block::serialize() const
{
    ByteWriter w;
    w.u64(height);
    w.str(miner_id);
    w.blob(parent);
    w.u32(static_cast<std::uint32_t>(txs.size()));
    for (const auto& tx : txs) w.var_bytes(tx.serialize());
    return std::move(w).take();
}

Block Block::deserialize(ByteView data)
{
    ByteReader r(data);
    Block b;
    b.height = r.u64();
    b.miner_id = r.str();
    b.parent = r.blob<HashTag>();
    const auto n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto raw = r.var_bytes();
        b.txs.push_back(Transaction::deserialize(raw));
    }
    if (!r.done()) throw Error(Errc::Malformed, "trailing bytes after block");
    return b;
}

Hash256 Block::hash() const { return sha256(serialize()); }

Chain::Chain(const SignatureVerifier& verifier, std::vector<TxOut> genesis_outputs) : m_verifier(verifier)
{
    Transaction gen;
    gen.outputs = std::move(genesis_outputs);
    (void)gen.output_total();
    m_genesis_txid = gen.txid();
    for (std::uint32_t i = 0; i < gen.outputs.size(); ++i) m_utxos.add(OutPoint{m_genesis_txid, i}, Coin{gen.outputs[i], 0});
    m_index.emplace(m_genesis_txid, TxLocation{0, 0});

    Block genesis;
    genesis.height = 0;
    genesis.miner_id = "genesis";
    genesis.txs.push_back(std::move(gen));
    m_blocks.push_back(std::move(genesis));
}

TxValidation Chain::check(const Transaction& tx) const { return validate_tx(tx, m_utxos, height() + 1, m_verifier); }

void Chain::connect(Block block)
{
    if (block.height != height() + 1) throw Error(Errc::InvalidState, "non-consecutive block height");
    if (block.parent != tip().hash()) throw Error(Errc::InvalidState, "block parent is not the tip");

    UtxoOverlay view(m_utxos);
    std::vector<Txid> txids;
    for (const auto& tx : block.txs) {
        auto v = validate_tx(tx, view, block.height, m_verifier);
        if (!v.valid())
            throw Error(Errc::InvalidState, "block contains invalid tx: " + std::string(to_string(*v.error)) + " " + v.detail);
        auto txid = tx.txid();
        if (m_index.contains(txid)) throw Error(Errc::InvalidState, "duplicate txid in chain");
        view.apply(tx, txid, block.height);
        txids.push_back(txid);
    }

    for (std::size_t t = 0; t < block.txs.size(); ++t) {
        const auto& tx = block.txs[t];
        for (const auto& in : tx.inputs) m_utxos.spend(in.prevout);
        for (std::uint32_t i = 0; i < tx.outputs.size(); ++i)
            m_utxos.add(OutPoint{txids[t], i}, Coin{tx.outputs[i], block.height});
        m_index.emplace(txids[t], TxLocation{block.height, t});
    }
    m_blocks.push_back(std::move(block));
}

std::optional<TxLocation> Chain::locate(const Txid& txid) const
{
    auto it = m_index.find(txid);
    if (it == m_index.end()) return std::nullopt;
    return it->second;
}

const Transaction* Chain::find_tx(const Txid& txid) const
{
    auto loc = locate(txid);
    if (!loc) return nullptr;
    return &m_blocks[loc->height].txs[loc->index];
}

const TxOut* Chain::find_output(const OutPoint& op) const
{
    const auto* tx = find_tx(op.txid);
    if (!tx || op.index >= tx->outputs.size()) return nullptr;
    return &tx->outputs[op.index];
}

Amount Chain::supply() const
{
    Amount total = 0;
    for (const auto& [op, coin] : m_utxos.coins())
        if (!coin.out.lock.is<DataCarrier>()) total += coin.out.value;
    return total;
}

} // namespace oraclesim

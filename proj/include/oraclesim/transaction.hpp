// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_TRANSACTION_HPP
#define ORACLESIM_TRANSACTION_HPP

#include <oraclesim/keys.hpp>
#include <oraclesim/script.hpp>

#include <compare>
#include <optional>
#include <vector>

namespace oraclesim {

/** Satoshi amounts. */
using Amount = std::int64_t;

inline constexpr Amount COIN = 100'000'000;
inline constexpr Amount MAX_MONEY = 21'000'000 * COIN;

inline bool money_range(Amount v) { return v >= 0 && v <= MAX_MONEY; }

struct OutPoint {
    Txid txid;
    std::uint32_t index = 0;

    friend auto operator<=>(const OutPoint&, const OutPoint&) = default;
};

struct Witness {
    std::vector<Signature> signatures;
    std::optional<LockScript> redeem;
    std::optional<Bytes> expr_preimage;

    friend bool operator==(const Witness&, const Witness&) = default;
};

struct TxIn {
    OutPoint prevout;
    Witness witness;

    friend bool operator==(const TxIn&, const TxIn&) = default;
};

struct TxOut {
    Amount value = 0;
    LockScript lock = LockScript::data_carrier({});

    friend bool operator==(const TxOut&, const TxOut&) = default;
};

struct Transaction {
    std::vector<TxIn> inputs;
    std::vector<TxOut> outputs;
    Height locktime = 0;

    friend bool operator==(const Transaction&, const Transaction&) = default;

    Bytes serialize() const;
    static Transaction deserialize(ByteView data);

    /** Serialization with every witness left empty. What signatures commit to. */
    Bytes serialize_unsigned() const;

    /** H(serialize()). */
    Txid txid() const;

    /** Digest an input's signatures must sign. */
    Hash256 sighash(std::size_t input_index) const;

    std::size_t size() const { return serialize().size(); }

    Amount output_total() const;
};

/** Append a signature over input `index` by `secret`. */
void sign_input(Transaction& tx, std::size_t index, const SecretKey& secret);

} // namespace oraclesim

#endif // ORACLESIM_TRANSACTION_HPP

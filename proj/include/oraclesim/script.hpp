// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_SCRIPT_HPP
#define ORACLESIM_SCRIPT_HPP

#include <oraclesim/bytes.hpp>

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

namespace oraclesim {

using Height = std::uint64_t;

/** Consensus cap on keys in one multisig template. */
inline constexpr std::size_t MAX_MULTISIG_KEYS = 15;

class LockScript;

struct PayToKey {
    PubKey key;
    friend bool operator==(const PayToKey&, const PayToKey&) = default;
};

struct MultiSig {
    std::uint8_t required = 0;
    std::vector<PubKey> keys;
    friend bool operator==(const MultiSig&, const MultiSig&) = default;
};

struct ScriptHash {
    Hash256 digest;
    friend bool operator==(const ScriptHash&, const ScriptHash&) = default;
};

/** OP_RETURN-style output. Never spendable. */
struct DataCarrier {
    Bytes payload;
    friend bool operator==(const DataCarrier&, const DataCarrier&) = default;
};

struct TimeLocked {
    Height unlock_height = 0;
    std::shared_ptr<const LockScript> inner;
    friend bool operator==(const TimeLocked& a, const TimeLocked& b);
};

/** `<keys> m CHECKMULTISIGVERIFY <hash> ...`: inner lock plus a committed preimage. */
struct HashLocked {
    Hash256 expr_hash;
    std::shared_ptr<const LockScript> inner;
    friend bool operator==(const HashLocked& a, const HashLocked& b);
};

/** Disjunction of branches; satisfied when any branch is. */
struct AnyOf {
    std::vector<LockScript> branches;
    friend bool operator==(const AnyOf& a, const AnyOf& b);
};

/**
 * Closed set of lock templates. Immutable once built; inner locks are shared.
 */
class LockScript {
public:
    using Variant = std::variant<PayToKey, MultiSig, ScriptHash, DataCarrier, TimeLocked, HashLocked, AnyOf>;

    static LockScript pay_to_key(const PubKey& key);
    static LockScript multisig(std::size_t required, std::vector<PubKey> keys);
    static LockScript script_hash(const Hash256& digest);
    static LockScript data_carrier(Bytes payload);
    static LockScript time_locked(LockScript inner, Height unlock_height);
    static LockScript hash_locked(LockScript inner, const Hash256& expr_hash);
    static LockScript any_of(std::vector<LockScript> branches);

    const Variant& get() const { return m_v; }
    template <typename T>
    const T* as() const { return std::get_if<T>(&m_v); }
    template <typename T>
    bool is() const { return std::holds_alternative<T>(m_v); }

    Bytes serialize() const;
    void serialize_into(ByteWriter& w) const;
    static LockScript deserialize(ByteView data);
    static LockScript read_from(ByteReader& r, int depth = 0);

    /** H(serialize()). The P2SH commitment. */
    Hash256 digest() const;

    friend bool operator==(const LockScript&, const LockScript&) = default;

private:
    explicit LockScript(Variant v) : m_v(std::move(v)) {}
    Variant m_v;
};

/** Wrap a redeem lock into a script-hash lock. */
LockScript p2sh_lock(const LockScript& redeem);

} // namespace oraclesim

#endif // ORACLESIM_SCRIPT_HPP

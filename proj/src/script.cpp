// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/script.hpp>
#include <oraclesim/errors.hpp>
#include <oraclesim/hash.hpp>

namespace oraclesim {

namespace {

enum LockTag : std::uint8_t {
    TAG_PAY_TO_KEY = 0x01,
    TAG_MULTISIG = 0x02,
    TAG_SCRIPT_HASH = 0x03,
    TAG_DATA_CARRIER = 0x04,
    TAG_TIME_LOCKED = 0x05,
    TAG_HASH_LOCKED = 0x06,
    TAG_ANY_OF = 0x07,
};

constexpr int MAX_NESTING = 8;
constexpr std::size_t MAX_BRANCHES = 16;

bool inner_eq(const std::shared_ptr<const LockScript>& a, const std::shared_ptr<const LockScript>& b)
{
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

} // namespace

bool operator==(const TimeLocked& a, const TimeLocked& b)
{
    return a.unlock_height == b.unlock_height && inner_eq(a.inner, b.inner);
}

bool operator==(const HashLocked& a, const HashLocked& b)
{
    return a.expr_hash == b.expr_hash && inner_eq(a.inner, b.inner);
}

bool operator==(const AnyOf& a, const AnyOf& b) { return a.branches == b.branches; }

LockScript LockScript::pay_to_key(const PubKey& key) { return LockScript(PayToKey{key}); }

LockScript LockScript::multisig(std::size_t required, std::vector<PubKey> keys)
{
    if (keys.size() > MAX_MULTISIG_KEYS)
        throw Error(Errc::KeyLimitExceeded, "multisig with " + std::to_string(keys.size()) + " keys exceeds 15");
    if (required < 1 || required > keys.size())
        throw Error(Errc::InvalidArgument, "multisig requires 1 <= m <= number of keys");
    return LockScript(MultiSig{static_cast<std::uint8_t>(required), std::move(keys)});
}

LockScript LockScript::script_hash(const Hash256& digest) { return LockScript(ScriptHash{digest}); }

LockScript LockScript::data_carrier(Bytes payload) { return LockScript(DataCarrier{std::move(payload)}); }

LockScript LockScript::time_locked(LockScript inner, Height unlock_height)
{
    return LockScript(TimeLocked{unlock_height, std::make_shared<const LockScript>(std::move(inner))});
}

LockScript LockScript::hash_locked(LockScript inner, const Hash256& expr_hash)
{
    return LockScript(HashLocked{expr_hash, std::make_shared<const LockScript>(std::move(inner))});
}

LockScript LockScript::any_of(std::vector<LockScript> branches)
{
    if (branches.size() < 2 || branches.size() > MAX_BRANCHES)
        throw Error(Errc::InvalidArgument, "any_of needs 2..16 branches");
    return LockScript(AnyOf{std::move(branches)});
}

void LockScript::serialize_into(ByteWriter& w) const
{
    std::visit(
        [&w](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PayToKey>) {
                w.u8(TAG_PAY_TO_KEY);
                w.blob(v.key);
            } else if constexpr (std::is_same_v<T, MultiSig>) {
                w.u8(TAG_MULTISIG);
                w.u8(v.required);
                w.u8(static_cast<std::uint8_t>(v.keys.size()));
                for (const auto& k : v.keys) w.blob(k);
            } else if constexpr (std::is_same_v<T, ScriptHash>) {
                w.u8(TAG_SCRIPT_HASH);
                w.blob(v.digest);
            } else if constexpr (std::is_same_v<T, DataCarrier>) {
                w.u8(TAG_DATA_CARRIER);
                w.var_bytes(v.payload);
            } else if constexpr (std::is_same_v<T, TimeLocked>) {
                w.u8(TAG_TIME_LOCKED);
                w.u64(v.unlock_height);
                v.inner->serialize_into(w);
            } else if constexpr (std::is_same_v<T, HashLocked>) {
                w.u8(TAG_HASH_LOCKED);
                w.blob(v.expr_hash);
                v.inner->serialize_into(w);
            } else {
                w.u8(TAG_ANY_OF);
                w.u8(static_cast<std::uint8_t>(v.branches.size()));
                for (const auto& b : v.branches) b.serialize_into(w);
            }
        },
        m_v);
}

Bytes LockScript::serialize() const
{
    ByteWriter w;
    serialize_into(w);
    return std::move(w).take();
}

LockScript LockScript::read_from(ByteReader& r, int depth)
{
    if (depth > MAX_NESTING) throw Error(Errc::Malformed, "lock script nested too deeply");
    const auto tag = r.u8();
    switch (tag) {
    case TAG_PAY_TO_KEY:
        return pay_to_key(r.blob<PubKeyTag>());
    case TAG_MULTISIG: {
        const auto m = r.u8();
        const auto n = r.u8();
        if (n > MAX_MULTISIG_KEYS || m < 1 || m > n) throw Error(Errc::Malformed, "bad multisig shape");
        std::vector<PubKey> keys;
        keys.reserve(n);
        for (unsigned i = 0; i < n; ++i) keys.push_back(r.blob<PubKeyTag>());
        return multisig(m, std::move(keys));
    }
    case TAG_SCRIPT_HASH:
        return script_hash(r.blob<HashTag>());
    case TAG_DATA_CARRIER:
        return data_carrier(r.var_bytes());
    case TAG_TIME_LOCKED: {
        const auto h = r.u64();
        return time_locked(read_from(r, depth + 1), h);
    }
    case TAG_HASH_LOCKED: {
        const auto h = r.blob<HashTag>();
        return hash_locked(read_from(r, depth + 1), h);
    }
    case TAG_ANY_OF: {
        const auto n = r.u8();
        if (n < 2 || n > MAX_BRANCHES) throw Error(Errc::Malformed, "bad any_of branch count");
        std::vector<LockScript> branches;
        branches.reserve(n);
        for (unsigned i = 0; i < n; ++i) branches.push_back(read_from(r, depth + 1));
        return any_of(std::move(branches));
    }
    default:
        throw Error(Errc::Malformed, "unknown lock tag " + std::to_string(tag));
    }
}

LockScript LockScript::deserialize(ByteView data)
{
    ByteReader r(data);
    auto out = read_from(r);
    if (!r.done()) throw Error(Errc::Malformed, "trailing bytes after lock script");
    return out;
}

Hash256 LockScript::digest() const { return sha256(serialize()); }

LockScript p2sh_lock(const LockScript& redeem) { return LockScript::script_hash(redeem.digest()); }

} // namespace oraclesim

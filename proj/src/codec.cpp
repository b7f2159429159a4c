// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/codec.hpp>
#include <oraclesim/errors.hpp>

namespace oraclesim {

using nlohmann::json;

namespace {

template <typename Blob>
Blob blob_field(const json& j, const char* name)
{
    const auto s = j.at(name).get<std::string>();
    if (s.size() != 64) throw Error(Errc::ParseError, std::string(name) + ": expected 64 hex digits");
    return Blob::from_hex(s);
}

Bytes hex_field(const json& j, const char* name) { return from_hex(j.at(name).get<std::string>()); }

template <typename F>
auto parsing(F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    } catch (const Error& e) {
        // Constructor limits and bad bytes are all input errors here.
        if (e.code() == Errc::ParseError) throw;
        throw Error(Errc::ParseError, std::string(errc_name(e.code())) + ": " + e.what());
    }
}

Signature signature_from_json(const json& j)
{
    return {blob_field<PubKey>(j, "signer"), blob_field<Hash256>(j, "digest"), blob_field<Hash256>(j, "tag")};
}

} // namespace

json lock_to_json(const LockScript& lock)
{
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PayToKey>) {
                return {{"type", "pay_to_key"}, {"key", v.key.hex()}};
            } else if constexpr (std::is_same_v<T, MultiSig>) {
                json keys = json::array();
                for (const auto& k : v.keys) keys.push_back(k.hex());
                return {{"type", "multisig"}, {"required", v.required}, {"keys", keys}};
            } else if constexpr (std::is_same_v<T, ScriptHash>) {
                return {{"type", "script_hash"}, {"digest", v.digest.hex()}};
            } else if constexpr (std::is_same_v<T, DataCarrier>) {
                return {{"type", "data_carrier"}, {"payload", to_hex(v.payload)}};
            } else if constexpr (std::is_same_v<T, TimeLocked>) {
                return {{"type", "time_locked"}, {"unlock_height", v.unlock_height}, {"inner", lock_to_json(*v.inner)}};
            } else if constexpr (std::is_same_v<T, HashLocked>) {
                return {{"type", "hash_locked"}, {"expr_hash", v.expr_hash.hex()}, {"inner", lock_to_json(*v.inner)}};
            } else {
                json branches = json::array();
                for (const auto& b : v.branches) branches.push_back(lock_to_json(b));
                return {{"type", "any_of"}, {"branches", branches}};
            }
        },
        lock.get());
}

LockScript lock_from_json(const json& j)
{
    return parsing([&] {
        const auto type = j.at("type").get<std::string>();
        if (type == "pay_to_key") return LockScript::pay_to_key(blob_field<PubKey>(j, "key"));
        if (type == "multisig") {
            std::vector<PubKey> keys;
            for (const auto& k : j.at("keys")) {
                const auto s = k.get<std::string>();
                if (s.size() != 64) throw Error(Errc::ParseError, "multisig key: expected 64 hex digits");
                keys.push_back(PubKey::from_hex(s));
            }
            return LockScript::multisig(j.at("required").get<std::size_t>(), std::move(keys));
        }
        if (type == "script_hash") return LockScript::script_hash(blob_field<Hash256>(j, "digest"));
        if (type == "data_carrier") return LockScript::data_carrier(hex_field(j, "payload"));
        if (type == "time_locked") return LockScript::time_locked(lock_from_json(j.at("inner")), j.at("unlock_height").get<Height>());
        if (type == "hash_locked") return LockScript::hash_locked(lock_from_json(j.at("inner")), blob_field<Hash256>(j, "expr_hash"));
        if (type == "any_of") {
            std::vector<LockScript> branches;
            for (const auto& b : j.at("branches")) branches.push_back(lock_from_json(b));
            return LockScript::any_of(std::move(branches));
        }
        throw Error(Errc::ParseError, "unknown lock type '" + type + "'");
    });
}

json signature_to_json(const Signature& sig)
{
    return {{"signer", sig.signer.hex()}, {"digest", sig.digest.hex()}, {"tag", sig.tag.hex()}};
}

json tx_to_json(const Transaction& tx)
{
    json inputs = json::array();
    for (const auto& in : tx.inputs) {
        json sigs = json::array();
        for (const auto& s : in.witness.signatures) sigs.push_back(signature_to_json(s));
        json w = {{"signatures", sigs}};
        w["redeem"] = in.witness.redeem ? lock_to_json(*in.witness.redeem) : json();
        w["expr_preimage"] = in.witness.expr_preimage ? json(to_hex(*in.witness.expr_preimage)) : json();
        inputs.push_back({{"txid", in.prevout.txid.hex()}, {"index", in.prevout.index}, {"witness", w}});
    }
    json outputs = json::array();
    for (const auto& out : tx.outputs) outputs.push_back({{"value", out.value}, {"lock", lock_to_json(out.lock)}});
    return {{"txid", tx.txid().hex()}, {"inputs", inputs}, {"outputs", outputs}, {"locktime", tx.locktime}};
}

Transaction tx_from_json(const json& j)
{
    return parsing([&] {
        if (j.contains("hex")) {
            try {
                return Transaction::deserialize(from_hex(j.at("hex").get<std::string>()));
            } catch (const Error& e) {
                throw Error(Errc::ParseError, std::string("tx hex: ") + e.what());
            }
        }
        Transaction tx;
        for (const auto& in : j.at("inputs")) {
            TxIn txin;
            txin.prevout = {blob_field<Txid>(in, "txid"), in.at("index").get<std::uint32_t>()};
            if (in.contains("witness")) {
                const auto& w = in.at("witness");
                if (w.contains("signatures"))
                    for (const auto& s : w.at("signatures")) txin.witness.signatures.push_back(signature_from_json(s));
                if (w.contains("redeem") && !w.at("redeem").is_null()) txin.witness.redeem = lock_from_json(w.at("redeem"));
                if (w.contains("expr_preimage") && !w.at("expr_preimage").is_null()) txin.witness.expr_preimage = hex_field(w, "expr_preimage");
            }
            tx.inputs.push_back(std::move(txin));
        }
        for (const auto& out : j.at("outputs")) tx.outputs.push_back(TxOut{out.at("value").get<Amount>(), lock_from_json(out.at("lock"))});
        tx.locktime = j.value("locktime", Height{0});
        return tx;
    });
}

json message_to_json(const counterparty::MetaMessage& m)
{
    using namespace counterparty;
    json j = {{"kind", std::string(kind_of(m))}};
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Send>) {
                j["asset"] = v.asset;
                j["qty"] = v.qty;
                j["dest"] = v.dest.hex();
            } else if constexpr (std::is_same_v<T, Broadcast>) {
                j["timestamp"] = v.timestamp;
                j["value"] = v.value;
                j["fee_fraction"] = v.fee_fraction;
                j["text"] = v.text;
            } else if constexpr (std::is_same_v<T, Bet>) {
                j["feed"] = v.feed.hex();
                j["cmp"] = std::string(to_string(v.cmp));
                j["target"] = v.target;
                j["deadline"] = v.deadline;
                j["wager"] = v.wager;
                j["counterwager"] = v.counterwager;
                j["side"] = v.side == BetSide::Yes ? "yes" : "no";
            } else {
                j["btc"] = v.btc;
            }
        },
        m);
    return j;
}

} // namespace oraclesim

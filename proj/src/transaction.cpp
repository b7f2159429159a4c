// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/transaction.hpp>
#include <oraclesim/errors.hpp>
#include <oraclesim/hash.hpp>

namespace oraclesim {

namespace {

constexpr std::string_view SIGHASH_TAG = "oraclesim/sighash/v1";
constexpr std::uint32_t MAX_VECTOR = 100'000;

void write_witness(ByteWriter& w, const Witness& wit)
{
    w.u32(static_cast<std::uint32_t>(wit.signatures.size()));
    for (const auto& s : wit.signatures) {
        w.blob(s.signer);
        w.blob(s.digest);
        w.blob(s.tag);
    }
    w.u8(wit.redeem ? 1 : 0);
    if (wit.redeem) wit.redeem->serialize_into(w);
    w.u8(wit.expr_preimage ? 1 : 0);
    if (wit.expr_preimage) w.var_bytes(*wit.expr_preimage);
}

Witness read_witness(ByteReader& r)
{
    Witness wit;
    const auto nsig = r.u32();
    if (nsig > MAX_VECTOR) throw Error(Errc::Malformed, "too many signatures");
    for (std::uint32_t i = 0; i < nsig; ++i) {
        Signature s;
        s.signer = r.blob<PubKeyTag>();
        s.digest = r.blob<HashTag>();
        s.tag = r.blob<HashTag>();
        wit.signatures.push_back(s);
    }
    const auto has_redeem = r.u8();
    if (has_redeem > 1) throw Error(Errc::Malformed, "bad redeem flag");
    if (has_redeem) wit.redeem = LockScript::read_from(r);
    const auto has_pre = r.u8();
    if (has_pre > 1) throw Error(Errc::Malformed, "bad preimage flag");
    if (has_pre) wit.expr_preimage = r.var_bytes();
    return wit;
}

void write_tx(ByteWriter& w, const Transaction& tx, bool with_witness)
{
    w.u32(static_cast<std::uint32_t>(tx.inputs.size()));
    for (const auto& in : tx.inputs) {
        w.blob(in.prevout.txid);
        w.u32(in.prevout.index);
        write_witness(w, with_witness ? in.witness : Witness{});
    }
    w.u32(static_cast<std::uint32_t>(tx.outputs.size()));
    for (const auto& out : tx.outputs) {
        w.i64(out.value);
        out.lock.serialize_into(w);
    }
    w.u64(tx.locktime);
}

} // namespace

Bytes Transaction::serialize() const
{
    ByteWriter w;
    write_tx(w, *this, true);
    return std::move(w).take();
}

Bytes Transaction::serialize_unsigned() const
{
    ByteWriter w;
    write_tx(w, *this, false);
    return std::move(w).take();
}

Transaction Transaction::deserialize(ByteView data)
{
    ByteReader r(data);
    Transaction tx;
    const auto nin = r.u32();
    if (nin > MAX_VECTOR) throw Error(Errc::Malformed, "too many inputs");
    for (std::uint32_t i = 0; i < nin; ++i) {
        TxIn in;
        in.prevout.txid = r.blob<HashTag>();
        in.prevout.index = r.u32();
        in.witness = read_witness(r);
        tx.inputs.push_back(std::move(in));
    }
    const auto nout = r.u32();
    if (nout > MAX_VECTOR) throw Error(Errc::Malformed, "too many outputs");
    for (std::uint32_t i = 0; i < nout; ++i) {
        TxOut out;
        out.value = r.i64();
        out.lock = LockScript::read_from(r);
        tx.outputs.push_back(std::move(out));
    }
    tx.locktime = r.u64();
    if (!r.done()) throw Error(Errc::Malformed, "trailing bytes after transaction");
    return tx;
}

Txid Transaction::txid() const { return sha256(serialize()); }

Hash256 Transaction::sighash(std::size_t input_index) const
{
    if (input_index >= inputs.size()) throw Error(Errc::InvalidArgument, "sighash input index out of range");
    ByteWriter idx;
    idx.u32(static_cast<std::uint32_t>(input_index));
    const auto body = serialize_unsigned();
    return sha256({as_bytes(SIGHASH_TAG), body, idx.data()});
}

Amount Transaction::output_total() const
{
    Amount total = 0;
    for (const auto& o : outputs) {
        if (!money_range(o.value)) throw Error(Errc::InvalidArgument, "output value out of range");
        total += o.value;
        if (!money_range(total)) throw Error(Errc::InvalidArgument, "output total out of range");
    }
    return total;
}

void sign_input(Transaction& tx, std::size_t index, const SecretKey& secret)
{
    const auto digest = tx.sighash(index);
    tx.inputs[index].witness.signatures.push_back(sign(secret, digest));
}

} // namespace oraclesim

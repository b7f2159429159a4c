// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/hash.hpp>
#include <oraclesim/errors.hpp>

#include <openssl/evp.h>

#include <bit>
#include <memory>

namespace oraclesim {

namespace {

struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

} // namespace

Hash256 sha256(std::initializer_list<ByteView> parts)
{
    std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw Error(Errc::InvalidState, "sha256 init failed");
    for (const auto& p : parts) {
        if (!p.empty() && EVP_DigestUpdate(ctx.get(), p.data(), p.size()) != 1)
            throw Error(Errc::InvalidState, "sha256 update failed");
    }
    Hash256 out;
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), out.bytes.data(), &len) != 1 || len != 32)
        throw Error(Errc::InvalidState, "sha256 final failed");
    return out;
}

Hash256 sha256(ByteView data) { return sha256({data}); }

unsigned leading_zero_bits(const Hash256& h)
{
    unsigned n = 0;
    for (auto b : h.bytes) {
        if (b == 0) {
            n += 8;
            continue;
        }
        n += static_cast<unsigned>(std::countl_zero(b));
        break;
    }
    return n;
}

} // namespace oraclesim

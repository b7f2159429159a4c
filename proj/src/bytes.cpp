// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/bytes.hpp>
#include <oraclesim/errors.hpp>

#include <bit>
#include <cstring>

namespace oraclesim {

namespace {

int hex_digit(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::string to_hex(ByteView data)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex)
{
    if (hex.size() % 2 != 0) throw Error(Errc::Malformed, "odd-length hex string");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_digit(hex[i]);
        int lo = hex_digit(hex[i + 1]);
        if (hi < 0 || lo < 0) throw Error(Errc::Malformed, "non-hex character");
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

template <typename Tag>
Blob32<Tag> Blob32<Tag>::from_view(ByteView v)
{
    if (v.size() != 32) throw Error(Errc::Malformed, "expected 32 bytes, got " + std::to_string(v.size()));
    Blob32 out;
    std::memcpy(out.bytes.data(), v.data(), 32);
    return out;
}

template struct Blob32<HashTag>;
template struct Blob32<PubKeyTag>;
template struct Blob32<SecretKeyTag>;

void ByteWriter::u32(std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) m_out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(std::uint64_t v)
{
    for (int i = 0; i < 8; ++i) m_out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::var_bytes(ByteView v)
{
    if (v.size() > UINT32_MAX) throw Error(Errc::InvalidArgument, "byte string too long");
    u32(static_cast<std::uint32_t>(v.size()));
    raw(v);
}

ByteView ByteReader::raw(std::size_t n)
{
    if (remaining() < n) throw Error(Errc::TruncatedPayload, "need " + std::to_string(n) + " bytes, have " + std::to_string(remaining()));
    ByteView out = m_in.subspan(m_pos, n);
    m_pos += n;
    return out;
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint32_t ByteReader::u32()
{
    auto b = raw(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t ByteReader::u64()
{
    auto b = raw(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

Bytes ByteReader::var_bytes()
{
    auto n = u32();
    auto v = raw(n);
    return Bytes(v.begin(), v.end());
}

std::string ByteReader::str()
{
    auto n = u32();
    auto v = raw(n);
    return std::string(v.begin(), v.end());
}

} // namespace oraclesim

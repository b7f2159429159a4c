// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_BYTES_HPP
#define ORACLESIM_BYTES_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace oraclesim {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s)
{
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/** Fixed 32-byte value. The tag keeps digests, keys and secrets apart. */
template <typename Tag>
struct Blob32 {
    std::array<std::uint8_t, 32> bytes{};

    friend auto operator<=>(const Blob32&, const Blob32&) = default;

    ByteView view() const { return {bytes.data(), bytes.size()}; }
    std::string hex() const { return to_hex(view()); }
    bool is_null() const
    {
        for (auto b : bytes)
            if (b != 0) return false;
        return true;
    }

    static Blob32 from_view(ByteView v);
    static Blob32 from_hex(std::string_view h) { return from_view(oraclesim::from_hex(h)); }

    template <typename Other>
    static Blob32 cast(const Blob32<Other>& o)
    {
        Blob32 out;
        out.bytes = o.bytes;
        return out;
    }
};

using Hash256 = Blob32<struct HashTag>;
using PubKey = Blob32<struct PubKeyTag>;
using SecretKey = Blob32<struct SecretKeyTag>;
using Txid = Hash256;

/**
 * Canonical writer: fixed-width little-endian integers and u32
 * length-prefixed byte strings. See FORMATS.md.
 */
class ByteWriter {
public:
    void u8(std::uint8_t v) { m_out.push_back(v); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void f64(double v);
    void raw(ByteView v) { m_out.insert(m_out.end(), v.begin(), v.end()); }
    template <typename Tag>
    void blob(const Blob32<Tag>& b) { raw(b.view()); }
    void var_bytes(ByteView v);
    void str(std::string_view s) { var_bytes(as_bytes(s)); }

    const Bytes& data() const& { return m_out; }
    Bytes take() && { return std::move(m_out); }

private:
    Bytes m_out;
};

/** Reader counterpart; throws Error(TruncatedPayload) on short input. */
class ByteReader {
public:
    explicit ByteReader(ByteView in) : m_in(in) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    double f64();
    ByteView raw(std::size_t n);
    template <typename Tag>
    Blob32<Tag> blob() { return Blob32<Tag>::from_view(raw(32)); }
    Bytes var_bytes();
    std::string str();

    std::size_t remaining() const { return m_in.size() - m_pos; }
    bool done() const { return remaining() == 0; }

private:
    ByteView m_in;
    std::size_t m_pos = 0;
};

} // namespace oraclesim

#endif // ORACLESIM_BYTES_HPP

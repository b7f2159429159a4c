// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_HASH_HPP
#define ORACLESIM_HASH_HPP

#include <oraclesim/bytes.hpp>

#include <initializer_list>

namespace oraclesim {

/** SHA-256. Every digest in the simulator goes through here. */
Hash256 sha256(ByteView data);

/** SHA-256 of the concatenation of the parts. */
Hash256 sha256(std::initializer_list<ByteView> parts);

/** Number of leading zero bits of a digest. */
unsigned leading_zero_bits(const Hash256& h);

} // namespace oraclesim

#endif // ORACLESIM_HASH_HPP

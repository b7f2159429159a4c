// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_CODEC_HPP
#define ORACLESIM_CODEC_HPP

#include <oraclesim/counterparty.hpp>
#include <oraclesim/transaction.hpp>

#include <json.hpp>

namespace oraclesim {

// JSON views of chain objects. Hashes, keys and byte strings are lower-case
// hex; amounts are integers. The shapes are listed in FORMATS.md.

nlohmann::json lock_to_json(const LockScript& lock);
/** Errors: ParseError. */
LockScript lock_from_json(const nlohmann::json& j);

nlohmann::json tx_to_json(const Transaction& tx);
/** Accepts the structured form or {"hex": "<canonical bytes>"}. Errors: ParseError. */
Transaction tx_from_json(const nlohmann::json& j);

nlohmann::json signature_to_json(const Signature& sig);

nlohmann::json message_to_json(const counterparty::MetaMessage& m);

} // namespace oraclesim

#endif // ORACLESIM_CODEC_HPP

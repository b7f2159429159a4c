// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_COUNTERPARTY_HPP
#define ORACLESIM_COUNTERPARTY_HPP

#include <oraclesim/chain.hpp>
#include <oraclesim/datafeed.hpp>
#include <oraclesim/mempool.hpp>
#include <oraclesim/policy.hpp>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace oraclesim::counterparty {

/** XCP base units, 1e8 per XCP. */
using Units = std::int64_t;

inline constexpr std::array<std::uint8_t, 8> MAGIC = {'C', 'N', 'T', 'R', 'P', 'R', 'T', 'Y'};
inline constexpr std::uint64_t ASSET_XCP = 1;
inline constexpr std::uint64_t FEE_FRACTION_ONE = 100'000'000;
inline constexpr Amount DEFAULT_DUST = 7'800;
inline constexpr std::size_t CHUNK_DATA = 31;

enum class Tag : std::uint8_t { Send = 1, Broadcast = 2, Bet = 3, Burn = 4 };

struct Send {
    std::uint64_t asset = ASSET_XCP;
    Units qty = 0;
    PubKey dest;
    friend bool operator==(const Send&, const Send&) = default;
};

struct Broadcast {
    Timestamp timestamp = 0;
    double value = 0.0;
    std::uint64_t fee_fraction = 0; //!< of FEE_FRACTION_ONE
    std::string text;                //!< at most 255 bytes
    friend bool operator==(const Broadcast&, const Broadcast&) = default;
};

enum class BetSide : std::uint8_t { Yes = 0, No = 1 };

/** "value <cmp> target" as seen in the feed's first broadcast at or after the deadline. */
struct Bet {
    PubKey feed;
    Comparator cmp = Comparator::Ge;
    double target = 0.0;
    Timestamp deadline = 0;
    Units wager = 0;
    Units counterwager = 0;
    BetSide side = BetSide::Yes;
    friend bool operator==(const Bet&, const Bet&) = default;
};

struct Burn {
    Amount btc = 0;
    friend bool operator==(const Burn&, const Burn&) = default;
};

using MetaMessage = std::variant<Send, Broadcast, Bet, Burn>;

std::string_view kind_of(const MetaMessage& m);

Bytes encode_body(const MetaMessage& m);
/** Errors: Malformed (unknown tag, trailing bytes), TruncatedPayload. */
MetaMessage decode_body(ByteView body);

/** XOR(MAGIC || body) with `key` repeated. */
Bytes encode_payload(const MetaMessage& m, const Txid& key);
/** Errors: BadMagic, TruncatedPayload, Malformed. */
MetaMessage decode_payload(ByteView payload, const Txid& key);

Bytes xor_stream(ByteView data, const Txid& key);

/**
 * Host outputs carrying a payload. Within the era's data-carrier cap it is
 * one DataCarrier output; beyond it, 1-of-N multisig outputs whose extra
 * "keys" are 32-byte chunks (length byte then 31 data bytes), two per output.
 */
std::vector<TxOut> embed_payload(const Bytes& payload, const PubKey& sender, const StandardnessPolicy& policy,
                                 Amount dust = DEFAULT_DUST);

/** Payload bytes carried by a host tx, if any: its first data carrier, else its chunked multisig outputs. */
std::optional<Bytes> extract_payload(const Transaction& tx);

struct Config {
    PubKey burn_pub;           //!< unspendable: nobody holds its secret
    std::int64_t burn_rate = 1'000; //!< XCP per BTC
};

Config default_config();

/**
 * Build and sign a host transaction from `sender` carrying `msg`, with
 * `extra` outputs in front (a burn payment, say). The XOR key is the txid
 * of the first input's prevout, chosen before the payload is encoded.
 */
Transaction build_message_tx(const Chain& chain, const KeyPair& sender, const MetaMessage& msg, const StandardnessPolicy& policy,
                             Amount fee, std::vector<TxOut> extra = {}, const Mempool* pool = nullptr);

/** Host supply net of coins sitting at the burn address. */
Amount circulating_supply(const Chain& chain, const Config& cfg);

struct BroadcastRecord {
    Timestamp timestamp = 0;
    double value = 0.0;
    std::uint64_t fee_fraction = 0;
    std::string text;
    Txid txid;
};

enum class BetState { Open, Matched, Settled, Refunded };
std::string_view to_string(BetState s);

struct BetRecord {
    Txid txid;
    PubKey bettor;
    Bet bet;
    std::uint64_t fee_fraction = 0; //!< locked from the feed's latest broadcast at placement
    BetState state = BetState::Open;
    std::optional<Txid> counterparty;
    Units payout = 0;
};

struct LogEntry {
    Height height = 0;
    std::size_t index = 0;
    Txid txid;
    std::string kind;
    bool valid = false;
    std::string reason;
};

/** Replicated meta-state: a pure fold over the host chain. */
struct MetaState {
    std::map<PubKey, Units> balances;
    std::map<PubKey, std::vector<BroadcastRecord>> feeds;
    std::vector<BetRecord> bets;
    std::vector<LogEntry> log;
    Units issued = 0;
    Amount burned_btc = 0;
    Height height = 0;

    Units balance(const PubKey& who) const;
    Units escrowed() const;
    Units circulating() const; //!< Σ balances + Σ open escrows

    /** Canonical JSON (sorted keys). */
    std::string to_json() const;
    Hash256 digest() const;
};

/** Apply one host block in transaction-index order. */
void apply_block(MetaState& state, const Chain& chain, const Block& block, const Config& cfg);

/** Fold every block from height 1 to the tip. */
MetaState replay(const Chain& chain, const Config& cfg);

struct FeedRating {
    PubKey feed;
    std::string rater;
    int stars = 0;
    std::string comment;
};

/** Off-consensus rating log. Never touches MetaState. */
class RatingBook {
public:
    /** Errors: BadStars (outside 1..5). */
    const FeedRating& rate(const PubKey& feed, std::string rater, int stars, std::string comment);
    std::optional<double> average(const PubKey& feed) const;
    const std::vector<FeedRating>& all() const { return m_ratings; }

private:
    std::vector<FeedRating> m_ratings;
};

} // namespace oraclesim::counterparty

#endif // ORACLESIM_COUNTERPARTY_HPP

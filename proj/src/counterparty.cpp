// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/counterparty.hpp>
#include <oraclesim/errors.hpp>
#include <oraclesim/hash.hpp>
#include <oraclesim/wallet.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace oraclesim::counterparty {

namespace {

__extension__ typedef unsigned __int128 u128;

std::uint8_t comparator_code(Comparator c) { return static_cast<std::uint8_t>(c); }

Comparator comparator_from(std::uint8_t c)
{
    if (c > static_cast<std::uint8_t>(Comparator::IsTrue)) throw Error(Errc::Malformed, "bad comparator code");
    return static_cast<Comparator>(c);
}

Units read_qty(ByteReader& r)
{
    const auto v = r.u64();
    if (v > static_cast<std::uint64_t>(INT64_MAX)) throw Error(Errc::Malformed, "quantity out of range");
    return static_cast<Units>(v);
}

} // namespace

std::string_view kind_of(const MetaMessage& m)
{
    switch (m.index()) {
    case 0: return "send";
    case 1: return "broadcast";
    case 2: return "bet";
    default: return "burn";
    }
}

Bytes encode_body(const MetaMessage& m)
{
    ByteWriter w;
    if (const auto* s = std::get_if<Send>(&m)) {
        if (s->qty < 0) throw Error(Errc::InvalidArgument, "negative quantity");
        w.u8(static_cast<std::uint8_t>(Tag::Send));
        w.u64(s->asset);
        w.u64(static_cast<std::uint64_t>(s->qty));
        w.blob(s->dest);
    } else if (const auto* b = std::get_if<Broadcast>(&m)) {
        if (b->text.size() > 255) throw Error(Errc::InvalidArgument, "broadcast text over 255 bytes");
        w.u8(static_cast<std::uint8_t>(Tag::Broadcast));
        w.i64(b->timestamp);
        w.f64(b->value);
        w.u64(b->fee_fraction);
        w.u8(static_cast<std::uint8_t>(b->text.size()));
        w.raw(as_bytes(b->text));
    } else if (const auto* bet = std::get_if<Bet>(&m)) {
        if (bet->wager < 0 || bet->counterwager < 0) throw Error(Errc::InvalidArgument, "negative quantity");
        w.u8(static_cast<std::uint8_t>(Tag::Bet));
        w.blob(bet->feed);
        w.u8(comparator_code(bet->cmp));
        w.f64(bet->target);
        w.i64(bet->deadline);
        w.u64(static_cast<std::uint64_t>(bet->wager));
        w.u64(static_cast<std::uint64_t>(bet->counterwager));
        w.u8(static_cast<std::uint8_t>(bet->side));
    } else {
        const auto& burn = std::get<Burn>(m);
        if (burn.btc < 0) throw Error(Errc::InvalidArgument, "negative quantity");
        w.u8(static_cast<std::uint8_t>(Tag::Burn));
        w.u64(static_cast<std::uint64_t>(burn.btc));
    }
    return std::move(w).take();
}

MetaMessage decode_body(ByteView body)
{
    ByteReader r(body);
    MetaMessage out;
    switch (r.u8()) {
    case static_cast<std::uint8_t>(Tag::Send): {
        Send s;
        s.asset = r.u64();
        s.qty = read_qty(r);
        s.dest = r.blob<PubKeyTag>();
        out = s;
        break;
    }
    case static_cast<std::uint8_t>(Tag::Broadcast): {
        Broadcast b;
        b.timestamp = r.i64();
        b.value = r.f64();
        b.fee_fraction = r.u64();
        const auto n = r.u8();
        const auto t = r.raw(n);
        b.text.assign(t.begin(), t.end());
        out = b;
        break;
    }
    case static_cast<std::uint8_t>(Tag::Bet): {
        Bet b;
        b.feed = r.blob<PubKeyTag>();
        b.cmp = comparator_from(r.u8());
        b.target = r.f64();
        b.deadline = r.i64();
        b.wager = read_qty(r);
        b.counterwager = read_qty(r);
        const auto side = r.u8();
        if (side > 1) throw Error(Errc::Malformed, "bad bet side");
        b.side = static_cast<BetSide>(side);
        out = b;
        break;
    }
    case static_cast<std::uint8_t>(Tag::Burn): {
        Burn b;
        b.btc = read_qty(r);
        out = b;
        break;
    }
    default:
        throw Error(Errc::Malformed, "unknown message tag");
    }
    if (!r.done()) throw Error(Errc::Malformed, "trailing bytes after message");
    return out;
}

Bytes xor_stream(ByteView data, const Txid& key)
{
    Bytes out(data.begin(), data.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= key.bytes[i % key.bytes.size()];
    return out;
}

Bytes encode_payload(const MetaMessage& m, const Txid& key)
{
    Bytes plain(MAGIC.begin(), MAGIC.end());
    const auto body = encode_body(m);
    plain.insert(plain.end(), body.begin(), body.end());
    return xor_stream(plain, key);
}

MetaMessage decode_payload(ByteView payload, const Txid& key)
{
    if (payload.size() < MAGIC.size()) throw Error(Errc::TruncatedPayload, "payload shorter than magic");
    const auto plain = xor_stream(payload, key);
    if (!std::equal(MAGIC.begin(), MAGIC.end(), plain.begin())) throw Error(Errc::BadMagic, "magic prefix mismatch");
    return decode_body(ByteView(plain).subspan(MAGIC.size()));
}

std::vector<TxOut> embed_payload(const Bytes& payload, const PubKey& sender, const StandardnessPolicy& policy, Amount dust)
{
    if (payload.size() <= policy.max_data_payload) return {TxOut{0, LockScript::data_carrier(payload)}};

    std::vector<PubKey> chunks;
    for (std::size_t off = 0; off < payload.size(); off += CHUNK_DATA) {
        const auto n = std::min(CHUNK_DATA, payload.size() - off);
        PubKey k;
        k.bytes[0] = static_cast<std::uint8_t>(n);
        std::copy_n(payload.begin() + static_cast<std::ptrdiff_t>(off), n, k.bytes.begin() + 1);
        chunks.push_back(k);
    }
    std::vector<TxOut> out;
    for (std::size_t i = 0; i < chunks.size(); i += 2) {
        std::vector<PubKey> keys{sender, chunks[i]};
        if (i + 1 < chunks.size()) keys.push_back(chunks[i + 1]);
        out.push_back(TxOut{dust, LockScript::multisig(1, std::move(keys))});
    }
    return out;
}

std::optional<Bytes> extract_payload(const Transaction& tx)
{
    for (const auto& o : tx.outputs)
        if (const auto* dc = o.lock.as<DataCarrier>(); dc && !dc->payload.empty()) return dc->payload;

    Bytes out;
    bool any = false;
    for (const auto& o : tx.outputs) {
        const auto* ms = o.lock.as<MultiSig>();
        if (!ms || ms->required != 1 || ms->keys.size() < 2 || ms->keys.size() > 3) continue;
        for (std::size_t i = 1; i < ms->keys.size(); ++i) {
            const auto& k = ms->keys[i];
            const std::size_t n = k.bytes[0];
            if (n == 0 || n > CHUNK_DATA) continue;
            out.insert(out.end(), k.bytes.begin() + 1, k.bytes.begin() + 1 + static_cast<std::ptrdiff_t>(n));
            any = true;
        }
    }
    if (!any) return std::nullopt;
    return out;
}

Config default_config()
{
    Config c;
    c.burn_pub = PubKey::cast(sha256(as_bytes("oraclesim/counterparty/burn: no known preimage")));
    return c;
}

Transaction build_message_tx(const Chain& chain, const KeyPair& sender, const MetaMessage& msg, const StandardnessPolicy& policy,
                             Amount fee, std::vector<TxOut> extra, const Mempool* pool)
{
    if (fee < 0) throw Error(Errc::InvalidArgument, "negative fee");
    // Output layout depends only on payload length, so size it with a zero key first.
    const auto sizing = embed_payload(encode_payload(msg, Txid{}), sender.pub, policy);
    Amount needed = fee;
    for (const auto& o : extra) needed += o.value;
    for (const auto& o : sizing) needed += o.value;

    Transaction tx;
    Amount gathered = 0;
    for (const auto& [op, coin] : spendable_coins(chain, sender.pub, pool)) {
        if (gathered >= needed && !tx.inputs.empty()) break;
        tx.inputs.push_back(TxIn{op, {}});
        gathered += coin.out.value;
    }
    if (tx.inputs.empty() || gathered < needed)
        throw Error(Errc::InsufficientFunds, "need " + std::to_string(needed) + ", have " + std::to_string(gathered));

    tx.outputs = std::move(extra);
    for (auto& o : embed_payload(encode_payload(msg, tx.inputs[0].prevout.txid), sender.pub, policy)) tx.outputs.push_back(std::move(o));
    if (gathered > needed) tx.outputs.push_back(TxOut{gathered - needed, LockScript::pay_to_key(sender.pub)});
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) sign_input(tx, i, sender.secret);
    return tx;
}

Amount circulating_supply(const Chain& chain, const Config& cfg)
{
    Amount burned = 0;
    for (const auto& [op, coin] : chain.utxos().coins()) {
        const auto* p2k = coin.out.lock.as<PayToKey>();
        if (p2k && p2k->key == cfg.burn_pub) burned += coin.out.value;
    }
    return chain.supply() - burned;
}

std::string_view to_string(BetState s)
{
    switch (s) {
    case BetState::Open: return "Open";
    case BetState::Matched: return "Matched";
    case BetState::Settled: return "Settled";
    case BetState::Refunded: return "Refunded";
    }
    return "?";
}

Units MetaState::balance(const PubKey& who) const
{
    auto it = balances.find(who);
    return it == balances.end() ? 0 : it->second;
}

Units MetaState::escrowed() const
{
    Units t = 0;
    for (const auto& b : bets)
        if (b.state == BetState::Open || b.state == BetState::Matched) t += b.bet.wager;
    return t;
}

Units MetaState::circulating() const
{
    Units t = escrowed();
    for (const auto& [k, v] : balances) t += v;
    return t;
}

std::string MetaState::to_json() const
{
    using nlohmann::json;
    json j;
    j["height"] = height;
    j["issued"] = issued;
    j["burned_btc"] = burned_btc;
    json bal = json::object();
    for (const auto& [k, v] : balances) bal[k.hex()] = v;
    j["balances"] = bal;
    json feeds_j = json::object();
    for (const auto& [k, list] : feeds) {
        json arr = json::array();
        for (const auto& b : list)
            arr.push_back({{"timestamp", b.timestamp}, {"value", b.value}, {"fee_fraction", b.fee_fraction}, {"text", b.text}, {"txid", b.txid.hex()}});
        feeds_j[k.hex()] = arr;
    }
    j["feeds"] = feeds_j;
    json bets_j = json::array();
    for (const auto& b : bets) {
        bets_j.push_back({{"txid", b.txid.hex()},
                          {"bettor", b.bettor.hex()},
                          {"feed", b.bet.feed.hex()},
                          {"cmp", to_string(b.bet.cmp)},
                          {"target", b.bet.target},
                          {"deadline", b.bet.deadline},
                          {"wager", b.bet.wager},
                          {"counterwager", b.bet.counterwager},
                          {"side", b.bet.side == BetSide::Yes ? "yes" : "no"},
                          {"fee_fraction", b.fee_fraction},
                          {"state", to_string(b.state)},
                          {"counterparty", b.counterparty ? json(b.counterparty->hex()) : json()},
                          {"payout", b.payout}});
    }
    j["bets"] = bets_j;
    json log_j = json::array();
    for (const auto& e : log)
        log_j.push_back({{"height", e.height}, {"index", e.index}, {"txid", e.txid.hex()}, {"kind", e.kind}, {"valid", e.valid}, {"reason", e.reason}});
    j["log"] = log_j;
    return j.dump();
}

Hash256 MetaState::digest() const { return sha256(as_bytes(to_json())); }

namespace {

struct Ctx {
    MetaState& st;
    const Config& cfg;
    const Transaction& tx;
    const Txid& txid;
    const PubKey& sender;
};

std::string fail_reason(Errc c) { return std::string(errc_name(c)); }

void settle_feed(MetaState& st, const PubKey& feed, const BroadcastRecord& b)
{
    for (auto& bet : st.bets) {
        if (bet.bet.feed != feed || bet.bet.deadline > b.timestamp) continue;
        if (bet.state == BetState::Open) {
            st.balances[bet.bettor] += bet.bet.wager;
            bet.state = BetState::Refunded;
            bet.payout = bet.bet.wager;
            continue;
        }
        if (bet.state != BetState::Matched) continue;
        auto other = std::find_if(st.bets.begin(), st.bets.end(), [&](const BetRecord& r) { return r.txid == *bet.counterparty; });
        if (other == st.bets.end()) continue;
        // The maker (the earlier bet) fixes the fee fraction.
        BetRecord& maker = (&*other < &bet) ? *other : bet;
        const bool holds = compare(FeedValue{b.value}, bet.bet.cmp, bet.bet.target);
        BetRecord& winner = (bet.bet.side == BetSide::Yes) == holds ? bet : *other;
        BetRecord& loser = &winner == &bet ? *other : bet;
        const Units total = bet.bet.wager + other->bet.wager;
        const auto fee = static_cast<Units>(static_cast<u128>(total) * maker.fee_fraction / FEE_FRACTION_ONE);
        winner.payout = total - fee;
        loser.payout = 0;
        st.balances[winner.bettor] += total - fee;
        if (fee > 0) st.balances[feed] += fee;
        bet.state = BetState::Settled;
        other->state = BetState::Settled;
    }
}

std::optional<Errc> apply_send(Ctx& c, const Send& s)
{
    if (s.asset != ASSET_XCP || s.qty <= 0) return Errc::InvalidArgument;
    if (c.st.balance(c.sender) < s.qty) return Errc::InsufficientFunds;
    c.st.balances[c.sender] -= s.qty;
    c.st.balances[s.dest] += s.qty;
    return std::nullopt;
}

std::optional<Errc> apply_broadcast(Ctx& c, const Broadcast& b)
{
    if (b.fee_fraction > FEE_FRACTION_ONE || !std::isfinite(b.value)) return Errc::InvalidArgument;
    auto& list = c.st.feeds[c.sender];
    if (!list.empty() && b.timestamp <= list.back().timestamp) return Errc::StaleBroadcast;
    list.push_back(BroadcastRecord{b.timestamp, b.value, b.fee_fraction, b.text, c.txid});
    settle_feed(c.st, c.sender, list.back());
    return std::nullopt;
}

std::optional<Errc> apply_bet(Ctx& c, const Bet& b)
{
    if (b.wager <= 0 || b.counterwager <= 0 || !std::isfinite(b.target)) return Errc::InvalidArgument;
    auto f = c.st.feeds.find(b.feed);
    if (f == c.st.feeds.end() || f->second.empty()) return Errc::NoBroadcastYet;
    if (b.deadline <= f->second.back().timestamp) return Errc::StaleBroadcast;
    if (c.st.balance(c.sender) < b.wager) return Errc::InsufficientFunds;

    c.st.balances[c.sender] -= b.wager;
    BetRecord rec{c.txid, c.sender, b, f->second.back().fee_fraction, BetState::Open, std::nullopt, 0};
    for (auto& other : c.st.bets) {
        if (other.state != BetState::Open) continue;
        const auto& o = other.bet;
        if (o.feed == b.feed && o.cmp == b.cmp && o.target == b.target && o.deadline == b.deadline && o.side != b.side &&
            o.wager == b.counterwager && o.counterwager == b.wager) {
            other.state = BetState::Matched;
            other.counterparty = c.txid;
            rec.state = BetState::Matched;
            rec.counterparty = other.txid;
            break;
        }
    }
    c.st.bets.push_back(std::move(rec));
    return std::nullopt;
}

std::optional<Errc> apply_burn(Ctx& c, const Burn& b)
{
    if (b.btc <= 0) return Errc::InvalidArgument;
    Amount paid = 0;
    for (const auto& o : c.tx.outputs) {
        const auto* p2k = o.lock.as<PayToKey>();
        if (p2k && p2k->key == c.cfg.burn_pub) paid += o.value;
    }
    if (paid != b.btc) return Errc::WrongBurnAddress;
    const Units xcp = b.btc * c.cfg.burn_rate;
    c.st.balances[c.sender] += xcp;
    c.st.issued += xcp;
    c.st.burned_btc += b.btc;
    return std::nullopt;
}

} // namespace

void apply_block(MetaState& st, const Chain& chain, const Block& block, const Config& cfg)
{
    for (std::size_t i = 0; i < block.txs.size(); ++i) {
        const auto& tx = block.txs[i];
        if (tx.inputs.empty()) continue;
        const auto payload = extract_payload(tx);
        // Too short to carry the magic, so not ours either.
        if (!payload || payload->size() < MAGIC.size()) continue;

        LogEntry e;
        e.height = block.height;
        e.index = i;
        e.txid = tx.txid();
        MetaMessage msg;
        try {
            msg = decode_payload(*payload, tx.inputs[0].prevout.txid);
        } catch (const Error& err) {
            // Someone else's data; only log payloads that at least carry our magic.
            if (err.code() == Errc::BadMagic) continue;
            e.kind = "undecodable";
            e.reason = fail_reason(err.code());
            st.log.push_back(std::move(e));
            continue;
        }
        e.kind = std::string(kind_of(msg));

        const TxOut* prev = chain.find_output(tx.inputs[0].prevout);
        const auto* owner = prev ? prev->lock.as<PayToKey>() : nullptr;
        if (!owner) {
            e.reason = "NoSender";
            st.log.push_back(std::move(e));
            continue;
        }
        Ctx c{st, cfg, tx, e.txid, owner->key};
        std::optional<Errc> err;
        if (const auto* s = std::get_if<Send>(&msg))
            err = apply_send(c, *s);
        else if (const auto* b = std::get_if<Broadcast>(&msg))
            err = apply_broadcast(c, *b);
        else if (const auto* bet = std::get_if<Bet>(&msg))
            err = apply_bet(c, *bet);
        else
            err = apply_burn(c, std::get<Burn>(msg));
        e.valid = !err;
        if (err) e.reason = fail_reason(*err);
        st.log.push_back(std::move(e));
    }
    st.height = block.height;
}

MetaState replay(const Chain& chain, const Config& cfg)
{
    MetaState st;
    for (const auto& b : chain.blocks())
        if (b.height > 0) apply_block(st, chain, b, cfg);
    return st;
}

const FeedRating& RatingBook::rate(const PubKey& feed, std::string rater, int stars, std::string comment)
{
    if (stars < 1 || stars > 5) throw Error(Errc::BadStars, "stars must be 1..5");
    return m_ratings.emplace_back(FeedRating{feed, std::move(rater), stars, std::move(comment)});
}

std::optional<double> RatingBook::average(const PubKey& feed) const
{
    int n = 0, total = 0;
    for (const auto& r : m_ratings)
        if (r.feed == feed) {
            ++n;
            total += r.stars;
        }
    if (n == 0) return std::nullopt;
    return static_cast<double>(total) / n;
}

} // namespace oraclesim::counterparty

// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_MEMPOOL_HPP
#define ORACLESIM_MEMPOOL_HPP

#include <oraclesim/chain.hpp>
#include <oraclesim/policy.hpp>

#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace oraclesim {

inline constexpr Height DEFAULT_EXPIRY_BLOCKS = 100;

enum class SubmitStatus {
    Accepted,
    Invalid,   //!< failed consensus validation against the confirmed UTXO set
    Duplicate, //!< same txid already pooled or confirmed
    Conflict,  //!< spends an outpoint another pooled tx already spends
};

std::string_view to_string(SubmitStatus s);

struct SubmitResult {
    SubmitStatus status = SubmitStatus::Invalid;
    std::optional<TxError> reason;
    std::string detail;
    Txid txid;
    bool standard = false;

    bool accepted() const { return status == SubmitStatus::Accepted; }
};

struct MempoolEntry {
    Transaction tx;
    Txid txid;
    Classification classification;
    Height arrival = 0; //!< chain tip height at submission
    Amount fee = 0;
    std::size_t size = 0;
};

/**
 * Admission is gated only by validity; standardness is recorded on the entry
 * and consulted by miners. Entries older than the expiry horizon are dropped.
 * Only confirmed outputs may be spent (no unconfirmed chains).
 */
class Mempool {
public:
    explicit Mempool(StandardnessPolicy policy, Height expiry_blocks = DEFAULT_EXPIRY_BLOCKS)
        : m_policy(policy), m_expiry(expiry_blocks)
    {
    }

    SubmitResult submit(const Chain& chain, Transaction tx);

    /** Drop entries with tip - arrival >= expiry_blocks. */
    std::vector<Txid> expire(Height tip);

    /** Remove confirmed txs and anything the new tip invalidates. */
    void remove_for_block(const Chain& chain, const Block& block);

    bool contains(const Txid& txid) const { return m_entries.contains(txid); }
    bool spends(const OutPoint& op) const { return m_spent.contains(op); }
    const MempoolEntry* find(const Txid& txid) const;
    const std::map<Txid, MempoolEntry>& entries() const { return m_entries; }
    std::size_t size() const { return m_entries.size(); }

    const StandardnessPolicy& policy() const { return m_policy; }
    Height expiry_blocks() const { return m_expiry; }

private:
    void erase(const Txid& txid);

    StandardnessPolicy m_policy;
    Height m_expiry;
    std::map<Txid, MempoolEntry> m_entries;
    std::map<OutPoint, Txid> m_spent;
};

} // namespace oraclesim

#endif // ORACLESIM_MEMPOOL_HPP

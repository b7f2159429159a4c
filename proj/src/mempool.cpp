// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/mempool.hpp>

namespace oraclesim {

std::string_view to_string(SubmitStatus s)
{
    switch (s) {
    case SubmitStatus::Accepted: return "accepted";
    case SubmitStatus::Invalid: return "invalid";
    case SubmitStatus::Duplicate: return "duplicate";
    case SubmitStatus::Conflict: return "conflict";
    }
    return "?";
}

SubmitResult Mempool::submit(const Chain& chain, Transaction tx)
{
    SubmitResult res;
    res.txid = tx.txid();
    if (m_entries.contains(res.txid) || chain.is_confirmed(res.txid)) {
        res.status = SubmitStatus::Duplicate;
        return res;
    }
    for (const auto& in : tx.inputs) {
        if (auto it = m_spent.find(in.prevout); it != m_spent.end()) {
            res.status = SubmitStatus::Conflict;
            res.detail = "conflicts with " + it->second.hex();
            return res;
        }
    }
    auto v = chain.check(tx);
    if (!v.valid()) {
        res.status = SubmitStatus::Invalid;
        res.reason = v.error;
        res.detail = v.detail;
        return res;
    }

    MempoolEntry e;
    e.classification = classify(tx, m_policy);
    e.txid = res.txid;
    e.arrival = chain.height();
    e.fee = v.fee;
    e.size = tx.size();
    e.tx = std::move(tx);
    for (const auto& in : e.tx.inputs) m_spent.emplace(in.prevout, e.txid);
    res.standard = e.classification.standard();
    res.status = SubmitStatus::Accepted;
    m_entries.emplace(e.txid, std::move(e));
    return res;
}

const MempoolEntry* Mempool::find(const Txid& txid) const
{
    auto it = m_entries.find(txid);
    return it == m_entries.end() ? nullptr : &it->second;
}

void Mempool::erase(const Txid& txid)
{
    auto it = m_entries.find(txid);
    if (it == m_entries.end()) return;
    for (const auto& in : it->second.tx.inputs) m_spent.erase(in.prevout);
    m_entries.erase(it);
}

std::vector<Txid> Mempool::expire(Height tip)
{
    std::vector<Txid> dropped;
    for (const auto& [txid, e] : m_entries)
        if (tip - e.arrival >= m_expiry) dropped.push_back(txid);
    for (const auto& t : dropped) erase(t);
    return dropped;
}

void Mempool::remove_for_block(const Chain& chain, const Block& block)
{
    for (const auto& tx : block.txs) erase(tx.txid());
    std::vector<Txid> stale;
    for (const auto& [txid, e] : m_entries) {
        for (const auto& in : e.tx.inputs) {
            if (!chain.utxos().find(in.prevout)) {
                stale.push_back(txid);
                break;
            }
        }
    }
    for (const auto& t : stale) erase(t);
}

} // namespace oraclesim

// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_POLICY_HPP
#define ORACLESIM_POLICY_HPP

#include <oraclesim/transaction.hpp>

#include <optional>
#include <string_view>

namespace oraclesim {

/** Relay-policy eras for data-carrier outputs. */
enum class PolicyEra {
    Test2013, //!< pre-release testing builds, 80-byte payloads relayed
    V090,     //!< v0.9.0 release, payload cut to 40 bytes
};

std::string_view to_string(PolicyEra era);
std::optional<PolicyEra> parse_era(std::string_view s);

struct StandardnessPolicy {
    PolicyEra era = PolicyEra::V090;
    std::size_t max_data_payload = 40;
    std::size_t max_standard_multisig_keys = 3;

    static StandardnessPolicy for_era(PolicyEra era);
};

enum class NonStandardReason {
    DataPayloadTooLarge,
    TooManyMultisigKeys,
    NonTemplateOutput,
    NonTemplateRedeem,
};

std::string_view to_string(NonStandardReason r);

struct Classification {
    std::optional<NonStandardReason> reason;
    bool standard() const { return !reason; }
};

/**
 * Standardness of a transaction under a relay policy. Pure function of the
 * transaction bytes and the policy; never consulted by validation.
 *
 * Bare outputs must be PayToKey, MultiSig with at most 3 keys, ScriptHash,
 * or DataCarrier within the payload cap. Redeem scripts revealed in
 * witnesses may nest timelocks, hash locks and disjunctions, but any
 * multisig inside them is still capped at 3 keys.
 */
Classification classify(const Transaction& tx, const StandardnessPolicy& policy);

} // namespace oraclesim

#endif // ORACLESIM_POLICY_HPP

// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/policy.hpp>

namespace oraclesim {

std::string_view to_string(PolicyEra era)
{
    switch (era) {
    case PolicyEra::Test2013: return "test2013";
    case PolicyEra::V090: return "v090";
    }
    return "?";
}

std::optional<PolicyEra> parse_era(std::string_view s)
{
    if (s == "test2013") return PolicyEra::Test2013;
    if (s == "v090") return PolicyEra::V090;
    return std::nullopt;
}

StandardnessPolicy StandardnessPolicy::for_era(PolicyEra era)
{
    StandardnessPolicy p;
    p.era = era;
    p.max_data_payload = era == PolicyEra::Test2013 ? 80 : 40;
    p.max_standard_multisig_keys = 3;
    return p;
}

std::string_view to_string(NonStandardReason r)
{
    switch (r) {
    case NonStandardReason::DataPayloadTooLarge: return "data-payload-too-large";
    case NonStandardReason::TooManyMultisigKeys: return "multisig-too-many-keys";
    case NonStandardReason::NonTemplateOutput: return "non-template-output";
    case NonStandardReason::NonTemplateRedeem: return "non-template-redeem";
    }
    return "?";
}

namespace {

std::optional<NonStandardReason> check_output(const LockScript& lock, const StandardnessPolicy& policy)
{
    if (const auto* ms = lock.as<MultiSig>()) {
        if (ms->keys.size() > policy.max_standard_multisig_keys) return NonStandardReason::TooManyMultisigKeys;
        return std::nullopt;
    }
    if (const auto* dc = lock.as<DataCarrier>()) {
        if (dc->payload.size() > policy.max_data_payload) return NonStandardReason::DataPayloadTooLarge;
        return std::nullopt;
    }
    if (lock.is<PayToKey>() || lock.is<ScriptHash>()) return std::nullopt;
    return NonStandardReason::NonTemplateOutput;
}

std::optional<NonStandardReason> check_redeem(const LockScript& lock, const StandardnessPolicy& policy)
{
    if (const auto* ms = lock.as<MultiSig>()) {
        if (ms->keys.size() > policy.max_standard_multisig_keys) return NonStandardReason::TooManyMultisigKeys;
        return std::nullopt;
    }
    if (lock.is<PayToKey>()) return std::nullopt;
    if (const auto* tl = lock.as<TimeLocked>()) return check_redeem(*tl->inner, policy);
    if (const auto* hl = lock.as<HashLocked>()) return check_redeem(*hl->inner, policy);
    if (const auto* any = lock.as<AnyOf>()) {
        for (const auto& b : any->branches)
            if (auto r = check_redeem(b, policy)) return r;
        return std::nullopt;
    }
    return NonStandardReason::NonTemplateRedeem;
}

} // namespace

Classification classify(const Transaction& tx, const StandardnessPolicy& policy)
{
    for (const auto& out : tx.outputs)
        if (auto r = check_output(out.lock, policy)) return {r};
    for (const auto& in : tx.inputs)
        if (in.witness.redeem)
            if (auto r = check_redeem(*in.witness.redeem, policy)) return {r};
    return {};
}

} // namespace oraclesim

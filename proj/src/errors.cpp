// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/errors.hpp>

namespace oraclesim {

std::string_view errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Malformed: return "Malformed";
    case Errc::TruncatedPayload: return "TruncatedPayload";
    case Errc::ParseError: return "ParseError";
    case Errc::AssertionFailed: return "AssertionFailed";
    case Errc::Io: return "Io";
    case Errc::InvalidState: return "InvalidState";
    case Errc::InvalidSeed: return "InvalidSeed";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::InsufficientFunds: return "InsufficientFunds";
    case Errc::NoMiners: return "NoMiners";
    case Errc::BadMinerTable: return "BadMinerTable";
    case Errc::BadWitness: return "BadWitness";
    case Errc::AlreadySpent: return "AlreadySpent";
    case Errc::NoData: return "NoData";
    case Errc::UnknownSource: return "UnknownSource";
    case Errc::HashMismatch: return "HashMismatch";
    case Errc::ConditionFalse: return "ConditionFalse";
    case Errc::BadExpression: return "BadExpression";
    case Errc::PastResolution: return "PastResolution";
    case Errc::TooEarly: return "TooEarly";
    case Errc::TipTooSmall: return "TipTooSmall";
    case Errc::WindowClosed: return "WindowClosed";
    case Errc::ReconstructionMismatch: return "ReconstructionMismatch";
    case Errc::WrongBranch: return "WrongBranch";
    case Errc::NotFinalized: return "NotFinalized";
    case Errc::UnknownFact: return "UnknownFact";
    case Errc::KeyLimitExceeded: return "KeyLimitExceeded";
    case Errc::BadQuorum: return "BadQuorum";
    case Errc::NotAllAcked: return "NotAllAcked";
    case Errc::VerificationFailed: return "VerificationFailed";
    case Errc::InvalidPoW: return "InvalidPoW";
    case Errc::QuorumNotReached: return "QuorumNotReached";
    case Errc::InsufficientCSH: return "InsufficientCSH";
    case Errc::InsufficientShares: return "InsufficientShares";
    case Errc::InsufficientVTC: return "InsufficientVTC";
    case Errc::PastMaturity: return "PastMaturity";
    case Errc::UnknownDecision: return "UnknownDecision";
    case Errc::UnknownMarket: return "UnknownMarket";
    case Errc::CommitClosed: return "CommitClosed";
    case Errc::RevealMismatch: return "RevealMismatch";
    case Errc::RevealOpen: return "RevealOpen";
    case Errc::RevealClosed: return "RevealClosed";
    case Errc::WindowOpen: return "WindowOpen";
    case Errc::NotConfirmed: return "NotConfirmed";
    case Errc::BadScalarRange: return "BadScalarRange";
    case Errc::UnknownBallot: return "UnknownBallot";
    case Errc::BadMagic: return "BadMagic";
    case Errc::WrongBurnAddress: return "WrongBurnAddress";
    case Errc::StaleBroadcast: return "StaleBroadcast";
    case Errc::NoBroadcastYet: return "NoBroadcastYet";
    case Errc::BadStars: return "BadStars";
    case Errc::OverlappingConditions: return "OverlappingConditions";
    case Errc::NonSSLSource: return "NonSSLSource";
    case Errc::EmptyTimeframe: return "EmptyTimeframe";
    case Errc::ProofInvalid: return "ProofInvalid";
    case Errc::AlreadySettled: return "AlreadySettled";
    case Errc::BadPollTime: return "BadPollTime";
    }
    return "Unknown";
}

} // namespace oraclesim

// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_ERRORS_HPP
#define ORACLESIM_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace oraclesim {

// Numeric values are part of the C ABI (see oraclesim.h). Append only.
enum class Errc : int {
    InvalidArgument = 1,
    Malformed = 2,
    TruncatedPayload = 3,
    ParseError = 4,
    AssertionFailed = 5,
    Io = 6,
    InvalidState = 7,

    // simchain
    InvalidSeed = 10,
    UnknownKey = 11,
    InsufficientFunds = 12,
    NoMiners = 13,
    BadMinerTable = 14,
    BadWitness = 15,
    AlreadySpent = 16,

    // datafeed
    NoData = 20,
    UnknownSource = 21,

    // will_oracle
    HashMismatch = 30,
    ConditionFalse = 31,
    BadExpression = 32,

    // realitykeys
    PastResolution = 40,
    TooEarly = 41,
    TipTooSmall = 42,
    WindowClosed = 43,
    ReconstructionMismatch = 44,
    WrongBranch = 45,
    NotFinalized = 46,
    UnknownFact = 47,

    // orisi
    KeyLimitExceeded = 50,
    BadQuorum = 51,
    NotAllAcked = 52,
    VerificationFailed = 53,
    InvalidPoW = 54,
    QuorumNotReached = 55,

    // truthcoin
    InsufficientCSH = 60,
    InsufficientShares = 61,
    InsufficientVTC = 62,
    PastMaturity = 63,
    UnknownDecision = 64,
    UnknownMarket = 65,
    CommitClosed = 66,
    RevealMismatch = 67,
    RevealOpen = 68,
    RevealClosed = 69,
    WindowOpen = 70,
    NotConfirmed = 71,
    BadScalarRange = 72,
    UnknownBallot = 73,

    // counterparty
    BadMagic = 80,
    WrongBurnAddress = 81,
    StaleBroadcast = 82,
    NoBroadcastYet = 83,
    BadStars = 84,

    // oraclize
    OverlappingConditions = 90,
    NonSSLSource = 91,
    EmptyTimeframe = 92,
    ProofInvalid = 93,
    AlreadySettled = 94,
    BadPollTime = 95,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), m_code(code) {}
    explicit Error(Errc code) : Error(code, std::string(errc_name(code))) {}

    Errc code() const noexcept { return m_code; }

private:
    Errc m_code;
};

} // namespace oraclesim

#endif // ORACLESIM_ERRORS_HPP

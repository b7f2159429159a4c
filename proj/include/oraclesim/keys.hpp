// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef ORACLESIM_KEYS_HPP
#define ORACLESIM_KEYS_HPP

#include <oraclesim/bytes.hpp>

#include <map>
#include <string_view>

namespace oraclesim {

/**
 * Simulation-grade key pair: secret = H(seed), pub = H(secret).
 *
 * There is no asymmetric cryptography here. Signatures are tags
 * H(secret || digest) that only a verifier holding the secret registry can
 * check. Protocols only need "who can produce a tag for this pub", including
 * after a secret has been revealed to a third party.
 */
struct KeyPair {
    SecretKey secret;
    PubKey pub;

    friend bool operator==(const KeyPair&, const KeyPair&) = default;
};

KeyPair keygen(ByteView seed_material);
KeyPair keygen(std::string_view seed_material);
KeyPair keypair_from_secret(const SecretKey& secret);
PubKey pub_of(const SecretKey& secret);

struct Signature {
    PubKey signer;
    Hash256 digest;
    Hash256 tag;

    friend bool operator==(const Signature&, const Signature&) = default;
};

Signature sign(const SecretKey& secret, const Hash256& digest);

/** Pluggable verification backend. */
class SignatureVerifier {
public:
    virtual ~SignatureVerifier() = default;

    /** Throws Error(UnknownKey) when the pub was never enrolled. */
    virtual bool verify(const Signature& sig, const PubKey& pub, const Hash256& digest) const = 0;
    virtual bool knows(const PubKey& pub) const = 0;
};

/**
 * pub -> secret registry used as the verifier. Secrets go in and never come
 * back out; there is deliberately no accessor.
 */
class KeyRegistry final : public SignatureVerifier {
public:
    void enroll(const KeyPair& kp);
    bool verify(const Signature& sig, const PubKey& pub, const Hash256& digest) const override;
    bool knows(const PubKey& pub) const override { return m_secrets.contains(pub); }
    std::size_t size() const { return m_secrets.size(); }

private:
    std::map<PubKey, SecretKey> m_secrets;
};

} // namespace oraclesim

#endif // ORACLESIM_KEYS_HPP

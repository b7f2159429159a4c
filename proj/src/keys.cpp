// Copyright (c) 2026 The oraclesim developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#include <oraclesim/keys.hpp>
#include <oraclesim/errors.hpp>
#include <oraclesim/hash.hpp>

namespace oraclesim {

PubKey pub_of(const SecretKey& secret) { return PubKey::cast(sha256(secret.view())); }

KeyPair keypair_from_secret(const SecretKey& secret) { return KeyPair{secret, pub_of(secret)}; }

KeyPair keygen(ByteView seed_material)
{
    if (seed_material.empty()) throw Error(Errc::InvalidSeed, "empty seed material");
    return keypair_from_secret(SecretKey::cast(sha256(seed_material)));
}

KeyPair keygen(std::string_view seed_material) { return keygen(as_bytes(seed_material)); }

Signature sign(const SecretKey& secret, const Hash256& digest)
{
    return Signature{pub_of(secret), digest, sha256({secret.view(), digest.view()})};
}

void KeyRegistry::enroll(const KeyPair& kp)
{
    if (pub_of(kp.secret) != kp.pub) throw Error(Errc::InvalidArgument, "pub does not match secret");
    m_secrets.emplace(kp.pub, kp.secret);
}

bool KeyRegistry::verify(const Signature& sig, const PubKey& pub, const Hash256& digest) const
{
    auto it = m_secrets.find(pub);
    if (it == m_secrets.end()) throw Error(Errc::UnknownKey, "unknown pub " + pub.hex());
    if (sig.signer != pub || sig.digest != digest) return false;
    return sig.tag == sha256({it->second.view(), digest.view()});
}

} // namespace oraclesim

#include "sada/protocol/credential.hpp"

#include <algorithm>

#include "sada/crypto/hash.hpp"

namespace sada::protocol {

Bytes Credential::encode() const {
  Bytes out;
  append(out, signature);
  append(out, commitment);
  append_u64_be(out, expiry);
  return out;
}

Credential Credential::decode(ByteView bytes) {
  ByteReader r(bytes);
  Credential c;
  c.signature = r.take_array<schnorr::kSignatureBytes>();
  c.commitment = r.take_array<kPointBytes>();
  c.expiry = r.u64();
  r.expect_end();
  return c;
}

Bytes credential_message(const PointBytes& commitment, uint64_t expiry) {
  Bytes msg;
  append(msg, domain_hash(HashTag::Vid, {commitment}));
  append_u64_be(msg, expiry);
  return msg;
}

bool verify_credential(const Group& group, const GroupPoint& pka, const Credential& cre, uint64_t now) {
  if (now > cre.expiry) return false;
  return schnorr::verify_encoded(group, pka, credential_message(cre.commitment, cre.expiry), cre.signature).ok;
}

TrustedAuthority::TrustedAuthority(std::shared_ptr<const Group> group, Drbg rng)
    : group_(std::move(group)), rng_(std::move(rng)) {
  keys_ = schnorr::KeyPair::generate(*group_, rng_);
  h_ = group_->hash_to_point(as_view("sada/pedersen/h"));
}

Credential TrustedAuthority::issue_credential(uint64_t id, uint64_t expiry) {
  const auto& f = group_->scalars();
  Scalar r = f.random_nonzero(rng_);
  GroupPoint comm = group_->add(group_->mul_gen(f.from_u64(id)), group_->mul(h_, r));
  Credential cre;
  cre.commitment = comm.encoding();
  cre.expiry = expiry;
  cre.signature = schnorr::sign(*group_, keys_, credential_message(cre.commitment, expiry), rng_).encode(*group_);
  registry_[cre.commitment] = {id, r};
  return cre;
}

uint64_t TrustedAuthority::identify(const Credential& cre) {
  auto it = registry_.find(cre.commitment);
  if (it == registry_.end()) throw UnknownCommitment("commitment was not issued by this TA");
  const auto& f = group_->scalars();
  const Opening& o = it->second;
  GroupPoint check = group_->add(group_->mul_gen(f.from_u64(o.id)), group_->mul(h_, o.blinding));
  if (check.encoding() != cre.commitment) throw UnknownCommitment("stored opening does not match");
  revoked_.insert(cre.commitment);
  return o.id;
}

}  // namespace sada::protocol

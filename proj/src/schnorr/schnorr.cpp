#include "sada/schnorr/schnorr.hpp"

#include <stdexcept>

#include "sada/crypto/hash.hpp"

namespace sada::schnorr {

KeyPair KeyPair::generate(const Group& group, Drbg& rng) {
  return from_secret(group, group.scalars().random_nonzero(rng));
}

KeyPair KeyPair::from_secret(const Group& group, const Scalar& sk) {
  if (sk.is_zero()) {
    throw std::invalid_argument("secret key must be nonzero");
  }
  return {sk, group.mul_gen(sk)};
}

SignatureBytes Signature::encode(const Group& group) const {
  SignatureBytes out{};
  const ScalarBytes s_bytes = group.scalars().encode(s);
  std::copy(s_bytes.begin(), s_bytes.end(), out.begin());
  const PointBytes& r_bytes = R.encoding();
  std::copy(r_bytes.begin(), r_bytes.end(), out.begin() + kScalarBytes);
  return out;
}

Signature Signature::decode(const Group& group, ByteView bytes) {
  if (bytes.size() != kSignatureBytes) {
    throw DecodeError("signature must be 65 bytes");
  }
  return {group.scalars().decode(bytes.first(kScalarBytes)), group.decode(bytes.subspan(kScalarBytes))};
}

Scalar challenge(const Group& group, const GroupPoint& pk, const GroupPoint& R, ByteView message) {
  return domain_hash_scalar(group.scalars(), HashTag::Sig, {pk.bytes(), R.bytes(), message});
}

Signature sign(const Group& group, const KeyPair& kp, ByteView message, Drbg& rng) {
  const Scalar k = group.scalars().random_nonzero(rng);
  const GroupPoint R = group.mul_gen(k);
  const Scalar e = challenge(group, kp.pk, R, message);
  return {group.scalars().add(k, group.scalars().mul(kp.sk, e)), R};
}

Signature sign_with_challenge(const Group& group, const KeyPair& kp, const Scalar& k,
                              const Scalar& e) {
  return {group.scalars().add(k, group.scalars().mul(kp.sk, e)), group.mul_gen(k)};
}

bool check_equation(const Group& group, const GroupPoint& pk, const GroupPoint& R, const Scalar& s,
                    const Scalar& e) {
  return group.mul_gen_add(s, pk, group.scalars().neg(e)) == R;
}

bool verify(const Group& group, const GroupPoint& pk, ByteView message, const Signature& sig) {
  if (!pk.valid() || !sig.R.valid() || !group.owns(pk) || !group.owns(sig.R)) return false;
  return check_equation(group, pk, sig.R, sig.s, challenge(group, pk, sig.R, message));
}

VerifyResult verify_encoded(const Group& group, const GroupPoint& pk, ByteView message,
                            ByteView signature_bytes) {
  Signature sig;
  try {
    sig = Signature::decode(group, signature_bytes);
  } catch (const DecodeError& e) {
    return {false, std::string("malformed signature: ") + e.what()};
  }
  if (!verify(group, pk, message, sig)) {
    return {false, "signature equation does not hold"};
  }
  return {true, {}};
}

}  // namespace sada::schnorr

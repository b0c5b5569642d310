#pragma once

#include <array>
#include <string>

#include "sada/crypto/bytes.hpp"
#include "sada/crypto/group.hpp"
#include "sada/crypto/rng.hpp"

namespace sada::schnorr {

inline constexpr size_t kSignatureBytes = kScalarBytes + kPointBytes;  // 65
using SignatureBytes = std::array<uint8_t, kSignatureBytes>;

struct KeyPair {
  Scalar sk;
  GroupPoint pk;

  static KeyPair generate(const Group& group, Drbg& rng);
  /// sk must be nonzero.
  static KeyPair from_secret(const Group& group, const Scalar& sk);
};

/// (s, R) with wire form s (32 bytes, big-endian) || R (33 bytes, compressed).
struct Signature {
  Scalar s;
  GroupPoint R;

  SignatureBytes encode(const Group& group) const;
  static Signature decode(const Group& group, ByteView bytes);  // throws DecodeError
};

/// e = Hash(pk || R || m) mod q.
Scalar challenge(const Group& group, const GroupPoint& pk, const GroupPoint& R, ByteView message);

Signature sign(const Group& group, const KeyPair& kp, ByteView message, Drbg& rng);

/// s = k + sk·e with caller-chosen nonce and challenge; R = g^k.
Signature sign_with_challenge(const Group& group, const KeyPair& kp, const Scalar& k,
                              const Scalar& e);

/// Checks g^s == R · pk^e.
bool check_equation(const Group& group, const GroupPoint& pk, const GroupPoint& R, const Scalar& s,
                    const Scalar& e);

bool verify(const Group& group, const GroupPoint& pk, ByteView message, const Signature& sig);

struct VerifyResult {
  bool ok = false;
  std::string detail;
  explicit operator bool() const { return ok; }
};

/// Verifies a signature given in wire form; malformed bytes are a failed
/// verification with a reason rather than an exception.
VerifyResult verify_encoded(const Group& group, const GroupPoint& pk, ByteView message,
                            ByteView signature_bytes);

}  // namespace sada::schnorr

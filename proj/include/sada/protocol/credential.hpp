#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>

#include "sada/crypto/group.hpp"
#include "sada/crypto/rng.hpp"
#include "sada/schnorr/schnorr.hpp"

namespace sada::protocol {

/// cre = Sign_ska(Hash_vid(Comm(ID)) || tmp2) || Comm(ID) || tmp2.
/// Wire form: signature (65) || commitment (33) || expiry (u64 BE) = 106 bytes.
struct Credential {
  schnorr::SignatureBytes signature{};
  PointBytes commitment{};
  uint64_t expiry = 0;

  Bytes encode() const;
  static Credential decode(ByteView bytes);
  friend bool operator==(const Credential&, const Credential&) = default;
};

inline constexpr size_t kCredentialBytes = schnorr::kSignatureBytes + kPointBytes + 8;

/// Bytes the TA signs: Hash_vid(commitment) || expiry.
Bytes credential_message(const PointBytes& commitment, uint64_t expiry);

/// Checks the TA signature and expiry. Never learns the identity.
bool verify_credential(const Group& group, const GroupPoint& pka, const Credential& cre, uint64_t now);

class UnknownCommitment : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Issues credentials carrying Pedersen commitments id·g + r·h and keeps
/// the openings so a flagged head can be identified later.
class TrustedAuthority {
 public:
  TrustedAuthority(std::shared_ptr<const Group> group, Drbg rng);

  const GroupPoint& public_key() const { return keys_.pk; }
  const GroupPoint& commitment_base() const { return h_; }

  Credential issue_credential(uint64_t id, uint64_t expiry);

  /// Opens the commitment in cre, checks the opening, and revokes it.
  /// Throws UnknownCommitment if the commitment was never issued.
  uint64_t identify(const Credential& cre);

  bool is_revoked(const Credential& cre) const { return revoked_.count(cre.commitment) != 0; }

 private:
  struct Opening {
    uint64_t id;
    Scalar blinding;
  };

  std::shared_ptr<const Group> group_;
  Drbg rng_;
  schnorr::KeyPair keys_;
  GroupPoint h_;
  std::map<PointBytes, Opening> registry_;
  std::set<PointBytes> revoked_;
};

}  // namespace sada::protocol

#pragma once

#include <cstdint>
#include <vector>

#include "sada/crypto/bytes.hpp"
#include "sada/crypto/group.hpp"
#include "sada/crypto/symmetric.hpp"

namespace sada::approval {

/// Cluster average as the exact pair (S, n). Wire form: S (u64 BE) || n (u32 BE).
struct AverageValue {
  uint64_t sum = 0;
  uint32_t count = 0;

  Bytes encode() const;
  static AverageValue decode(ByteView bytes);
  /// S / n, for display only.
  double mean() const { return count ? static_cast<double>(sum) / count : 0.0; }

  friend bool operator==(const AverageValue&, const AverageValue&) = default;
};

inline constexpr size_t kAverageBytes = 12;

struct EncryptedShare {
  uint8_t holder = 0;  // member index the share is addressed to
  Bytes ciphertext;    // share_width + 16 bytes
};

/// m_i: nonce batch, masked datum, mask hash, and the encrypted shares of β.
///
/// R count (1) || R_k (33 each) || c (8) || h (32) || share count (1) ||
/// { holder (1) || ciphertext }.
struct RevealMsg {
  std::vector<GroupPoint> nonces;
  uint64_t c = 0;
  Digest h{};
  std::vector<EncryptedShare> shares;

  Bytes encode() const;
  static RevealMsg decode(const Group& group, ByteView bytes, size_t share_width);
};

/// com_i = Hash_com(m_i).
Digest commitment(const RevealMsg& msg);

/// Deterministic AEAD nonce for the share owner -> holder within one event.
AeadNonce share_nonce(ByteView uid, uint32_t owner, uint32_t holder);

Bytes encrypt_share(const SymKey& key, ByteView uid, uint32_t owner, uint32_t holder,
                    uint64_t value, size_t width);
/// nullopt on authentication failure.
std::optional<uint64_t> decrypt_share(const SymKey& key, ByteView uid, uint32_t owner,
                                      uint32_t holder, ByteView ciphertext, size_t width);

}  // namespace sada::approval

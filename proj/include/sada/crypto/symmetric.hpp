#pragma once

#include <array>
#include <optional>

#include "sada/crypto/bytes.hpp"

namespace sada {

using SymKey = std::array<uint8_t, 32>;
using AeadNonce = std::array<uint8_t, 12>;

inline constexpr size_t kAeadTagBytes = 16;

/// AES-256-GCM. Output is ciphertext || 16-byte tag.
Bytes aead_seal(const SymKey& key, const AeadNonce& nonce, ByteView plaintext, ByteView aad = {});
/// Returns nullopt if authentication fails.
std::optional<Bytes> aead_open(const SymKey& key, const AeadNonce& nonce, ByteView sealed,
                               ByteView aad = {});

Digest hmac_sha256(ByteView key, ByteView data);
/// Constant-time comparison of a received tag against the expected HMAC.
bool hmac_sha256_verify(ByteView key, ByteView data, ByteView tag);

}  // namespace sada

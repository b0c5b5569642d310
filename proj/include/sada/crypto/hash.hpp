#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>

#include "sada/crypto/bytes.hpp"
#include "sada/crypto/scalar.hpp"

namespace sada {

/// Domain-separation tags. The first six are the protocol's named hash
/// functions; the rest are internal uses that must not collide with them.
enum class HashTag : uint8_t {
  Uid = 0x01,
  Com = 0x02,
  Agg = 0x03,
  App = 0x04,
  Mask = 0x05,
  Vid = 0x06,
  Sig = 0x10,    // plain Schnorr challenge
  Kdf = 0x11,    // pairwise mask / key derivation
  Nonce = 0x12,  // deterministic AEAD nonces
};

bool is_registered_tag(uint8_t tag);
HashTag hash_tag_from_byte(uint8_t tag);  // throws std::invalid_argument

/// SHA-256(tag || u32 count || for each part: u32 length || part).
Digest domain_hash(HashTag tag, std::span<const ByteView> parts);
Digest domain_hash(HashTag tag, std::initializer_list<ByteView> parts);
/// domain_hash reduced mod q.
Scalar domain_hash_scalar(const ScalarField& field, HashTag tag, std::initializer_list<ByteView> parts);

Digest sha256(ByteView data);

}  // namespace sada

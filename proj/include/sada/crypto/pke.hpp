#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "sada/crypto/bytes.hpp"

namespace sada {

class Drbg;

struct PkeKeyPair {
  Bytes public_key;
  Bytes private_key;
};

/// Public-key encryption used for session keys (to the RSU) and the cluster
/// average (to the server).
class PkeScheme {
 public:
  virtual ~PkeScheme() = default;
  virtual std::string name() const = 0;
  virtual PkeKeyPair keygen(Drbg& rng) const = 0;
  virtual Bytes encrypt(ByteView public_key, ByteView plaintext, Drbg& rng) const = 0;
  /// nullopt on any decryption or authentication failure.
  virtual std::optional<Bytes> decrypt(ByteView private_key, ByteView ciphertext) const = 0;
};

/// X25519 + SHA-256 KDF + AES-256-GCM. Ciphertext: ephemeral key (32) ||
/// sealed plaintext (len + 16). Fully deterministic under a seeded Drbg.
std::unique_ptr<PkeScheme> make_hybrid_pke();
/// RSA-2048 with OAEP(SHA-256). Ciphertexts are 256 bytes. Uses OpenSSL's
/// own RNG, so ciphertext bytes are not reproducible (sizes are).
std::unique_ptr<PkeScheme> make_rsa_pke();
/// "hybrid" or "rsa2048".
std::unique_ptr<PkeScheme> make_pke(std::string_view name);

}  // namespace sada

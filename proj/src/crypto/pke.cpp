#include "sada/crypto/pke.hpp"

#include <openssl/evp.h>
#include <openssl/rsa.h>
#include <openssl/x509.h>

#include <stdexcept>

#include "sada/crypto/hash.hpp"
#include "sada/crypto/rng.hpp"
#include "sada/crypto/symmetric.hpp"

namespace sada {
namespace {

struct PkeyDeleter {
  void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct PkeyCtxDeleter {
  void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using PkeyCtxPtr = std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter>;

constexpr size_t kX25519Bytes = 32;

PkeyPtr x25519_private(ByteView raw) {
  PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr, raw.data(), raw.size()));
  if (!key) throw std::runtime_error("X25519 private key import failed");
  return key;
}

PkeyPtr x25519_public(ByteView raw) {
  PkeyPtr key(EVP_PKEY_new_raw_public_key(EVP_PKEY_X25519, nullptr, raw.data(), raw.size()));
  return key;
}

Bytes raw_public(const EVP_PKEY* key) {
  Bytes out(kX25519Bytes);
  size_t len = out.size();
  if (EVP_PKEY_get_raw_public_key(key, out.data(), &len) != 1 || len != kX25519Bytes) {
    throw std::runtime_error("X25519 public key export failed");
  }
  return out;
}

std::optional<Bytes> x25519_derive(EVP_PKEY* priv, EVP_PKEY* peer) {
  PkeyCtxPtr ctx(EVP_PKEY_CTX_new(priv, nullptr));
  if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
      EVP_PKEY_derive_set_peer(ctx.get(), peer) != 1) {
    return std::nullopt;
  }
  Bytes secret(kX25519Bytes);
  size_t len = secret.size();
  if (EVP_PKEY_derive(ctx.get(), secret.data(), &len) != 1 || len != kX25519Bytes) {
    return std::nullopt;
  }
  return secret;
}

SymKey hybrid_kdf(ByteView shared, ByteView eph_pub, ByteView recipient_pub) {
  const Digest d = domain_hash(HashTag::Kdf, {as_view("pke/x25519"), shared, eph_pub, recipient_pub});
  SymKey key{};
  std::copy(d.begin(), d.end(), key.begin());
  return key;
}

class HybridPke final : public PkeScheme {
 public:
  std::string name() const override { return "hybrid"; }

  PkeKeyPair keygen(Drbg& rng) const override {
    Bytes sk = rng.bytes(kX25519Bytes);
    PkeyPtr key = x25519_private(sk);
    return {raw_public(key.get()), std::move(sk)};
  }

  Bytes encrypt(ByteView public_key, ByteView plaintext, Drbg& rng) const override {
    PkeyPtr peer = x25519_public(public_key);
    if (!peer) throw std::invalid_argument("malformed X25519 public key");
    const Bytes eph_sk = rng.bytes(kX25519Bytes);
    PkeyPtr eph = x25519_private(eph_sk);
    const Bytes eph_pub = raw_public(eph.get());
    auto shared = x25519_derive(eph.get(), peer.get());
    if (!shared) throw std::runtime_error("X25519 derivation failed");
    // A fresh ephemeral key per message makes the all-zero nonce safe.
    const SymKey key = hybrid_kdf(*shared, eph_pub, public_key);
    Bytes out = eph_pub;
    append(out, aead_seal(key, AeadNonce{}, plaintext));
    return out;
  }

  std::optional<Bytes> decrypt(ByteView private_key, ByteView ciphertext) const override {
    if (ciphertext.size() < kX25519Bytes + kAeadTagBytes) return std::nullopt;
    PkeyPtr priv = x25519_private(private_key);
    const ByteView eph_pub = ciphertext.first(kX25519Bytes);
    PkeyPtr eph = x25519_public(eph_pub);
    if (!eph) return std::nullopt;
    auto shared = x25519_derive(priv.get(), eph.get());
    if (!shared) return std::nullopt;
    const Bytes my_pub = raw_public(priv.get());
    const SymKey key = hybrid_kdf(*shared, eph_pub, my_pub);
    return aead_open(key, AeadNonce{}, ciphertext.subspan(kX25519Bytes));
  }
};

class RsaPke final : public PkeScheme {
 public:
  std::string name() const override { return "rsa2048"; }

  PkeKeyPair keygen(Drbg&) const override {
    PkeyPtr key(EVP_PKEY_Q_keygen(nullptr, nullptr, "RSA", size_t{2048}));
    if (!key) throw std::runtime_error("RSA keygen failed");
    return {der(key.get(), true), der(key.get(), false)};
  }

  Bytes encrypt(ByteView public_key, ByteView plaintext, Drbg&) const override {
    const unsigned char* p = public_key.data();
    PkeyPtr key(d2i_PUBKEY(nullptr, &p, static_cast<long>(public_key.size())));
    if (!key) throw std::invalid_argument("malformed RSA public key");
    PkeyCtxPtr ctx(EVP_PKEY_CTX_new(key.get(), nullptr));
    if (!ctx || EVP_PKEY_encrypt_init(ctx.get()) != 1 || !set_oaep(ctx.get())) {
      throw std::runtime_error("RSA encrypt init failed");
    }
    size_t len = 0;
    if (EVP_PKEY_encrypt(ctx.get(), nullptr, &len, plaintext.data(), plaintext.size()) != 1) {
      throw std::runtime_error("RSA encrypt sizing failed");
    }
    Bytes out(len);
    if (EVP_PKEY_encrypt(ctx.get(), out.data(), &len, plaintext.data(), plaintext.size()) != 1) {
      throw std::runtime_error("RSA encrypt failed");
    }
    out.resize(len);
    return out;
  }

  std::optional<Bytes> decrypt(ByteView private_key, ByteView ciphertext) const override {
    const unsigned char* p = private_key.data();
    PkeyPtr key(d2i_AutoPrivateKey(nullptr, &p, static_cast<long>(private_key.size())));
    if (!key) return std::nullopt;
    PkeyCtxPtr ctx(EVP_PKEY_CTX_new(key.get(), nullptr));
    if (!ctx || EVP_PKEY_decrypt_init(ctx.get()) != 1 || !set_oaep(ctx.get())) {
      return std::nullopt;
    }
    size_t len = 0;
    if (EVP_PKEY_decrypt(ctx.get(), nullptr, &len, ciphertext.data(), ciphertext.size()) != 1) {
      return std::nullopt;
    }
    Bytes out(len);
    if (EVP_PKEY_decrypt(ctx.get(), out.data(), &len, ciphertext.data(), ciphertext.size()) != 1) {
      return std::nullopt;
    }
    out.resize(len);
    return out;
  }

 private:
  static bool set_oaep(EVP_PKEY_CTX* ctx) {
    return EVP_PKEY_CTX_set_rsa_padding(ctx, RSA_PKCS1_OAEP_PADDING) == 1 &&
           EVP_PKEY_CTX_set_rsa_oaep_md(ctx, EVP_sha256()) == 1;
  }

  static Bytes der(EVP_PKEY* key, bool public_part) {
    unsigned char* buf = nullptr;
    int len = public_part ? i2d_PUBKEY(key, &buf) : i2d_PrivateKey(key, &buf);
    if (len <= 0) throw std::runtime_error("RSA key export failed");
    Bytes out(buf, buf + len);
    OPENSSL_free(buf);
    return out;
  }
};

}  // namespace

std::unique_ptr<PkeScheme> make_hybrid_pke() { return std::make_unique<HybridPke>(); }
std::unique_ptr<PkeScheme> make_rsa_pke() { return std::make_unique<RsaPke>(); }

std::unique_ptr<PkeScheme> make_pke(std::string_view name) {
  if (name == "hybrid") return make_hybrid_pke();
  if (name == "rsa2048") return make_rsa_pke();
  throw std::invalid_argument("unknown public-key scheme: " + std::string(name));
}

}  // namespace sada

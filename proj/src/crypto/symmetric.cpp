#include "sada/crypto/symmetric.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <memory>
#include <stdexcept>

namespace sada {
namespace {

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

void ok(int rc, const char* what) {
  if (rc != 1) throw std::runtime_error(std::string("AES-GCM: ") + what);
}

}  // namespace

Bytes aead_seal(const SymKey& key, const AeadNonce& nonce, ByteView plaintext, ByteView aad) {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::bad_alloc();
  ok(EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()), "init");
  int len = 0;
  if (!aad.empty()) {
    ok(EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())), "aad");
  }
  Bytes out(plaintext.size() + kAeadTagBytes);
  if (!plaintext.empty()) {
    ok(EVP_EncryptUpdate(ctx.get(), out.data(), &len, plaintext.data(),
                         static_cast<int>(plaintext.size())),
       "update");
  }
  ok(EVP_EncryptFinal_ex(ctx.get(), out.data() + plaintext.size(), &len), "final");
  ok(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kAeadTagBytes,
                         out.data() + plaintext.size()),
     "tag");
  return out;
}

std::optional<Bytes> aead_open(const SymKey& key, const AeadNonce& nonce, ByteView sealed,
                               ByteView aad) {
  if (sealed.size() < kAeadTagBytes) return std::nullopt;
  const size_t n = sealed.size() - kAeadTagBytes;
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::bad_alloc();
  ok(EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), nonce.data()), "init");
  int len = 0;
  if (!aad.empty()) {
    ok(EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())), "aad");
  }
  Bytes out(n);
  if (n > 0) {
    ok(EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data(), static_cast<int>(n)), "update");
  }
  std::array<uint8_t, kAeadTagBytes> tag{};
  std::copy(sealed.begin() + static_cast<std::ptrdiff_t>(n), sealed.end(), tag.begin());
  ok(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kAeadTagBytes, tag.data()), "set tag");
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + n, &len) != 1) {
    return std::nullopt;
  }
  return out;
}

Digest hmac_sha256(ByteView key, ByteView data) {
  Digest out{};
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(),
           out.data(), &len) == nullptr ||
      len != out.size()) {
    throw std::runtime_error("HMAC-SHA256 failed");
  }
  return out;
}

bool hmac_sha256_verify(ByteView key, ByteView data, ByteView tag) {
  if (tag.size() != 32) return false;
  const Digest expected = hmac_sha256(key, data);
  return CRYPTO_memcmp(expected.data(), tag.data(), expected.size()) == 0;
}

}  // namespace sada

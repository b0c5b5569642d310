#include "sada/crypto/hash.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace sada {
namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 init failed");
    }
  }
  void update(ByteView data) {
    if (!data.empty() && EVP_DigestUpdate(ctx_.get(), data.data(), data.size()) != 1) {
      throw std::runtime_error("SHA-256 update failed");
    }
  }
  void update_u32(uint32_t v) {
    const uint8_t be[4] = {static_cast<uint8_t>(v >> 24), static_cast<uint8_t>(v >> 16),
                           static_cast<uint8_t>(v >> 8), static_cast<uint8_t>(v)};
    update(be);
  }
  Digest finish() {
    Digest out{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), out.data(), &len) != 1 || len != out.size()) {
      throw std::runtime_error("SHA-256 final failed");
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx_;
};

}  // namespace

bool is_registered_tag(uint8_t tag) {
  switch (static_cast<HashTag>(tag)) {
    case HashTag::Uid:
    case HashTag::Com:
    case HashTag::Agg:
    case HashTag::App:
    case HashTag::Mask:
    case HashTag::Vid:
    case HashTag::Sig:
    case HashTag::Kdf:
    case HashTag::Nonce:
      return true;
  }
  return false;
}

HashTag hash_tag_from_byte(uint8_t tag) {
  if (!is_registered_tag(tag)) {
    throw std::invalid_argument("unregistered hash tag " + std::to_string(tag));
  }
  return static_cast<HashTag>(tag);
}

Digest domain_hash(HashTag tag, std::span<const ByteView> parts) {
  Sha256 h;
  const uint8_t tag_byte = static_cast<uint8_t>(tag);
  h.update(ByteView(&tag_byte, 1));
  h.update_u32(static_cast<uint32_t>(parts.size()));
  for (const auto& part : parts) {
    h.update_u32(static_cast<uint32_t>(part.size()));
    h.update(part);
  }
  return h.finish();
}

Digest domain_hash(HashTag tag, std::initializer_list<ByteView> parts) {
  return domain_hash(tag, std::span<const ByteView>(parts.begin(), parts.size()));
}

Scalar domain_hash_scalar(const ScalarField& field, HashTag tag,
                          std::initializer_list<ByteView> parts) {
  return field.reduce_bytes(domain_hash(tag, parts));
}

Digest sha256(ByteView data) {
  Sha256 h;
  h.update(data);
  return h.finish();
}

}  // namespace sada

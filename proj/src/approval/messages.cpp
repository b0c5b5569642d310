#include "sada/approval/messages.hpp"

#include <algorithm>
#include <stdexcept>

#include "sada/crypto/hash.hpp"

namespace sada::approval {

Bytes AverageValue::encode() const {
  Bytes out;
  append_u64_be(out, sum);
  append_u32_be(out, count);
  return out;
}

AverageValue AverageValue::decode(ByteView bytes) {
  ByteReader r(bytes);
  AverageValue v;
  v.sum = r.u64();
  v.count = r.u32();
  r.expect_end();
  return v;
}

Bytes RevealMsg::encode() const {
  if (nonces.empty() || nonces.size() > 255) throw std::invalid_argument("nonce batch size");
  if (shares.size() > 255) throw std::invalid_argument("too many shares");
  Bytes out;
  append_u8(out, static_cast<uint8_t>(nonces.size()));
  for (const auto& R : nonces) append(out, R.bytes());
  append_u64_be(out, c);
  append(out, h);
  append_u8(out, static_cast<uint8_t>(shares.size()));
  for (const auto& s : shares) {
    append_u8(out, s.holder);
    append(out, s.ciphertext);
  }
  return out;
}

RevealMsg RevealMsg::decode(const Group& group, ByteView bytes, size_t share_width) {
  ByteReader r(bytes);
  RevealMsg m;
  const uint8_t n = r.u8();
  if (n == 0) throw DecodeError("empty nonce batch");
  for (uint8_t k = 0; k < n; ++k) m.nonces.push_back(group.decode(r.take(kPointBytes)));
  m.c = r.u64();
  m.h = r.take_array<32>();
  const uint8_t count = r.u8();
  for (uint8_t k = 0; k < count; ++k) {
    EncryptedShare s;
    s.holder = r.u8();
    auto ct = r.take(share_width + kAeadTagBytes);
    s.ciphertext.assign(ct.begin(), ct.end());
    m.shares.push_back(std::move(s));
  }
  r.expect_end();
  return m;
}

Digest commitment(const RevealMsg& msg) { return domain_hash(HashTag::Com, {msg.encode()}); }

AeadNonce share_nonce(ByteView uid, uint32_t owner, uint32_t holder) {
  Bytes idx;
  append_u32_be(idx, owner);
  append_u32_be(idx, holder);
  const Digest d = domain_hash(HashTag::Nonce, {as_view("share"), uid, idx});
  AeadNonce n{};
  std::copy_n(d.begin(), n.size(), n.begin());
  return n;
}

Bytes encrypt_share(const SymKey& key, ByteView uid, uint32_t owner, uint32_t holder,
                    uint64_t value, size_t width) {
  Bytes pt;
  if (width == 2) {
    if (value > 0xffff) throw std::invalid_argument("share does not fit in 2 bytes");
    append_u16_be(pt, static_cast<uint16_t>(value));
  } else {
    append_u64_be(pt, value);
  }
  return aead_seal(key, share_nonce(uid, owner, holder), pt);
}

std::optional<uint64_t> decrypt_share(const SymKey& key, ByteView uid, uint32_t owner,
                                      uint32_t holder, ByteView ciphertext, size_t width) {
  auto pt = aead_open(key, share_nonce(uid, owner, holder), ciphertext);
  if (!pt || pt->size() != width) return std::nullopt;
  ByteReader r(*pt);
  return width == 2 ? r.u16() : r.u64();
}

}  // namespace sada::approval

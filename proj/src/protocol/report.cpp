#include "sada/protocol/report.hpp"

#include <algorithm>

#include "sada/crypto/hash.hpp"
#include "sada/crypto/rng.hpp"

namespace sada::protocol {

Digest hash_vid_key(const GroupPoint& agg_pk) { return domain_hash(HashTag::Vid, {agg_pk.bytes()}); }

Bytes encode_records(std::span<const Record> records) {
  if (records.size() > 0xffff) throw std::invalid_argument("too many records");
  Bytes out;
  append_u16_be(out, static_cast<uint16_t>(records.size()));
  for (const auto& rc : records) {
    append(out, rc.key_hash);
    append(out, rc.uid);
  }
  return out;
}

std::vector<Record> read_records(ByteReader& r) {
  const uint16_t n = r.u16();
  std::vector<Record> out(n);
  for (auto& rc : out) {
    rc.key_hash = r.take_array<32>();
    rc.uid = r.take_array<32>();
  }
  return out;
}

std::vector<Record> decode_records(ByteView bytes) {
  ByteReader r(bytes);
  auto out = read_records(r);
  r.expect_end();
  return out;
}

SessionKeys fresh_session_keys(Drbg& rng) {
  SessionKeys k;
  rng.fill(k.key1);
  rng.fill(k.key2);
  return k;
}

Bytes seal_session_keys(const PkeScheme& pke, ByteView rsu_public, const SessionKeys& keys, Drbg& rng) {
  Bytes pt;
  append(pt, keys.key1);
  append(pt, keys.key2);
  return pke.encrypt(rsu_public, pt, rng);
}

std::optional<SessionKeys> open_session_keys(const PkeScheme& pke, ByteView rsu_private, ByteView ct) {
  auto pt = pke.decrypt(rsu_private, ct);
  if (!pt || pt->size() != 64) return std::nullopt;
  SessionKeys k;
  std::copy_n(pt->begin(), 32, k.key1.begin());
  std::copy_n(pt->begin() + 32, 32, k.key2.begin());
  return k;
}

Bytes ReportBody::encode() const {
  if (encrypted_avg.size() > 0xffff) throw std::invalid_argument("encrypted average too long");
  Bytes out;
  append(out, uid);
  append(out, appr);
  append_u16_be(out, static_cast<uint16_t>(encrypted_avg.size()));
  append(out, encrypted_avg);
  append(out, agg_pk);
  append(out, credential.encode());
  append_u64_be(out, tmp3);
  return out;
}

ReportBody ReportBody::decode(ByteView bytes) {
  ByteReader r(bytes);
  ReportBody b;
  b.uid = r.take_array<32>();
  b.appr = r.take_array<schnorr::kSignatureBytes>();
  auto enc = r.take(r.u16());
  b.encrypted_avg.assign(enc.begin(), enc.end());
  b.agg_pk = r.take_array<kPointBytes>();
  b.credential = Credential::decode(r.take(kCredentialBytes));
  b.tmp3 = r.u64();
  r.expect_end();
  return b;
}

namespace {

AeadNonce upload_nonce(MsgType type, uint64_t seq) {
  Bytes in;
  append_u8(in, static_cast<uint8_t>(type));
  append_u64_be(in, seq);
  const Digest d = domain_hash(HashTag::Nonce, {as_view("upload"), in});
  AeadNonce n{};
  std::copy_n(d.begin(), n.size(), n.begin());
  return n;
}

Bytes upload_header(MsgType type, uint64_t seq, uint32_t len) {
  Bytes h;
  append_u8(h, static_cast<uint8_t>(type));
  append_u64_be(h, seq);
  append_u32_be(h, len);
  return h;
}

}  // namespace

Bytes seal_upload(MsgType type, const SymKey& key1, uint64_t seq, ByteView body) {
  const uint32_t len = static_cast<uint32_t>(body.size() + kAeadTagBytes);
  Bytes header = upload_header(type, seq, len);
  Bytes out = header;
  append(out, aead_seal(key1, upload_nonce(type, seq), body, header));
  return out;
}

std::optional<Bytes> open_upload(MsgType type, const SymKey& key1, ByteView frame) {
  try {
    ByteReader r(frame);
    if (r.u8() != static_cast<uint8_t>(type)) return std::nullopt;
    const uint64_t seq = r.u64();
    const uint32_t len = r.u32();
    auto sealed = r.take(len);
    r.expect_end();
    return aead_open(key1, upload_nonce(type, seq), sealed, upload_header(type, seq, len));
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

Bytes build_record_body(const SymKey& key2, std::span<const Record> records) {
  const Bytes list = encode_records(records);
  Bytes out;
  append(out, hmac_sha256(key2, list));
  append(out, list);
  return out;
}

std::optional<std::vector<Record>> open_record_body(const SymKey& key2, ByteView body) {
  if (body.size() < 32) return std::nullopt;
  auto tag = body.first(32);
  auto list = body.subspan(32);
  if (!hmac_sha256_verify(key2, list, tag)) return std::nullopt;
  try {
    return decode_records(list);
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

}  // namespace sada::protocol

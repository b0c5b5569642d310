#include "sada/protocol/envelope.hpp"

#include <algorithm>

#include "sada/crypto/hash.hpp"

namespace sada::protocol {

std::string msg_type_name(MsgType t) {
  switch (t) {
    case MsgType::Commit: return "com_i";
    case MsgType::CommitList: return "L_com";
    case MsgType::Reveal: return "m_i";
    case MsgType::RevealList: return "m_i_list";
    case MsgType::SubApproval: return "sub_approval";
    case MsgType::Exclusion: return "m1_CH";
    case MsgType::ShareReply: return "share_reply";
    case MsgType::BetaList: return "beta_list";
    case MsgType::SessionKeys: return "session_keys";
    case MsgType::Report: return "m2_CH";
    case MsgType::RecordUpload: return "m3_CH";
  }
  return "unknown";
}

namespace {

Bytes header_bytes(MsgType type, uint8_t sender, uint64_t seq, uint32_t len) {
  Bytes h;
  append_u8(h, static_cast<uint8_t>(type));
  append_u8(h, sender);
  append_u64_be(h, seq);
  append_u32_be(h, len);
  return h;
}

AeadNonce envelope_nonce(uint8_t sender, uint8_t receiver, uint64_t seq) {
  Bytes in;
  append_u8(in, sender);
  append_u8(in, receiver);
  append_u64_be(in, seq);
  const Digest d = domain_hash(HashTag::Nonce, {as_view("envelope"), in});
  AeadNonce n{};
  std::copy_n(d.begin(), n.size(), n.begin());
  return n;
}

}  // namespace

Bytes Envelope::encode() const {
  Bytes out = header_bytes(type, sender, seq, static_cast<uint32_t>(sealed.size()));
  append(out, sealed);
  return out;
}

Envelope Envelope::decode(ByteView bytes) {
  ByteReader r(bytes);
  Envelope e;
  e.type = static_cast<MsgType>(r.u8());
  e.sender = r.u8();
  e.seq = r.u64();
  const uint32_t len = r.u32();
  auto body = r.take(len);
  e.sealed.assign(body.begin(), body.end());
  r.expect_end();
  return e;
}

Bytes envelope_signed_bytes(MsgType type, uint8_t sender, ByteView context, ByteView payload) {
  Bytes m;
  append_u8(m, static_cast<uint8_t>(type));
  append_u8(m, sender);
  append(m, context);
  append(m, payload);
  return m;
}

Envelope seal_envelope(const Group& group, const schnorr::KeyPair& signer, const SymKey& key,
                       MsgType type, uint8_t sender, uint8_t receiver, uint64_t seq,
                       ByteView context, ByteView payload, Drbg& rng) {
  auto sig = schnorr::sign(group, signer, envelope_signed_bytes(type, sender, context, payload), rng);
  Bytes inner(payload.begin(), payload.end());
  append(inner, sig.encode(group));
  Envelope env;
  env.type = type;
  env.sender = sender;
  env.seq = seq;
  const uint32_t len = static_cast<uint32_t>(inner.size() + kAeadTagBytes);
  env.sealed = aead_seal(key, envelope_nonce(sender, receiver, seq), inner,
                         header_bytes(type, sender, seq, len));
  return env;
}

std::optional<OpenedEnvelope> open_envelope(const Group& group, const SymKey& key, uint8_t receiver,
                                            const Envelope& env) {
  const Bytes aad = header_bytes(env.type, env.sender, env.seq, static_cast<uint32_t>(env.sealed.size()));
  auto inner = aead_open(key, envelope_nonce(env.sender, receiver, env.seq), env.sealed, aad);
  if (!inner || inner->size() < schnorr::kSignatureBytes) return std::nullopt;
  OpenedEnvelope out;
  out.type = env.type;
  out.sender = env.sender;
  const size_t body = inner->size() - schnorr::kSignatureBytes;
  out.payload.assign(inner->begin(), inner->begin() + static_cast<long>(body));
  try {
    out.sig = schnorr::Signature::decode(group, ByteView(*inner).subspan(body));
  } catch (const DecodeError&) {
    return std::nullopt;
  }
  return out;
}

bool verify_envelope(const Group& group, const GroupPoint& sender_pk, ByteView context,
                     const OpenedEnvelope& opened) {
  return schnorr::verify(group, sender_pk,
                         envelope_signed_bytes(opened.type, opened.sender, context, opened.payload),
                         opened.sig);
}

schnorr::BatchItem envelope_batch_item(const GroupPoint& sender_pk, ByteView context,
                                       const OpenedEnvelope& opened) {
  return {sender_pk, envelope_signed_bytes(opened.type, opened.sender, context, opened.payload), opened.sig};
}

}  // namespace sada::protocol

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sada/crypto/group.hpp"
#include "sada/crypto/rng.hpp"
#include "sada/crypto/symmetric.hpp"
#include "sada/schnorr/batch.hpp"
#include "sada/schnorr/schnorr.hpp"

namespace sada::protocol {

enum class MsgType : uint8_t {
  Commit = 1,        // com_i
  CommitList = 2,    // L_com
  Reveal = 3,        // m_i (+ records, to CH only)
  RevealList = 4,    // every m_j, CH to member
  SubApproval = 5,
  Exclusion = 6,     // m1_CH
  ShareReply = 7,
  BetaList = 8,
  SessionKeys = 9,   // E_pkr(key1, key2)
  Report = 10,       // m2_CH
  RecordUpload = 11, // m3_CH
};

std::string msg_type_name(MsgType t);

/// Sign-then-encrypt intra-cluster envelope.
///
/// type (1) || sender (1) || seq (u64) || len (u32) || AEAD_key(payload || sig)
///
/// The signature covers type || sender || context || payload, where context
/// is the event UID. The AEAD nonce is derived from (sender, receiver, seq)
/// and the 14-byte header is authenticated as associated data.
struct Envelope {
  MsgType type{};
  uint8_t sender = 0;
  uint64_t seq = 0;
  Bytes sealed;

  Bytes encode() const;
  static Envelope decode(ByteView bytes);
};

inline constexpr size_t kEnvelopeHeaderBytes = 14;

struct OpenedEnvelope {
  MsgType type{};
  uint8_t sender = 0;
  Bytes payload;
  schnorr::Signature sig;
};

Bytes envelope_signed_bytes(MsgType type, uint8_t sender, ByteView context, ByteView payload);

Envelope seal_envelope(const Group& group, const schnorr::KeyPair& signer, const SymKey& key,
                       MsgType type, uint8_t sender, uint8_t receiver, uint64_t seq,
                       ByteView context, ByteView payload, Drbg& rng);

/// Decrypts and parses; nullopt if authentication or parsing fails. The
/// signature is returned unchecked so a receiver can batch-verify.
std::optional<OpenedEnvelope> open_envelope(const Group& group, const SymKey& key, uint8_t receiver,
                                            const Envelope& env);

bool verify_envelope(const Group& group, const GroupPoint& sender_pk, ByteView context,
                     const OpenedEnvelope& opened);

schnorr::BatchItem envelope_batch_item(const GroupPoint& sender_pk, ByteView context,
                                       const OpenedEnvelope& opened);

}  // namespace sada::protocol

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sada/crypto/group.hpp"
#include "sada/crypto/pke.hpp"
#include "sada/crypto/symmetric.hpp"
#include "sada/protocol/credential.hpp"
#include "sada/protocol/envelope.hpp"

namespace sada::protocol {

/// rc = (Hash_vid(pk~), UID), 64 bytes on the wire.
struct Record {
  Digest key_hash{};
  Digest uid{};
  friend auto operator<=>(const Record&, const Record&) = default;
};

inline constexpr size_t kRecordBytes = 64;

Digest hash_vid_key(const GroupPoint& agg_pk);

/// u16 count || records.
Bytes encode_records(std::span<const Record> records);
std::vector<Record> read_records(ByteReader& r);
std::vector<Record> decode_records(ByteView bytes);

struct SessionKeys {
  SymKey key1{};  // encryption of m2 / m3
  SymKey key2{};  // HMAC over L_rc
};

SessionKeys fresh_session_keys(Drbg& rng);
Bytes seal_session_keys(const PkeScheme& pke, ByteView rsu_public, const SessionKeys& keys, Drbg& rng);
std::optional<SessionKeys> open_session_keys(const PkeScheme& pke, ByteView rsu_private, ByteView ct);

/// Plaintext of m2_CH:
///   UID (32) || appr (65) || len (u16) || E_pks(avg) || pk~ (33) || cre (106) || tmp3 (u64)
struct ReportBody {
  Digest uid{};
  schnorr::SignatureBytes appr{};
  Bytes encrypted_avg;
  PointBytes agg_pk{};
  Credential credential;
  uint64_t tmp3 = 0;

  Bytes encode() const;
  static ReportBody decode(ByteView bytes);
};

/// CH -> RSU frame: type (1) || seq (u64) || len (u32) || AEAD_key1(body).
Bytes seal_upload(MsgType type, const SymKey& key1, uint64_t seq, ByteView body);
/// nullopt on a wrong type, truncation or authentication failure.
std::optional<Bytes> open_upload(MsgType type, const SymKey& key1, ByteView frame);

/// m3 plaintext: HMAC_key2(L_rc) || L_rc.
Bytes build_record_body(const SymKey& key2, std::span<const Record> records);
/// nullopt if the HMAC does not verify or the list does not parse.
std::optional<std::vector<Record>> open_record_body(const SymKey& key2, ByteView body);

}  // namespace sada::protocol

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sada/approval/messages.hpp"
#include "sada/approval/session.hpp"
#include "sada/crypto/pke.hpp"
#include "sada/protocol/credential.hpp"
#include "sada/protocol/report.hpp"

namespace sada::protocol {

/// A cluster member. Keeps its long-term keys, credential, DH points with
/// every peer, the session of the current event, and its audit records.
class Vehicle {
 public:
  Vehicle(uint32_t index, uint64_t id, schnorr::KeyPair keys, Credential credential);

  uint32_t index() const { return index_; }
  uint64_t id() const { return id_; }
  const schnorr::KeyPair& keys() const { return keys_; }
  const Credential& credential() const { return credential_; }

  /// Computes the DH point with every other roster member once.
  void setup_pairwise(const Group& group, std::span<const GroupPoint> roster);
  /// Per-event (α, key) with every peer.
  std::map<uint32_t, masking::PairwiseSecret> event_secrets(ByteView uid) const;

  /// Records not uploaded before. They stay in flight until the head
  /// either uploads them (confirm) or the event aborts (restore).
  std::vector<Record> take_pending_records();
  void confirm_uploaded() { in_flight_.clear(); }
  void restore_in_flight();
  /// Adds a record for a finished event unless one for that UID exists.
  void remember(const Record& rc);
  size_t pending_records() const { return pending_.size(); }

  std::unique_ptr<approval::ApprovalSession> session;

 private:
  uint32_t index_;
  uint64_t id_;
  schnorr::KeyPair keys_;
  Credential credential_;
  std::map<uint32_t, GroupPoint> shared_;
  std::vector<Record> pending_;
  std::vector<Record> in_flight_;
  std::set<Digest> known_uids_;
};

/// Road-side unit: unwraps session keys, decrypts m2 / m3 and relays
/// their contents to the server.
class Rsu {
 public:
  Rsu(const PkeScheme& pke, Drbg& rng);

  const Bytes& public_key() const { return keys_.public_key; }
  /// False if the ciphertext does not decrypt to a key pair.
  bool accept_session_keys(ByteView ciphertext);
  bool has_session() const { return session_.has_value(); }
  const SessionKeys& session() const { return *session_; }

  std::optional<Bytes> relay_report(ByteView frame) const;
  /// Checks the HMAC under key2; the whole list is rejected on failure.
  std::optional<std::vector<Record>> relay_records(ByteView frame) const;

 private:
  const PkeScheme* pke_;
  PkeKeyPair keys_;
  std::optional<SessionKeys> session_;
};

struct ReportVerdict {
  bool accepted = false;  // parsed, fresh, new UID, valid credential
  bool verified = false;  // approval verifies
  std::string reason;
  Digest uid{};
  std::optional<approval::AverageValue> avg;
};

struct AuditResult {
  std::vector<Digest> flagged_uids;
  std::vector<Credential> flagged_credentials;  // aligned with flagged_uids
  size_t checked = 0;
  size_t duplicates = 0;
  size_t unknown = 0;
};

class CloudServer {
 public:
  CloudServer(std::shared_ptr<const Group> group, const PkeScheme& pke, Drbg& rng, GroupPoint ta_pk,
              uint64_t freshness_window, uint32_t t_aud);

  const Bytes& public_key() const { return keys_.public_key; }

  /// Handles a relayed m2 body: freshness, replay, credential, approval.
  ReportVerdict open_report(ByteView body, uint64_t now);
  /// Compares member records against the first-seen key hash per UID.
  /// Records are anonymous, so honest members of one event send identical
  /// ones; a value counts at most once per member of that event, and a list
  /// replayed verbatim is ignored as a whole.
  AuditResult audit(std::span<const Record> records);

  /// Every byte string the server has received, in arrival order.
  const std::vector<Bytes>& transcript() const { return transcript_; }
  const std::map<Digest, approval::AverageValue>& averages() const { return averages_; }
  /// Credentials whose report carried an invalid approval.
  const std::vector<Credential>& escalations() const { return escalations_; }
  uint32_t mismatches(const Digest& uid) const;

 private:
  struct Expected {
    Digest key_hash;
    Credential credential;
    uint32_t members = 0;
  };

  std::shared_ptr<const Group> group_;
  const PkeScheme* pke_;
  PkeKeyPair keys_;
  GroupPoint ta_pk_;
  uint64_t window_;
  uint32_t t_aud_;

  std::set<Digest> seen_uids_;
  std::map<Digest, Expected> expected_;
  std::map<Digest, uint32_t> mismatches_;
  std::set<Digest> flagged_;
  std::map<Record, uint32_t> record_counts_;
  std::set<Digest> seen_lists_;
  std::map<Digest, approval::AverageValue> averages_;
  std::vector<Credential> escalations_;
  std::vector<Bytes> transcript_;
};

/// Asks the TA to open the commitment inside a flagged credential.
uint64_t identify_bad_head(TrustedAuthority& ta, const Credential& flagged);

}  // namespace sada::protocol

#include "sada/protocol/entities.hpp"

#include <algorithm>

#include "sada/approval/approval.hpp"
#include "sada/crypto/hash.hpp"

namespace sada::protocol {

Vehicle::Vehicle(uint32_t index, uint64_t id, schnorr::KeyPair keys, Credential credential)
    : index_(index), id_(id), keys_(std::move(keys)), credential_(credential) {}

void Vehicle::setup_pairwise(const Group& group, std::span<const GroupPoint> roster) {
  shared_.clear();
  for (uint32_t j = 0; j < roster.size(); ++j) {
    if (j == index_) continue;
    shared_[j] = masking::dh_shared_point(group, keys_, roster[j]);
  }
}

std::map<uint32_t, masking::PairwiseSecret> Vehicle::event_secrets(ByteView uid) const {
  std::map<uint32_t, masking::PairwiseSecret> out;
  for (const auto& [j, point] : shared_) out[j] = masking::derive_pairwise(point, j, uid);
  return out;
}

std::vector<Record> Vehicle::take_pending_records() {
  in_flight_.insert(in_flight_.end(), pending_.begin(), pending_.end());
  pending_.clear();
  return in_flight_;
}

void Vehicle::restore_in_flight() {
  pending_.insert(pending_.begin(), in_flight_.begin(), in_flight_.end());
  in_flight_.clear();
}

void Vehicle::remember(const Record& rc) {
  if (known_uids_.insert(rc.uid).second) pending_.push_back(rc);
}

Rsu::Rsu(const PkeScheme& pke, Drbg& rng) : pke_(&pke), keys_(pke.keygen(rng)) {}

bool Rsu::accept_session_keys(ByteView ciphertext) {
  auto keys = open_session_keys(*pke_, keys_.private_key, ciphertext);
  if (!keys) return false;
  session_ = *keys;
  return true;
}

std::optional<Bytes> Rsu::relay_report(ByteView frame) const {
  if (!session_) return std::nullopt;
  return open_upload(MsgType::Report, session_->key1, frame);
}

std::optional<std::vector<Record>> Rsu::relay_records(ByteView frame) const {
  if (!session_) return std::nullopt;
  auto body = open_upload(MsgType::RecordUpload, session_->key1, frame);
  if (!body) return std::nullopt;
  return open_record_body(session_->key2, *body);
}

CloudServer::CloudServer(std::shared_ptr<const Group> group, const PkeScheme& pke, Drbg& rng,
                         GroupPoint ta_pk, uint64_t freshness_window, uint32_t t_aud)
    : group_(std::move(group)),
      pke_(&pke),
      keys_(pke.keygen(rng)),
      ta_pk_(std::move(ta_pk)),
      window_(freshness_window),
      t_aud_(t_aud) {}

ReportVerdict CloudServer::open_report(ByteView body, uint64_t now) {
  transcript_.emplace_back(body.begin(), body.end());
  ReportVerdict v;
  ReportBody report;
  try {
    report = ReportBody::decode(body);
  } catch (const DecodeError& e) {
    v.reason = std::string("malformed report: ") + e.what();
    return v;
  }
  v.uid = report.uid;
  if (report.tmp3 > now || now - report.tmp3 > window_) {
    v.reason = "stale timestamp";
    return v;
  }
  if (seen_uids_.count(report.uid)) {
    v.reason = "duplicate UID";
    return v;
  }
  if (!verify_credential(*group_, ta_pk_, report.credential, now)) {
    v.reason = "credential invalid or expired";
    return v;
  }
  auto plain = pke_->decrypt(keys_.private_key, report.encrypted_avg);
  if (!plain) {
    v.reason = "average does not decrypt";
    return v;
  }
  approval::AverageValue avg;
  GroupPoint agg_pk;
  try {
    avg = approval::AverageValue::decode(*plain);
    agg_pk = group_->decode(report.agg_pk);
  } catch (const DecodeError& e) {
    v.reason = std::string("malformed report field: ") + e.what();
    return v;
  }
  seen_uids_.insert(report.uid);
  v.accepted = true;
  v.avg = avg;
  auto check = approval::verify_approval_encoded(*group_, agg_pk, avg, report.appr);
  if (!check.ok) {
    // The head alone answers for an invalid approval.
    v.reason = check.detail;
    escalations_.push_back(report.credential);
    return v;
  }
  v.verified = true;
  expected_[report.uid] = {hash_vid_key(agg_pk), report.credential, avg.count};
  averages_[report.uid] = avg;
  return v;
}

AuditResult CloudServer::audit(std::span<const Record> records) {
  transcript_.push_back(encode_records(records));
  AuditResult out;
  if (!seen_lists_.insert(sha256(transcript_.back())).second) {
    out.duplicates = records.size();
    return out;
  }
  for (const auto& rc : records) {
    auto it = expected_.find(rc.uid);
    if (it == expected_.end()) {
      ++out.unknown;
      continue;
    }
    if (record_counts_[rc] >= it->second.members) {
      ++out.duplicates;
      continue;
    }
    ++record_counts_[rc];
    ++out.checked;
    if (rc.key_hash == it->second.key_hash) continue;
    const uint32_t count = ++mismatches_[rc.uid];
    if (count >= t_aud_ && flagged_.insert(rc.uid).second) {
      out.flagged_uids.push_back(rc.uid);
      out.flagged_credentials.push_back(it->second.credential);
    }
  }
  return out;
}

uint32_t CloudServer::mismatches(const Digest& uid) const {
  auto it = mismatches_.find(uid);
  return it == mismatches_.end() ? 0 : it->second;
}

uint64_t identify_bad_head(TrustedAuthority& ta, const Credential& flagged) { return ta.identify(flagged); }

}  // namespace sada::protocol

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sada/approval/agg_key.hpp"
#include "sada/approval/approval.hpp"
#include "sada/approval/messages.hpp"
#include "sada/crypto/rng.hpp"
#include "sada/masking/pairwise.hpp"
#include "sada/masking/recoverable_masking.hpp"

namespace sada::approval {

/// Operation called out of order, or a consumed nonce requested again.
class ProtocolStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A peer's reveal does not match its commitment (or carries an
/// undecryptable share). index names the offending member.
class BindingError : public std::runtime_error {
 public:
  BindingError(uint32_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}
  uint32_t index() const { return index_; }

 private:
  uint32_t index_;
};

enum class SessionState { Fresh, AwaitLcom, AwaitReveals, Revealed, Approved };

struct SessionSetup {
  std::shared_ptr<const Group> group;
  masking::MaskingParams params;
  uint32_t self = 0;
  Digest uid{};
  std::vector<GroupPoint> roster;  // L_pk in member-index order
  size_t nonce_batch = 2;
};

struct RevealSummary {
  GroupPoint agg_R;
  AverageValue avg;
};

/// One member's view of an aggregation event:
///   commit -> reveal (after L_com) -> verify_reveals -> sub_approve
/// and, when the head excludes members, apply_exclusion -> re_approve.
class ApprovalSession {
 public:
  ApprovalSession(SessionSetup setup, schnorr::KeyPair kp,
                  std::map<uint32_t, masking::PairwiseSecret> secrets, Drbg rng);

  SessionState state() const { return state_; }
  uint32_t self() const { return setup_.self; }
  uint32_t size() const { return static_cast<uint32_t>(setup_.roster.size()); }
  const SessionSetup& setup() const { return setup_; }

  /// Masks the datum, draws the nonce batch and returns com_i.
  Digest commit(uint64_t data);
  /// As commit with explicit nonces (one per batch slot).
  Digest commit_with_nonces(uint64_t data, std::vector<Scalar> nonces);

  /// Allowed only once L_com (indexed by member) contains our commitment.
  const RevealMsg& reveal(std::span<const Digest> l_com);

  /// Checks every m_j against com_j, decrypts our shares, and computes R~
  /// and the average. msgs is indexed by member and includes our own.
  RevealSummary verify_reveals(std::span<const RevealMsg> msgs);

  /// Signs the average; refuses anything but the one computed locally.
  SubApproval sub_approve(const AverageValue& avg);

  /// Our share of owner's β, decrypted during verify_reveals.
  uint64_t held_share(uint32_t owner) const;

  /// Accepts reconstructed β' for each excluded member, checks them against
  /// the committed hashes and returns the average over the remaining members.
  /// Throws std::invalid_argument if a β' fails its hash check.
  AverageValue apply_exclusion(std::span<const uint32_t> bad, const std::map<uint32_t, uint64_t>& betas);

  /// Sub-approval over the reduced member set with the next pre-committed
  /// nonce and fresh aggregation coefficients.
  SubApproval re_approve(const AverageValue& avg);

  const AverageValue& average() const { return avg_; }
  const GroupPoint& aggregated_nonce() const { return agg_R_; }
  const AggKey& agg_key() const { return agg_key_; }
  const std::vector<uint32_t>& members() const { return members_; }
  const masking::MaskingOutput& masking_output() const { return mask_; }
  const RevealMsg& own_reveal() const { return reveal_msg_; }
  const Digest& own_commitment() const { return com_; }
  /// m_j as accepted by verify_reveals.
  const RevealMsg& peer_reveal(uint32_t j) const { return peers_.at(j); }
  /// Batch slot the next (re-)approval will use.
  size_t next_slot() const { return next_slot_; }

 private:
  void require(SessionState s, const char* op) const;
  SubApproval sign_slot(size_t slot, const AverageValue& avg);
  GroupPoint nonce_sum(size_t slot) const;

  SessionSetup setup_;
  schnorr::KeyPair kp_;
  std::map<uint32_t, masking::PairwiseSecret> secrets_;
  Drbg rng_;
  SessionState state_ = SessionState::Fresh;

  masking::MaskingOutput mask_;
  std::vector<std::optional<Scalar>> nonces_;
  size_t next_slot_ = 0;
  RevealMsg reveal_msg_;
  Digest com_{};
  std::vector<Digest> l_com_;

  std::vector<RevealMsg> peers_;
  std::map<uint32_t, uint64_t> held_shares_;
  std::vector<uint32_t> members_;  // current member set
  AggKey agg_key_;
  GroupPoint agg_R_;
  AverageValue avg_;
  bool excluded_once_ = false;
};

}  // namespace sada::approval

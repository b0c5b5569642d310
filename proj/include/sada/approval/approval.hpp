#pragma once

#include <span>
#include <string>

#include "sada/approval/messages.hpp"
#include "sada/crypto/group.hpp"
#include "sada/schnorr/schnorr.hpp"

namespace sada::approval {

/// One member's share of the approval, bound to the common nonce R~.
struct SubApproval {
  Scalar s;
  GroupPoint R;  // aggregated nonce R~
};

/// appr = (s~, R~). Same 65-byte layout as a plain signature.
struct ClusterApproval {
  Scalar s;
  GroupPoint R;

  schnorr::SignatureBytes encode(const Group& group) const;
  static ClusterApproval decode(const Group& group, ByteView bytes);
};

/// e = Hash_app(pk~ || R~ || avg).
Scalar approval_challenge(const Group& group, const GroupPoint& agg_pk, const GroupPoint& agg_R,
                          const AverageValue& avg);

/// s_i = k_i + a_i·sk_i·e mod q.
Scalar sub_approval_scalar(const ScalarField& f, const Scalar& k, const Scalar& a, const Scalar& sk,
                           const Scalar& e);

/// s~ = Σ s_i. Throws std::invalid_argument on an empty list or differing R~.
ClusterApproval aggregate_approval(const Group& group, std::span<const SubApproval> subs);

/// g^s~ == R~ + e'·pk~ with e' recomputed from (pk~, R~, avg).
bool verify_approval(const Group& group, const GroupPoint& agg_pk, const AverageValue& avg,
                     const ClusterApproval& appr);

/// As verify_approval for an approval still in wire form.
schnorr::VerifyResult verify_approval_encoded(const Group& group, const GroupPoint& agg_pk,
                                              const AverageValue& avg, ByteView appr_bytes);

}  // namespace sada::approval

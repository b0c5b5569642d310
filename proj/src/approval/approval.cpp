#include "sada/approval/approval.hpp"

#include <stdexcept>

#include "sada/crypto/hash.hpp"

namespace sada::approval {

schnorr::SignatureBytes ClusterApproval::encode(const Group& group) const {
  return schnorr::Signature{s, R}.encode(group);
}

ClusterApproval ClusterApproval::decode(const Group& group, ByteView bytes) {
  auto sig = schnorr::Signature::decode(group, bytes);
  return {sig.s, sig.R};
}

Scalar approval_challenge(const Group& group, const GroupPoint& agg_pk, const GroupPoint& agg_R,
                          const AverageValue& avg) {
  return domain_hash_scalar(group.scalars(), HashTag::App,
                            {agg_pk.bytes(), agg_R.bytes(), avg.encode()});
}

Scalar sub_approval_scalar(const ScalarField& f, const Scalar& k, const Scalar& a, const Scalar& sk,
                           const Scalar& e) {
  return f.add(k, f.mul(f.mul(a, sk), e));
}

ClusterApproval aggregate_approval(const Group& group, std::span<const SubApproval> subs) {
  if (subs.empty()) throw std::invalid_argument("no sub-approvals");
  const auto& f = group.scalars();
  ClusterApproval out{f.zero(), subs.front().R};
  for (const auto& sub : subs) {
    if (!(sub.R == out.R)) throw std::invalid_argument("sub-approvals disagree on R~");
    out.s = f.add(out.s, sub.s);
  }
  return out;
}

bool verify_approval(const Group& group, const GroupPoint& agg_pk, const AverageValue& avg,
                     const ClusterApproval& appr) {
  if (!agg_pk.valid() || !appr.R.valid() || !group.owns(agg_pk) || !group.owns(appr.R)) return false;
  const Scalar e = approval_challenge(group, agg_pk, appr.R, avg);
  return schnorr::check_equation(group, agg_pk, appr.R, appr.s, e);
}

schnorr::VerifyResult verify_approval_encoded(const Group& group, const GroupPoint& agg_pk,
                                              const AverageValue& avg, ByteView appr_bytes) {
  ClusterApproval appr;
  try {
    appr = ClusterApproval::decode(group, appr_bytes);
  } catch (const DecodeError& e) {
    return {false, std::string("malformed approval: ") + e.what()};
  }
  if (!verify_approval(group, agg_pk, avg, appr)) return {false, "approval equation does not hold"};
  return {true, {}};
}

}  // namespace sada::approval

#pragma once

#include <span>
#include <vector>

#include "sada/crypto/group.hpp"

namespace sada::approval {

/// Aggregated cluster key pk~ = Σ a_i·pk_i with a_i = Hash_agg(L_pk || pk_i).
/// keys and coeffs keep the caller's order.
struct AggKey {
  std::vector<GroupPoint> keys;
  std::vector<Scalar> coeffs;
  GroupPoint pk;
  Bytes encoded_list;  // canonical L_pk

  /// Coefficient of a member key; throws std::out_of_range if absent.
  const Scalar& coeff_of(const GroupPoint& key) const;
};

Scalar agg_coefficient(const Group& group, ByteView encoded_list, const GroupPoint& key);

/// Requires at least two distinct keys; throws std::invalid_argument.
AggKey aggregate_key(const Group& group, std::span<const GroupPoint> keys);

/// Same aggregation with caller-supplied coefficients (hash stubbed out).
AggKey aggregate_key_with_coeffs(const Group& group, std::span<const GroupPoint> keys,
                                 std::span<const Scalar> coeffs);

}  // namespace sada::approval

#include "sada/approval/agg_key.hpp"

#include <set>
#include <stdexcept>

#include "sada/crypto/encoding.hpp"
#include "sada/crypto/hash.hpp"

namespace sada::approval {

namespace {

void check_keys(std::span<const GroupPoint> keys) {
  if (keys.size() < 2) throw std::invalid_argument("key aggregation needs at least two keys");
  std::set<PointBytes> seen;
  for (const auto& k : keys) {
    if (!k.valid()) throw std::invalid_argument("empty key in L_pk");
    if (!seen.insert(k.encoding()).second) throw std::invalid_argument("duplicate key in L_pk");
  }
}

}  // namespace

const Scalar& AggKey::coeff_of(const GroupPoint& key) const {
  for (size_t i = 0; i < keys.size(); ++i)
    if (keys[i] == key) return coeffs[i];
  throw std::out_of_range("key not in aggregate");
}

Scalar agg_coefficient(const Group& group, ByteView encoded_list, const GroupPoint& key) {
  return domain_hash_scalar(group.scalars(), HashTag::Agg, {encoded_list, key.bytes()});
}

AggKey aggregate_key_with_coeffs(const Group& group, std::span<const GroupPoint> keys,
                                 std::span<const Scalar> coeffs) {
  check_keys(keys);
  if (coeffs.size() != keys.size()) throw std::invalid_argument("coefficient count mismatch");
  AggKey out;
  out.keys.assign(keys.begin(), keys.end());
  out.coeffs.assign(coeffs.begin(), coeffs.end());
  out.encoded_list = canonical_encode_keys(keys);
  std::vector<MulTerm> terms;
  for (size_t i = 0; i < keys.size(); ++i) terms.push_back({coeffs[i], keys[i]});
  out.pk = group.multi_mul(terms);
  return out;
}

AggKey aggregate_key(const Group& group, std::span<const GroupPoint> keys) {
  check_keys(keys);
  const Bytes list = canonical_encode_keys(keys);
  std::vector<Scalar> coeffs;
  coeffs.reserve(keys.size());
  for (const auto& k : keys) coeffs.push_back(agg_coefficient(group, list, k));
  return aggregate_key_with_coeffs(group, keys, coeffs);
}

}  // namespace sada::approval

#include "sada/crypto/group.hpp"

#include <stdexcept>

namespace sada {

OpCounters& op_counters() {
  thread_local OpCounters counters;
  return counters;
}

const PointBytes& GroupPoint::encoding() const {
  if (!rep_) {
    throw std::logic_error("encoding of an empty GroupPoint");
  }
  return rep_->encoding();
}

bool GroupPoint::is_identity() const {
  const auto& enc = encoding();
  // Both backends encode the identity as 33 zero bytes.
  for (uint8_t b : enc) {
    if (b != 0) return false;
  }
  return true;
}

void Group::check_owned(const GroupPoint& p) const {
  if (!p.valid()) {
    throw std::invalid_argument("empty group point");
  }
  if (!owns(p)) {
    throw std::invalid_argument("point belongs to a different group than " + name());
  }
}

GroupPoint Group::add(const GroupPoint& a, const GroupPoint& b) const {
  check_owned(a);
  check_owned(b);
  ++op_counters().group_additions;
  return add_impl(a, b);
}

GroupPoint Group::mul(const GroupPoint& p, const Scalar& k) const {
  check_owned(p);
  ++op_counters().exponentiations;
  return mul_impl(p, k);
}

GroupPoint Group::mul_gen(const Scalar& k) const {
  ++op_counters().exponentiations;
  return mul_gen_impl(k);
}

GroupPoint Group::mul_gen_add(const Scalar& a, const GroupPoint& p, const Scalar& b) const {
  check_owned(p);
  ++op_counters().multi_exponentiations;
  return mul_gen_add_impl(a, p, b);
}

GroupPoint Group::multi_mul_naive(std::span<const MulTerm> terms) const {
  GroupPoint acc = identity();
  for (const auto& t : terms) {
    acc = add(acc, mul(t.point, t.scalar));
  }
  return acc;
}

std::optional<GroupPoint> Group::try_decode(ByteView bytes) const {
  try {
    return decode(bytes);
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

std::shared_ptr<const Group> toy_group() {
  static const auto group = make_modp_group(23, 11, 2, "toy");
  return group;
}

std::shared_ptr<const Group> group_by_name(std::string_view name) {
  if (name == "secp256k1") return secp256k1_group();
  if (name == "toy") return toy_group();
  throw std::invalid_argument("unknown group: " + std::string(name));
}

}  // namespace sada

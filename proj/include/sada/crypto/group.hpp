#pragma once

#include <array>
#include <compare>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sada/crypto/bytes.hpp"
#include "sada/crypto/scalar.hpp"

namespace sada {

inline constexpr size_t kPointBytes = 33;
using PointBytes = std::array<uint8_t, kPointBytes>;

namespace detail {
/// Backend-specific point representation. Immutable once built; the
/// canonical encoding is computed on first use and cached.
class PointRep {
 public:
  virtual ~PointRep() = default;
  const PointBytes& encoding() const {
    std::call_once(enc_once_, [this] { enc_ = compute_encoding(); });
    return enc_;
  }

 protected:
  virtual PointBytes compute_encoding() const = 0;

 private:
  mutable std::once_flag enc_once_;
  mutable PointBytes enc_{};
};
}  // namespace detail

/// Element of a prime-order group, written additively. Cheap to copy.
class GroupPoint {
 public:
  GroupPoint() = default;
  explicit GroupPoint(std::shared_ptr<const detail::PointRep> rep) : rep_(std::move(rep)) {}

  bool valid() const { return rep_ != nullptr; }
  const PointBytes& encoding() const;
  ByteView bytes() const { return encoding(); }
  bool is_identity() const;
  const detail::PointRep* rep() const { return rep_.get(); }

  friend bool operator==(const GroupPoint& a, const GroupPoint& b) {
    if (!a.valid() || !b.valid()) return a.valid() == b.valid();
    return a.encoding() == b.encoding();
  }
  friend std::strong_ordering operator<=>(const GroupPoint& a, const GroupPoint& b) {
    return a.encoding() <=> b.encoding();
  }

 private:
  std::shared_ptr<const detail::PointRep> rep_;
};

/// One term k·P of a multi-scalar multiplication.
struct MulTerm {
  Scalar scalar;
  GroupPoint point;
};

/// Per-thread operation counters. Simulator metrics read these; nothing in
/// the protocol logic depends on them.
struct OpCounters {
  uint64_t exponentiations = 0;    // single scalar multiplications
  uint64_t multi_exponentiations = 0;
  uint64_t group_additions = 0;
};
OpCounters& op_counters();

/// Prime-order group with generator g. Implementations: secp256k1 (OpenSSL)
/// and explicit Schnorr subgroups of Z_p^* (used for hand-checkable tests).
class Group {
 public:
  explicit Group(U256 order) : field_(std::move(order)) {}
  virtual ~Group() = default;
  Group(const Group&) = delete;
  Group& operator=(const Group&) = delete;

  virtual std::string name() const = 0;
  const ScalarField& scalars() const { return field_; }
  const U256& order() const { return field_.order(); }

  virtual GroupPoint generator() const = 0;
  virtual GroupPoint identity() const = 0;
  GroupPoint add(const GroupPoint& a, const GroupPoint& b) const;
  GroupPoint sub(const GroupPoint& a, const GroupPoint& b) const { return add(a, negate(b)); }
  virtual GroupPoint negate(const GroupPoint& a) const = 0;
  GroupPoint mul(const GroupPoint& p, const Scalar& k) const;
  GroupPoint mul_gen(const Scalar& k) const;
  /// a·g + b·P in one pass; counted as one multi-exponentiation.
  GroupPoint mul_gen_add(const Scalar& a, const GroupPoint& p, const Scalar& b) const;

  /// Σ k_i·P_i via Bos–Coster.
  GroupPoint multi_mul(std::span<const MulTerm> terms) const;
  /// Σ k_i·P_i by one multiplication per term; reference for multi_mul.
  GroupPoint multi_mul_naive(std::span<const MulTerm> terms) const;

  /// Parses a 33-byte encoding, checking group membership.
  virtual GroupPoint decode(ByteView bytes) const = 0;
  std::optional<GroupPoint> try_decode(ByteView bytes) const;

  /// Deterministic point with unknown discrete log relative to g.
  virtual GroupPoint hash_to_point(ByteView seed) const = 0;

  /// True if the point belongs to this group's backend.
  virtual bool owns(const GroupPoint& p) const = 0;

 protected:
  virtual GroupPoint add_impl(const GroupPoint& a, const GroupPoint& b) const = 0;
  virtual GroupPoint mul_impl(const GroupPoint& p, const Scalar& k) const = 0;
  virtual GroupPoint mul_gen_impl(const Scalar& k) const { return mul_impl(generator(), k); }
  virtual GroupPoint mul_gen_add_impl(const Scalar& a, const GroupPoint& p, const Scalar& b) const {
    return add_impl(mul_gen_impl(a), mul_impl(p, b));
  }
  void check_owned(const GroupPoint& p) const;

 private:
  ScalarField field_;
};

/// Schnorr subgroup of Z_p^* of prime order q generated by g.
std::shared_ptr<const Group> make_modp_group(U256 p, U256 q, U256 g, std::string name);
/// secp256k1 via OpenSSL.
std::shared_ptr<const Group> secp256k1_group();
/// p = 23, q = 11, g = 2.
std::shared_ptr<const Group> toy_group();
/// Looks up "secp256k1" or "toy"; throws std::invalid_argument otherwise.
std::shared_ptr<const Group> group_by_name(std::string_view name);

}  // namespace sada

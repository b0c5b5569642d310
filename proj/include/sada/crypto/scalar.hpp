#pragma once

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

#include "sada/crypto/bytes.hpp"

namespace sada {

class Drbg;

using U256 = boost::multiprecision::uint256_t;
using U512 = boost::multiprecision::uint512_t;

inline constexpr size_t kScalarBytes = 32;
using ScalarBytes = std::array<uint8_t, kScalarBytes>;

U256 u256_from_be(ByteView bytes);  // at most 32 bytes
ScalarBytes u256_to_be(const U256& v);

class ScalarField;

/// Element of Z_q. Only a ScalarField can mint one, so the value is always
/// reduced modulo the field order it came from.
class Scalar {
 public:
  Scalar() = default;

  const U256& value() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  friend bool operator==(const Scalar&, const Scalar&) = default;

 private:
  friend class ScalarField;
  explicit Scalar(U256 v) : v_(std::move(v)) {}
  U256 v_{0};
};

/// Arithmetic modulo a prime group order q.
class ScalarField {
 public:
  explicit ScalarField(U256 order);

  const U256& order() const { return q_; }
  size_t order_bits() const { return bits_; }

  Scalar zero() const { return Scalar(0); }
  Scalar one() const { return Scalar(1); }
  Scalar from_u64(uint64_t v) const { return reduce(U256(v)); }
  Scalar reduce(const U256& v) const { return Scalar(v % q_); }
  Scalar reduce_wide(const U512& v) const;
  /// Big-endian bytes of any length, reduced mod q.
  Scalar reduce_bytes(ByteView be) const;
  /// Exactly 32 big-endian bytes with value < q; DecodeError otherwise.
  Scalar decode(ByteView be) const;
  ScalarBytes encode(const Scalar& s) const { return u256_to_be(s.value()); }

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  /// Multiplicative inverse; a must be nonzero.
  Scalar inv(const Scalar& a) const;

  Scalar random(Drbg& rng) const;
  Scalar random_nonzero(Drbg& rng) const;
  /// Nonzero scalar drawn from [1, 2^bits) and then reduced mod q. On small
  /// toy groups the reduction can hit zero, in which case it resamples.
  Scalar random_bits_nonzero(Drbg& rng, size_t bits) const;

 private:
  U256 q_;
  size_t bits_;
};

}  // namespace sada

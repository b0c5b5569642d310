#include "sada/crypto/scalar.hpp"

#include <stdexcept>

#include "sada/crypto/rng.hpp"

namespace sada {

U256 u256_from_be(ByteView bytes) {
  if (bytes.size() > 32) {
    throw DecodeError("integer wider than 256 bits");
  }
  U256 v = 0;
  for (uint8_t b : bytes) {
    v <<= 8;
    v |= b;
  }
  return v;
}

ScalarBytes u256_to_be(const U256& v) {
  ScalarBytes out{};
  U256 t = v;
  for (size_t i = 0; i < out.size(); ++i) {
    out[out.size() - 1 - i] = static_cast<uint8_t>(t & 0xFF);
    t >>= 8;
  }
  return out;
}

ScalarField::ScalarField(U256 order) : q_(std::move(order)) {
  if (q_ < 2) {
    throw std::invalid_argument("scalar field order must be at least 2");
  }
  bits_ = boost::multiprecision::msb(q_) + 1;
}

Scalar ScalarField::reduce_wide(const U512& v) const {
  return Scalar(static_cast<U256>(v % U512(q_)));
}

Scalar ScalarField::reduce_bytes(ByteView be) const {
  U512 v = 0;
  if (be.size() > 64) {
    throw DecodeError("reduce_bytes input wider than 512 bits");
  }
  for (uint8_t b : be) {
    v <<= 8;
    v |= b;
  }
  return reduce_wide(v);
}

Scalar ScalarField::decode(ByteView be) const {
  if (be.size() != kScalarBytes) {
    throw DecodeError("scalar encoding must be 32 bytes");
  }
  U256 v = u256_from_be(be);
  if (v >= q_) {
    throw DecodeError("scalar not reduced modulo group order");
  }
  return Scalar(v);
}

Scalar ScalarField::add(const Scalar& a, const Scalar& b) const {
  U512 s = U512(a.v_) + U512(b.v_);
  if (s >= U512(q_)) s -= U512(q_);
  return Scalar(static_cast<U256>(s));
}

Scalar ScalarField::sub(const Scalar& a, const Scalar& b) const {
  if (a.v_ >= b.v_) return Scalar(a.v_ - b.v_);
  return Scalar(q_ - (b.v_ - a.v_));
}

Scalar ScalarField::neg(const Scalar& a) const {
  if (a.v_ == 0) return a;
  return Scalar(q_ - a.v_);
}

Scalar ScalarField::mul(const Scalar& a, const Scalar& b) const {
  return reduce_wide(U512(a.v_) * U512(b.v_));
}

Scalar ScalarField::inv(const Scalar& a) const {
  if (a.is_zero()) {
    throw std::domain_error("inverse of zero scalar");
  }
  return Scalar(boost::multiprecision::powm(a.v_, q_ - 2, q_));
}

Scalar ScalarField::random(Drbg& rng) const {
  // 64 bytes of entropy reduced mod q leaves negligible bias for any q < 2^256.
  std::array<uint8_t, 64> buf{};
  rng.fill(buf);
  return reduce_bytes(buf);
}

Scalar ScalarField::random_nonzero(Drbg& rng) const {
  for (;;) {
    Scalar s = random(rng);
    if (!s.is_zero()) return s;
  }
}

Scalar ScalarField::random_bits_nonzero(Drbg& rng, size_t bits) const {
  const size_t nbytes = (bits + 7) / 8;
  for (;;) {
    Bytes buf = rng.bytes(nbytes);
    if (bits % 8 != 0) {
      buf[0] &= static_cast<uint8_t>((1u << (bits % 8)) - 1);
    }
    Scalar s = reduce_bytes(buf);
    if (!s.is_zero()) return s;
  }
}

}  // namespace sada

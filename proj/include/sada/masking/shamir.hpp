#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sada {
class Drbg;
}

namespace sada::masking {

struct Share {
  uint32_t x = 0;  // evaluation point, never 0
  uint64_t y = 0;
};

/// Coefficients [secret, a_1, ..., a_{t-1}] with the a_k uniform in GF(p).
std::vector<uint64_t> random_polynomial(uint64_t secret, uint32_t threshold, uint64_t p, Drbg& rng);

/// Horner evaluation over GF(p).
uint64_t eval_polynomial(std::span<const uint64_t> coeffs, uint64_t x, uint64_t p);

/// Lagrange interpolation at x = 0. Throws std::invalid_argument on an
/// empty set, a zero x, or repeated x values.
uint64_t interpolate_at_zero(std::span<const Share> shares, uint64_t p);

}  // namespace sada::masking

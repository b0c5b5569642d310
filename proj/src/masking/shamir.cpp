#include "sada/masking/shamir.hpp"

#include <set>
#include <stdexcept>

#include "sada/crypto/rng.hpp"
#include "sada/masking/modarith.hpp"

namespace sada::masking {

std::vector<uint64_t> random_polynomial(uint64_t secret, uint32_t threshold, uint64_t p, Drbg& rng) {
  if (threshold == 0) throw std::invalid_argument("threshold must be positive");
  std::vector<uint64_t> coeffs;
  coeffs.reserve(threshold);
  coeffs.push_back(secret % p);
  for (uint32_t k = 1; k < threshold; ++k) coeffs.push_back(rng.uniform(p));
  return coeffs;
}

uint64_t eval_polynomial(std::span<const uint64_t> coeffs, uint64_t x, uint64_t p) {
  uint64_t acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = add_mod(mul_mod(acc, x, p), *it, p);
  }
  return acc;
}

uint64_t interpolate_at_zero(std::span<const Share> shares, uint64_t p) {
  if (shares.empty()) throw std::invalid_argument("no shares");
  std::set<uint64_t> seen;
  for (const auto& s : shares) {
    if (s.x % p == 0) throw std::invalid_argument("share at x = 0");
    if (!seen.insert(s.x % p).second) throw std::invalid_argument("duplicate share index");
  }
  uint64_t result = 0;
  for (const auto& si : shares) {
    // basis_i(0) = prod_{j != i} x_j / (x_j - x_i)
    uint64_t num = 1;
    uint64_t den = 1;
    for (const auto& sj : shares) {
      if (sj.x == si.x) continue;
      num = mul_mod(num, sj.x, p);
      den = mul_mod(den, sub_mod(sj.x, si.x, p), p);
    }
    const uint64_t basis = mul_mod(num, inv_mod(den, p), p);
    result = add_mod(result, mul_mod(si.y % p, basis, p), p);
  }
  return result;
}

}  // namespace sada::masking

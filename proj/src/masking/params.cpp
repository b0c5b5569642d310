#include "sada/masking/params.hpp"

#include <stdexcept>
#include <string>

#include "sada/masking/modarith.hpp"

namespace sada::masking {

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

void MaskingParams::validate() const {
  constexpr uint64_t kLimit = uint64_t{1} << 63;
  if (n_v < 2) {
    throw std::invalid_argument("n_v must be at least 2");
  }
  // A two-member cluster can only use t_sm = 1; any larger cluster needs a
  // real threshold.
  const uint32_t min_t = n_v == 2 ? 1 : 2;
  if (t_sm < min_t || t_sm > n_v - 1) {
    throw std::invalid_argument("t_sm must satisfy " + std::to_string(min_t) +
                                " <= t_sm <= n_v - 1 (t_sm=" + std::to_string(t_sm) +
                                ", n_v=" + std::to_string(n_v) + ")");
  }
  if (p_mk < 2 || p_mk >= kLimit || p_sm >= kLimit) {
    throw std::invalid_argument("moduli must lie in [2, 2^63)");
  }
  if (p_sm <= p_mk) {
    throw std::invalid_argument("p_sm must exceed p_mk");
  }
  if (!is_prime_u64(p_sm)) {
    throw std::invalid_argument("p_sm must be prime");
  }
  if (p_sm <= n_v) {
    throw std::invalid_argument("p_sm must exceed n_v so share points are distinct");
  }
}

}  // namespace sada::masking

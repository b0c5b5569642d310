#pragma once

#include <cstdint>
#include <stdexcept>

// Arithmetic in Z_m for moduli below 2^63.
namespace sada::masking {

inline uint64_t add_mod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) + b) % m);
}

inline uint64_t sub_mod(uint64_t a, uint64_t b, uint64_t m) {
  a %= m;
  b %= m;
  return a >= b ? a - b : m - (b - a);
}

inline uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Inverse modulo a prime p.
inline uint64_t inv_mod(uint64_t a, uint64_t p) {
  if (a % p == 0) throw std::domain_error("inverse of zero");
  return pow_mod(a, p - 2, p);
}

/// Deterministic Miller–Rabin, exact for all 64-bit inputs.
bool is_prime_u64(uint64_t n);

}  // namespace sada::masking

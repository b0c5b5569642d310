#pragma once

#include <cstddef>
#include <cstdint>

namespace sada::masking {

/// 2^61 - 1.
inline constexpr uint64_t kDefaultMaskModulus = (uint64_t{1} << 61) - 1;
/// Smallest prime above kDefaultMaskModulus.
inline constexpr uint64_t kDefaultShareField = 2305843009213693967ULL;

struct MaskingParams {
  uint64_t p_mk = kDefaultMaskModulus;  // data and mask modulus
  uint64_t p_sm = kDefaultShareField;   // prime field for Shamir shares
  uint32_t t_sm = 10;                   // reconstruction threshold
  uint32_t n_v = 20;                    // cluster size

  /// Throws std::invalid_argument unless 2 <= t_sm <= n_v - 1 (t_sm = 1 is
  /// tolerated only for n_v = 2), p_sm is a prime above p_mk, and both moduli
  /// are below 2^63.
  void validate() const;

  /// Wire width of one share: 2 bytes when p_sm < 2^16, else 8.
  size_t share_width() const { return p_sm < (uint64_t{1} << 16) ? 2 : 8; }

  static MaskingParams production(uint32_t n_v, uint32_t t_sm) { return {kDefaultMaskModulus, kDefaultShareField, t_sm, n_v}; }
  static MaskingParams toy(uint32_t n_v, uint32_t t_sm) { return {97, 101, t_sm, n_v}; }
};

}  // namespace sada::masking

#pragma once

#include <cstdint>
#include <map>
#include <span>

#include "sada/crypto/bytes.hpp"
#include "sada/crypto/scalar.hpp"
#include "sada/masking/params.hpp"
#include "sada/masking/shamir.hpp"

namespace sada {
class Drbg;
}

namespace sada::masking {

/// Pairwise masks seen by one member, keyed by peer index (0-based).
using MaskMap = std::map<uint32_t, U256>;

/// Member indices are 0-based; member j's share of anyone's β sits at
/// x = j + 1.
inline uint32_t share_point(uint32_t member) { return member + 1; }

struct MaskingOutput {
  uint64_t c = 0;                      // masked datum
  Digest h{};                          // Hash_mask(beta)
  std::map<uint32_t, uint64_t> shares; // holder index -> f(holder + 1)
  uint64_t beta = 0;                   // kept by the owner only
};

/// β_i = Σ_{j>i} α_ij − Σ_{j<i} α_ji (mod p_mk). Every j ≠ self in
/// [0, n_v) must be present; throws std::invalid_argument otherwise.
uint64_t compute_beta(uint32_t self, const MaskMap& masks, const MaskingParams& params);

/// Masks data and Shamir-shares β among the other members.
MaskingOutput mask_data(uint32_t self, uint64_t data, const MaskingParams& params,
                        const MaskMap& masks, Drbg& rng);

/// As mask_data, with the non-constant coefficients of the sharing
/// polynomial supplied (exactly t_sm − 1 of them).
MaskingOutput mask_data_with_polynomial(uint32_t self, uint64_t data, const MaskingParams& params,
                                        const MaskMap& masks,
                                        std::span<const uint64_t> higher_coeffs);

/// Σ c_i mod p_mk; requires exactly n_v values.
uint64_t sum_masked(std::span<const uint64_t> cs, const MaskingParams& params);

/// Lagrange reconstruction over GF(p_sm). Requires at least t_sm shares
/// with distinct nonzero x.
uint64_t reconstruct_beta(std::span<const Share> shares, const MaskingParams& params);

Digest hash_mask(uint64_t beta);
bool verify_beta(uint64_t beta, const Digest& h);

/// sum_old − c_re + β_re (mod p_mk).
uint64_t exclude_and_resum(uint64_t sum_old, uint64_t c_re, uint64_t beta_re,
                           const MaskingParams& params);

}  // namespace sada::masking

#include "sada/masking/recoverable_masking.hpp"

#include <stdexcept>
#include <string>
#include <vector>

#include "sada/crypto/hash.hpp"
#include "sada/crypto/rng.hpp"
#include "sada/masking/modarith.hpp"

namespace sada::masking {

namespace {

uint64_t reduce_alpha(const U256& alpha, uint64_t p) {
  return static_cast<uint64_t>(alpha % p);
}

void check_inputs(uint32_t self, uint64_t data, const MaskingParams& params) {
  if (self >= params.n_v) throw std::invalid_argument("member index out of range");
  if (data >= params.p_mk) throw std::invalid_argument("data out of range [0, p_mk)");
}

}  // namespace

uint64_t compute_beta(uint32_t self, const MaskMap& masks, const MaskingParams& params) {
  const uint64_t p = params.p_mk;
  uint64_t beta = 0;
  for (uint32_t j = 0; j < params.n_v; ++j) {
    if (j == self) continue;
    auto it = masks.find(j);
    if (it == masks.end()) {
      throw std::invalid_argument("missing mask for peer " + std::to_string(j));
    }
    const uint64_t a = reduce_alpha(it->second, p);
    beta = j > self ? add_mod(beta, a, p) : sub_mod(beta, a, p);
  }
  return beta;
}

MaskingOutput mask_data_with_polynomial(uint32_t self, uint64_t data, const MaskingParams& params,
                                        const MaskMap& masks,
                                        std::span<const uint64_t> higher_coeffs) {
  check_inputs(self, data, params);
  if (higher_coeffs.size() + 1 != params.t_sm) {
    throw std::invalid_argument("polynomial must have t_sm coefficients");
  }
  MaskingOutput out;
  out.beta = compute_beta(self, masks, params);
  out.c = add_mod(data, out.beta, params.p_mk);
  out.h = hash_mask(out.beta);

  std::vector<uint64_t> coeffs;
  coeffs.reserve(params.t_sm);
  coeffs.push_back(out.beta);
  for (uint64_t a : higher_coeffs) coeffs.push_back(a % params.p_sm);
  for (uint32_t j = 0; j < params.n_v; ++j) {
    if (j == self) continue;
    out.shares[j] = eval_polynomial(coeffs, share_point(j), params.p_sm);
  }
  return out;
}

MaskingOutput mask_data(uint32_t self, uint64_t data, const MaskingParams& params,
                        const MaskMap& masks, Drbg& rng) {
  std::vector<uint64_t> higher;
  for (uint32_t k = 1; k < params.t_sm; ++k) higher.push_back(rng.uniform(params.p_sm));
  return mask_data_with_polynomial(self, data, params, masks, higher);
}

uint64_t sum_masked(std::span<const uint64_t> cs, const MaskingParams& params) {
  if (cs.size() != params.n_v) {
    throw std::invalid_argument("expected " + std::to_string(params.n_v) + " masked values, got " +
                                std::to_string(cs.size()));
  }
  uint64_t sum = 0;
  for (uint64_t c : cs) sum = add_mod(sum, c, params.p_mk);
  return sum;
}

uint64_t reconstruct_beta(std::span<const Share> shares, const MaskingParams& params) {
  if (shares.size() < params.t_sm) {
    throw std::invalid_argument("need at least t_sm shares");
  }
  return interpolate_at_zero(shares, params.p_sm);
}

Digest hash_mask(uint64_t beta) {
  Bytes enc;
  append_u64_be(enc, beta);
  return domain_hash(HashTag::Mask, {enc});
}

bool verify_beta(uint64_t beta, const Digest& h) { return hash_mask(beta) == h; }

uint64_t exclude_and_resum(uint64_t sum_old, uint64_t c_re, uint64_t beta_re,
                           const MaskingParams& params) {
  const uint64_t p = params.p_mk;
  return add_mod(sub_mod(sum_old, c_re, p), beta_re % p, p);
}

}  // namespace sada::masking

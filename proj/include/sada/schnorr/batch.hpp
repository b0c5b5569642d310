#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sada/schnorr/schnorr.hpp"

namespace sada::schnorr {

struct BatchItem {
  GroupPoint pk;
  Bytes message;
  Signature sig;
};

struct BatchOutcome {
  bool valid = false;
  /// Set when an item could not be checked at all (empty or foreign point).
  std::optional<size_t> malformed_index;
  explicit operator bool() const { return valid; }
};

/// Bit length of the random batch weights a_i (the first weight is 1).
inline constexpr size_t kBatchWeightBits = 128;

/// Random-linear-combination batch check
///   (Σ a_i s_i)·g == Σ a_i R_i + Σ (a_i e_i)·pk_i
/// evaluated as a single Bos–Coster multi-exponentiation. An empty batch is
/// valid.
BatchOutcome batch_verify(const Group& group, std::span<const BatchItem> items, Drbg& rng);

/// Same equation computed term by term with one exponentiation per factor.
/// Slow; exists as the reference the fast path is tested against.
BatchOutcome batch_verify_naive(const Group& group, std::span<const BatchItem> items, Drbg& rng);

struct IdentifyStats {
  size_t batch_checks = 0;
  size_t individual_checks = 0;
};

/// Binary-search identification: split the batch in halves, re-check each
/// half with fresh weights, and fall back to individual verification at
/// single items. Returns sorted indices of items whose signature fails.
std::vector<size_t> identify_bad_signatures(const Group& group, std::span<const BatchItem> items,
                                            Drbg& rng, IdentifyStats* stats = nullptr);

}  // namespace sada::schnorr

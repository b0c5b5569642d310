#pragma once

#include <cstdint>
#include <limits>
#include <span>

#include "sada/crypto/bytes.hpp"

namespace sada {

/// Deterministic random bit generator: SHA-256 over (seed, stream, counter).
/// Two instances built from the same seed and stream produce identical
/// output, which is what makes simulator runs reproducible.
///
/// Satisfies std::uniform_random_bit_generator.
class Drbg {
 public:
  using result_type = uint64_t;

  explicit Drbg(uint64_t seed, uint64_t stream = 0);

  /// Child generator with an independent stream, derived from this one's key.
  Drbg fork(uint64_t label) const;

  void fill(std::span<uint8_t> out);
  Bytes bytes(size_t n);
  uint64_t next_u64();
  /// Uniform in [0, bound). bound must be nonzero.
  uint64_t uniform(uint64_t bound);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

 private:
  Drbg(const Digest& key) : key_(key) {}
  void refill();

  Digest key_{};
  uint64_t counter_ = 0;
  Digest block_{};
  size_t used_ = block_.size();
};

}  // namespace sada

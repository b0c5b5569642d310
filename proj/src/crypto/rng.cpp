#include "sada/crypto/rng.hpp"

#include <openssl/sha.h>

namespace sada {
namespace {

Digest sha256_of(const Bytes& in) {
  Digest out{};
  SHA256(in.data(), in.size(), out.data());
  return out;
}

}  // namespace

Drbg::Drbg(uint64_t seed, uint64_t stream) {
  Bytes in = to_bytes("sada/drbg");
  append_u64_be(in, seed);
  append_u64_be(in, stream);
  key_ = sha256_of(in);
}

Drbg Drbg::fork(uint64_t label) const {
  Bytes in = to_bytes("sada/drbg/fork");
  append(in, key_);
  append_u64_be(in, label);
  return Drbg(sha256_of(in));
}

void Drbg::refill() {
  Bytes in(key_.begin(), key_.end());
  append_u64_be(in, counter_++);
  block_ = sha256_of(in);
  used_ = 0;
}

void Drbg::fill(std::span<uint8_t> out) {
  for (auto& b : out) {
    if (used_ == block_.size()) refill();
    b = block_[used_++];
  }
}

Bytes Drbg::bytes(size_t n) {
  Bytes out(n);
  fill(out);
  return out;
}

uint64_t Drbg::next_u64() {
  std::array<uint8_t, 8> buf{};
  fill(buf);
  uint64_t v = 0;
  for (uint8_t b : buf) v = (v << 8) | b;
  return v;
}

uint64_t Drbg::uniform(uint64_t bound) {
  // Rejection sampling: discard the low (2^64 mod bound) values.
  const uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    uint64_t v = next_u64();
    if (v >= threshold) return v % bound;
  }
}

}  // namespace sada

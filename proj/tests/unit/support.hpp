#pragma once

#include <cstdint>

#include "sada/crypto/bytes.hpp"
#include "sada/crypto/group.hpp"

namespace sada::testing {

// Toy-group element with the given residue; decode checks membership.
inline GroupPoint toy_point(const Group& g, uint64_t v) {
  Bytes enc(kPointBytes, 0);
  enc[0] = 0x02;
  for (int i = 0; i < 8; ++i) enc[kPointBytes - 1 - i] = static_cast<uint8_t>(v >> (8 * i));
  return g.decode(enc);
}

// Residue of a toy-group element, read back out of its encoding.
inline uint64_t toy_value(const GroupPoint& p) {
  uint64_t v = 0;
  const auto& enc = p.encoding();
  for (size_t i = kPointBytes - 8; i < kPointBytes; ++i) v = (v << 8) | enc[i];
  return v;
}

inline uint64_t powmod(uint64_t b, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

}  // namespace sada::testing

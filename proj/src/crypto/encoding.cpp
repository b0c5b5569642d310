#include "sada/crypto/encoding.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "sada/crypto/hash.hpp"

namespace sada {

Bytes canonical_encode_keys(std::span<const GroupPoint> keys) {
  if (keys.empty()) {
    throw std::invalid_argument("cannot encode an empty key list");
  }
  std::vector<PointBytes> sorted;
  sorted.reserve(keys.size());
  for (const auto& k : keys) {
    if (!k.valid()) throw std::invalid_argument("invalid point in key list");
    sorted.push_back(k.encoding());
  }
  std::sort(sorted.begin(), sorted.end());
  Bytes out;
  out.reserve(4 + sorted.size() * kPointBytes);
  append_u32_be(out, static_cast<uint32_t>(sorted.size()));
  for (const auto& enc : sorted) append(out, enc);
  return out;
}

Digest compute_uid(std::span<const GroupPoint> keys, uint64_t tmp1) {
  const Bytes list = canonical_encode_keys(keys);
  Bytes ts;
  append_u64_be(ts, tmp1);
  return domain_hash(HashTag::Uid, {list, ts});
}

}  // namespace sada

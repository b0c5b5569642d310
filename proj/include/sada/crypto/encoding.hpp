#pragma once

#include <cstdint>
#include <span>

#include "sada/crypto/bytes.hpp"
#include "sada/crypto/group.hpp"

namespace sada {

/// Order-independent encoding of a key list: u32 count followed by the
/// compressed keys sorted ascending by their bytes. Throws
/// std::invalid_argument on an empty list or an empty point.
Bytes canonical_encode_keys(std::span<const GroupPoint> keys);

/// Event identifier: Hash_uid(canonical key list || tmp1).
Digest compute_uid(std::span<const GroupPoint> keys, uint64_t tmp1);

}  // namespace sada

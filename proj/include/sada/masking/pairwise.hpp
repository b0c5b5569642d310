#pragma once

#include <cstdint>

#include "sada/crypto/bytes.hpp"
#include "sada/crypto/group.hpp"
#include "sada/crypto/symmetric.hpp"
#include "sada/schnorr/schnorr.hpp"

namespace sada::masking {

/// What one member shares with one peer for a given aggregation event.
struct PairwiseSecret {
  uint32_t peer = 0;
  U256 alpha;  // uniform 256-bit mask, reduced mod p_mk when used
  SymKey key{};
};

/// Diffie–Hellman point sk·peer_pk. Throws std::invalid_argument if the
/// peer key is the identity, foreign to the group, or equal to our own key.
GroupPoint dh_shared_point(const Group& group, const schnorr::KeyPair& mine,
                           const GroupPoint& peer_pk);

/// Splits a shared point into (alpha, key) bound to an event context.
PairwiseSecret derive_pairwise(const GroupPoint& shared, uint32_t peer, ByteView context);

/// dh_shared_point followed by derive_pairwise.
PairwiseSecret agree_pairwise(const Group& group, const schnorr::KeyPair& mine, uint32_t peer,
                              const GroupPoint& peer_pk, ByteView context);

}  // namespace sada::masking

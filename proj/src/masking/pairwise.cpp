#include "sada/masking/pairwise.hpp"

#include <algorithm>
#include <stdexcept>

#include "sada/crypto/hash.hpp"

namespace sada::masking {

GroupPoint dh_shared_point(const Group& group, const schnorr::KeyPair& mine,
                           const GroupPoint& peer_pk) {
  if (!peer_pk.valid() || !group.owns(peer_pk)) {
    throw std::invalid_argument("peer key is not a point of this group");
  }
  if (peer_pk.is_identity()) throw std::invalid_argument("peer key is the identity");
  if (peer_pk == mine.pk) throw std::invalid_argument("peer key equals own key");
  return group.mul(peer_pk, mine.sk);
}

PairwiseSecret derive_pairwise(const GroupPoint& shared, uint32_t peer, ByteView context) {
  PairwiseSecret out;
  out.peer = peer;
  const Digest a = domain_hash(HashTag::Kdf, {as_view("mask"), shared.bytes(), context});
  out.alpha = u256_from_be(a);
  const Digest k = domain_hash(HashTag::Kdf, {as_view("key"), shared.bytes(), context});
  std::copy(k.begin(), k.end(), out.key.begin());
  return out;
}

PairwiseSecret agree_pairwise(const Group& group, const schnorr::KeyPair& mine, uint32_t peer,
                              const GroupPoint& peer_pk, ByteView context) {
  return derive_pairwise(dh_shared_point(group, mine, peer_pk), peer, context);
}

}  // namespace sada::masking

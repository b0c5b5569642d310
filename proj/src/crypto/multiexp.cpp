#include <queue>
#include <vector>

#include "sada/crypto/group.hpp"

namespace sada {
namespace {

struct HeapEntry {
  U256 k;
  GroupPoint p;
  bool operator<(const HeapEntry& o) const { return k < o.k; }
};

// k·P by double-and-add over group additions. Cheaper than a full
// constant-time multiplication when k is small, which is the common case
// inside Bos–Coster once the scalars have been whittled down.
GroupPoint double_and_add(const Group& group, const GroupPoint& p, U256 k) {
  GroupPoint acc = group.identity();
  GroupPoint base = p;
  while (k != 0) {
    if ((k & 1) != 0) acc = group.add(acc, base);
    k >>= 1;
    if (k != 0) base = group.add(base, base);
  }
  return acc;
}

}  // namespace

GroupPoint Group::multi_mul(std::span<const MulTerm> terms) const {
  ++op_counters().multi_exponentiations;
  std::priority_queue<HeapEntry> heap;
  for (const auto& t : terms) {
    check_owned(t.point);
    if (!t.scalar.is_zero() && !t.point.is_identity()) {
      heap.push({t.scalar.value(), t.point});
    }
  }
  if (heap.empty()) return identity();

  // Bos–Coster: with a1 >= a2 the largest two terms, rewrite
  //   a1·P1 + a2·P2 = (a1 mod a2)·P1 + a2·(P2 + floor(a1/a2)·P1).
  while (heap.size() > 1) {
    HeapEntry first = heap.top();
    heap.pop();
    HeapEntry second = heap.top();
    heap.pop();
    const U256 quotient = first.k / second.k;
    const U256 rem = first.k % second.k;
    GroupPoint shifted = quotient == 1 ? first.p : double_and_add(*this, first.p, quotient);
    second.p = add(second.p, shifted);
    heap.push(std::move(second));
    if (rem != 0) {
      first.k = rem;
      heap.push(std::move(first));
    }
  }
  const HeapEntry& last = heap.top();
  return double_and_add(*this, last.p, last.k);
}

}  // namespace sada

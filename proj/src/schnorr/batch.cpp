#include "sada/schnorr/batch.hpp"

namespace sada::schnorr {
namespace {

std::optional<size_t> find_malformed(const Group& group, std::span<const BatchItem> items) {
  for (size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    if (!it.pk.valid() || !it.sig.R.valid() || !group.owns(it.pk) || !group.owns(it.sig.R)) {
      return i;
    }
  }
  return std::nullopt;
}

std::vector<Scalar> draw_weights(const Group& group, size_t n, Drbg& rng) {
  std::vector<Scalar> w;
  w.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    w.push_back(i == 0 ? group.scalars().one()
                       : group.scalars().random_bits_nonzero(rng, kBatchWeightBits));
  }
  return w;
}

void search(const Group& group, std::span<const BatchItem> items, size_t offset, Drbg& rng,
            IdentifyStats& stats, std::vector<size_t>& bad) {
  if (items.empty()) return;
  if (items.size() == 1) {
    ++stats.individual_checks;
    if (!verify(group, items[0].pk, items[0].message, items[0].sig)) bad.push_back(offset);
    return;
  }
  ++stats.batch_checks;
  if (batch_verify(group, items, rng)) return;
  const size_t left = items.size() / 2;
  search(group, items.first(left), offset, rng, stats, bad);
  search(group, items.subspan(left), offset + left, rng, stats, bad);
}

}  // namespace

BatchOutcome batch_verify(const Group& group, std::span<const BatchItem> items, Drbg& rng) {
  if (items.empty()) return {true, std::nullopt};
  if (auto bad = find_malformed(group, items)) return {false, bad};

  const auto& f = group.scalars();
  const std::vector<Scalar> w = draw_weights(group, items.size(), rng);
  std::vector<MulTerm> terms;
  terms.reserve(2 * items.size() + 1);
  Scalar g_coeff = f.zero();
  for (size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    const Scalar e = challenge(group, it.pk, it.sig.R, it.message);
    g_coeff = f.add(g_coeff, f.mul(w[i], it.sig.s));
    terms.push_back({f.neg(w[i]), it.sig.R});
    terms.push_back({f.neg(f.mul(w[i], e)), it.pk});
  }
  terms.push_back({g_coeff, group.generator()});
  return {group.multi_mul(terms).is_identity(), std::nullopt};
}

BatchOutcome batch_verify_naive(const Group& group, std::span<const BatchItem> items, Drbg& rng) {
  if (items.empty()) return {true, std::nullopt};
  if (auto bad = find_malformed(group, items)) return {false, bad};

  const auto& f = group.scalars();
  const std::vector<Scalar> w = draw_weights(group, items.size(), rng);
  GroupPoint lhs = group.identity();
  GroupPoint rhs = group.identity();
  for (size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    const Scalar e = challenge(group, it.pk, it.sig.R, it.message);
    lhs = group.add(lhs, group.mul_gen(f.mul(it.sig.s, w[i])));
    const GroupPoint inner = group.add(it.sig.R, group.mul(it.pk, e));
    rhs = group.add(rhs, group.mul(inner, w[i]));
  }
  return {lhs == rhs, std::nullopt};
}

std::vector<size_t> identify_bad_signatures(const Group& group, std::span<const BatchItem> items,
                                            Drbg& rng, IdentifyStats* stats) {
  IdentifyStats local;
  std::vector<size_t> bad;
  search(group, items, 0, rng, stats ? *stats : local, bad);
  return bad;
}

}  // namespace sada::schnorr

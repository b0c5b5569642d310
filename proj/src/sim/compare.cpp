#include "sada/sim/compare.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>

#include "sada/approval/agg_key.hpp"
#include "sada/approval/approval.hpp"
#include "sada/precheck/agg_tree.hpp"
#include "sada/schnorr/schnorr.hpp"

namespace sada::sim {

uint64_t tree_count_oracle(uint32_t n, const std::set<uint32_t>& bad) {
  const auto any_bad = [&](uint32_t b, uint32_t e) {
    auto it = bad.lower_bound(b);
    return it != bad.end() && *it < e;
  };
  // checks below a node already known to fail
  std::function<uint64_t(uint32_t, uint32_t)> below = [&](uint32_t b, uint32_t e) -> uint64_t {
    if (e - b == 1) return 0;
    const uint32_t m = b + (e - b) / 2;
    const bool left = any_bad(b, m), right = any_bad(m, e);
    uint64_t c = 1 + (left ? 1 : 0);
    if (left) c += below(b, m);
    if (right) c += below(m, e);
    return c;
  };
  return bad.empty() ? 1 : 1 + below(0, n);
}

namespace {

struct Leaf {
  GroupPoint pk;  // a_i·pk_i
  Scalar s;
  GroupPoint R;
};

IdentSummary summarize(const std::vector<IdentTrial>& trials, uint64_t IdentCounts::*field) {
  IdentSummary s;
  if (trials.empty()) return s;
  s.min = UINT64_MAX;
  double total = 0;
  for (const auto& t : trials) {
    const uint64_t v = t.counts.*field;
    total += static_cast<double>(v);
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = total / static_cast<double>(trials.size());
  return s;
}

}  // namespace

IdentTable compare_identification(uint32_t n_v, uint32_t n_bad, uint32_t trials, uint64_t seed,
                                  const std::string& group_name) {
  if (n_v < 2) throw std::invalid_argument("n_v must be at least 2");
  if (n_bad > n_v) throw std::invalid_argument("n_bad exceeds n_v");
  auto group = group_by_name(group_name);
  const Group& g = *group;
  const auto& f = g.scalars();
  Drbg rng(seed);

  // One honest approval; trials only swap in corrupted scalars.
  std::vector<schnorr::KeyPair> kps;
  std::vector<GroupPoint> keys;
  std::set<GroupPoint> seen;
  while (keys.size() < n_v) {
    auto kp = schnorr::KeyPair::generate(g, rng);
    if (!seen.insert(kp.pk).second) continue;
    keys.push_back(kp.pk);
    kps.push_back(kp);
  }
  const auto agg = approval::aggregate_key(g, keys);
  std::vector<Scalar> k(n_v), coeffs(n_v), s(n_v);
  std::vector<GroupPoint> R(n_v);
  GroupPoint agg_R = g.identity();
  for (uint32_t i = 0; i < n_v; ++i) {
    k[i] = f.random_nonzero(rng);
    R[i] = g.mul_gen(k[i]);
    agg_R = g.add(agg_R, R[i]);
    coeffs[i] = agg.coeff_of(keys[i]);
  }
  const approval::AverageValue avg{rng.uniform(1'000'000), n_v};
  const Scalar e = approval::approval_challenge(g, agg.pk, agg_R, avg);
  for (uint32_t i = 0; i < n_v; ++i) s[i] = approval::sub_approval_scalar(f, k[i], coeffs[i], kps[i].sk, e);
  const auto honest = precheck::AggTree::build(g, keys, coeffs, s, R);

  IdentTable table;
  table.n_v = n_v;
  table.n_bad = n_bad;
  table.seed = seed;
  for (uint32_t t = 0; t < trials; ++t) {
    std::vector<uint32_t> idx(n_v);
    for (uint32_t i = 0; i < n_v; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::set<uint32_t> bad(idx.begin(), idx.begin() + n_bad);
    auto corrupted = s;
    for (uint32_t b : bad) corrupted[b] = f.add(corrupted[b], f.random_nonzero(rng));
    const auto tree = honest.with_scalars(corrupted);

    IdentTrial trial;
    trial.bad.assign(bad.begin(), bad.end());

    precheck::CheckStats st;
    const auto located = precheck::locate_invalid(tree, avg, st);
    trial.counts.tree = st.node_verifications;
    trial.counts.tree_visited = st.nodes_visited;

    std::vector<Leaf> leaves(n_v);
    for (const auto& node : tree.nodes()) {
      if (node.is_leaf()) leaves[node.begin] = {node.pk, node.s, node.R};
    }
    const Scalar te = tree.challenge(avg);

    // Halving without cached sums: each checked range is re-aggregated.
    std::vector<size_t> binary_bad;
    std::function<void(uint32_t, uint32_t)> halve = [&](uint32_t b, uint32_t end) {
      GroupPoint pk = leaves[b].pk, r = leaves[b].R;
      Scalar sum = leaves[b].s;
      for (uint32_t i = b + 1; i < end; ++i) {
        pk = g.add(pk, leaves[i].pk);
        r = g.add(r, leaves[i].R);
        sum = f.add(sum, leaves[i].s);
        trial.counts.binary_additions += 3;
      }
      ++trial.counts.binary;
      if (schnorr::check_equation(g, pk, r, sum, te)) return;
      if (end - b == 1) {
        binary_bad.push_back(b);
        return;
      }
      const uint32_t m = b + (end - b) / 2;
      halve(b, m);
      halve(m, end);
    };
    halve(0, n_v);

    std::vector<size_t> single_bad;
    for (uint32_t i = 0; i < n_v; ++i) {
      ++trial.counts.one_by_one;
      if (!schnorr::check_equation(g, leaves[i].pk, leaves[i].R, leaves[i].s, te)) single_bad.push_back(i);
    }
    trial.counts.oracle = tree_count_oracle(n_v, bad);

    const std::vector<size_t> expect(bad.begin(), bad.end());
    trial.located = located == expect && single_bad == expect && binary_bad == expect;
    if (trial.counts.oracle != trial.counts.tree) ++table.oracle_mismatches;
    if (!trial.located) ++table.location_failures;
    table.trials.push_back(std::move(trial));
  }
  table.tree = summarize(table.trials, &IdentCounts::tree);
  table.binary = summarize(table.trials, &IdentCounts::binary);
  table.one_by_one = summarize(table.trials, &IdentCounts::one_by_one);
  return table;
}

nlohmann::json IdentTable::to_json() const {
  const auto sj = [](const IdentSummary& s) { return nlohmann::json{{"mean", s.mean}, {"min", s.min}, {"max", s.max}}; };
  return {{"n_v", n_v},
          {"n_bad", n_bad},
          {"seed", seed},
          {"trials", trials.size()},
          {"tree", sj(tree)},
          {"binary_search", sj(binary)},
          {"one_by_one", sj(one_by_one)},
          {"oracle_mismatches", oracle_mismatches},
          {"location_failures", location_failures}};
}

std::string IdentTable::format() const {
  std::ostringstream out;
  char line[160];
  out << "n_v=" << n_v << " n_bad=" << n_bad << " trials=" << trials.size() << " seed=" << seed << "\n";
  std::snprintf(line, sizeof line, "%-26s %10s %6s %6s\n", "method", "mean", "min", "max");
  out << line;
  const auto row = [&](const char* name, const IdentSummary& s) {
    std::snprintf(line, sizeof line, "%-26s %10.2f %6llu %6llu\n", name, s.mean,
                  static_cast<unsigned long long>(s.min), static_cast<unsigned long long>(s.max));
    out << line;
  };
  row("tree descent", tree);
  row("binary search (no trees)", binary);
  row("one-by-one", one_by_one);
  out << "tree vs oracle mismatches: " << oracle_mismatches << "\n";
  out << "location failures: " << location_failures << "\n";
  return out.str();
}

}  // namespace sada::sim

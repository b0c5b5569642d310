#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace sada::sim {

/// Equation evaluations needed to find the invalid sub-approvals of one
/// corrupted approval, per strategy.
struct IdentCounts {
  uint64_t tree = 0;              // cached trees, right sibling inferred
  uint64_t tree_visited = 0;      // tree nodes touched, inferred ones included
  uint64_t binary = 0;            // recursive halving without cached trees
  uint64_t binary_additions = 0;  // group/scalar additions to rebuild each checked aggregate
  uint64_t one_by_one = 0;
  uint64_t oracle = 0;            // tree count from the combinatorial model
};

struct IdentTrial {
  std::vector<uint32_t> bad;
  IdentCounts counts;
  bool located = false;  // every strategy returned exactly the corrupted set
};

struct IdentSummary {
  double mean = 0;
  uint64_t min = 0;
  uint64_t max = 0;
};

struct IdentTable {
  uint32_t n_v = 0;
  uint32_t n_bad = 0;
  uint64_t seed = 0;
  std::vector<IdentTrial> trials;
  IdentSummary tree, binary, one_by_one;
  uint64_t oracle_mismatches = 0;
  uint64_t location_failures = 0;

  nlohmann::json to_json() const;
  std::string format() const;
};

/// Pure count model of the tree descent: the root is always checked, a
/// failing node's left child is checked, and its right child is checked
/// only when the left one failed too.
uint64_t tree_count_oracle(uint32_t n, const std::set<uint32_t>& bad);

/// Runs seeded trials on real approvals over `group`: n_bad random
/// sub-approvals are corrupted and each strategy locates them.
IdentTable compare_identification(uint32_t n_v, uint32_t n_bad, uint32_t trials, uint64_t seed = 1,
                                  const std::string& group = "secp256k1");

}  // namespace sada::sim

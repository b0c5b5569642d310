#include "sada/precheck/agg_tree.hpp"

#include <stdexcept>

#include "sada/approval/approval.hpp"
#include "sada/schnorr/schnorr.hpp"

namespace sada::precheck {

AggTree AggTree::build(const Group& group, std::span<const GroupPoint> keys,
                       std::span<const Scalar> coeffs, std::span<const Scalar> s,
                       std::span<const GroupPoint> R) {
  const size_t n = keys.size();
  if (coeffs.size() != n || s.size() != n || R.size() != n) {
    throw std::invalid_argument("tree inputs differ in length");
  }
  if (n < 2) throw std::invalid_argument("tree needs at least two leaves");
  std::vector<GroupPoint> leaf_pk;
  leaf_pk.reserve(n);
  for (size_t i = 0; i < n; ++i) leaf_pk.push_back(group.mul(keys[i], coeffs[i]));

  AggTree t;
  t.group_ = &group;
  t.nodes_.reserve(2 * n - 1);
  t.build_range(0, n, leaf_pk, s, R);
  return t;
}

int AggTree::build_range(size_t begin, size_t end, std::span<const GroupPoint> leaf_pk,
                         std::span<const Scalar> s, std::span<const GroupPoint> R) {
  const int idx = static_cast<int>(nodes_.size());
  nodes_.push_back({});
  nodes_[idx].begin = begin;
  nodes_[idx].end = end;
  if (end - begin == 1) {
    nodes_[idx].pk = leaf_pk[begin];
    nodes_[idx].s = s[begin];
    nodes_[idx].R = R[begin];
    return idx;
  }
  const size_t mid = begin + (end - begin) / 2;
  const int l = build_range(begin, mid, leaf_pk, s, R);
  const int r = build_range(mid, end, leaf_pk, s, R);
  TreeNode& node = nodes_[idx];
  node.left = l;
  node.right = r;
  node.pk = group_->add(nodes_[l].pk, nodes_[r].pk);
  node.s = group_->scalars().add(nodes_[l].s, nodes_[r].s);
  node.R = group_->add(nodes_[l].R, nodes_[r].R);
  return idx;
}

AggTree AggTree::with_scalars(std::span<const Scalar> s) const {
  if (s.size() != leaves()) throw std::invalid_argument("scalar count differs from leaf count");
  AggTree t = *this;
  const auto& f = group_->scalars();
  // Children follow their parent in pre-order, so a reverse sweep sums
  // every subtree before its parent needs it.
  for (size_t i = t.nodes_.size(); i-- > 0;) {
    TreeNode& node = t.nodes_[i];
    node.s = node.is_leaf() ? s[node.begin] : f.add(t.nodes_[node.left].s, t.nodes_[node.right].s);
  }
  return t;
}

Scalar AggTree::challenge(const approval::AverageValue& avg) const {
  return approval::approval_challenge(*group_, root().pk, root().R, avg);
}

bool AggTree::check_node(size_t index, const Scalar& e, CheckStats& stats) const {
  const TreeNode& node = nodes_.at(index);
  const auto& ops = op_counters();
  const uint64_t before = ops.exponentiations + ops.multi_exponentiations;
  const bool ok = schnorr::check_equation(*group_, node.pk, node.R, node.s, e);
  stats.exponentiations += ops.exponentiations + ops.multi_exponentiations - before;
  ++stats.node_verifications;
  ++stats.nodes_visited;
  return ok;
}

bool precheck_root(const AggTree& tree, const approval::AverageValue& avg, CheckStats& stats) {
  return tree.check_node(0, tree.challenge(avg), stats);
}

namespace {

// Called on a node already known to fail.
void descend(const AggTree& tree, size_t index, const Scalar& e, CheckStats& stats,
             std::vector<size_t>& bad) {
  const TreeNode& node = tree.nodes()[index];
  if (node.is_leaf()) {
    bad.push_back(node.begin);
    return;
  }
  const bool left_ok = tree.check_node(node.left, e, stats);
  bool right_ok = false;
  if (left_ok) {
    ++stats.nodes_visited;  // inferred
  } else {
    right_ok = tree.check_node(node.right, e, stats);
  }
  if (!left_ok) descend(tree, node.left, e, stats, bad);
  if (!right_ok) descend(tree, node.right, e, stats, bad);
}

}  // namespace

std::vector<size_t> locate_invalid(const AggTree& tree, const approval::AverageValue& avg,
                                   CheckStats& stats) {
  const Scalar e = tree.challenge(avg);
  std::vector<size_t> bad;
  if (tree.check_node(0, e, stats)) return bad;
  descend(tree, 0, e, stats, bad);
  return bad;
}

}  // namespace sada::precheck

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sada/approval/messages.hpp"
#include "sada/crypto/group.hpp"

namespace sada::precheck {

/// Counters for one pre-check / descent.
struct CheckStats {
  uint64_t node_verifications = 0;  // equations actually evaluated
  uint64_t nodes_visited = 0;       // includes nodes whose outcome was inferred
  uint64_t exponentiations = 0;     // single and multi-scalar multiplications

  CheckStats& operator+=(const CheckStats& o) {
    node_verifications += o.node_verifications;
    nodes_visited += o.nodes_visited;
    exponentiations += o.exponentiations;
    return *this;
  }
};

/// One node of the three parallel trees. A leaf i holds (a_i·pk_i, s_i, R_i);
/// an internal node holds the sums of its children.
struct TreeNode {
  size_t begin = 0;  // leaf range [begin, end)
  size_t end = 0;
  int left = -1;
  int right = -1;
  GroupPoint pk;
  Scalar s;
  GroupPoint R;

  size_t leaf_count() const { return end - begin; }
  bool is_leaf() const { return left < 0; }
};

/// Key, signature and nonce trees stored together as 2n − 1 nodes in
/// pre-order; node 0 is the root. A range of n leaves splits into
/// floor(n/2) on the left and ceil(n/2) on the right.
class AggTree {
 public:
  /// keys, coeffs, sub-approval scalars and per-member nonces, aligned by
  /// member. Throws std::invalid_argument on length mismatch or n < 2.
  static AggTree build(const Group& group, std::span<const GroupPoint> keys,
                       std::span<const Scalar> coeffs, std::span<const Scalar> s,
                       std::span<const GroupPoint> R);

  /// Same keys and nonces with new sub-approval scalars; only scalar
  /// additions are redone.
  AggTree with_scalars(std::span<const Scalar> s) const;

  const Group& group() const { return *group_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  size_t leaves() const { return root().leaf_count(); }

  /// e' = Hash_app(root pk~ || root R~ || avg), shared by every node check.
  Scalar challenge(const approval::AverageValue& avg) const;

  /// g^s == R + e'·pk at one node.
  bool check_node(size_t index, const Scalar& e, CheckStats& stats) const;

 private:
  int build_range(size_t begin, size_t end, std::span<const GroupPoint> leaf_pk,
                  std::span<const Scalar> s, std::span<const GroupPoint> R);

  const Group* group_ = nullptr;
  std::vector<TreeNode> nodes_;
};

/// Verifies the root, i.e. the cluster approval itself.
bool precheck_root(const AggTree& tree, const approval::AverageValue& avg, CheckStats& stats);

/// Checks the root and descends into failing subtrees. When a failing
/// node's left child passes, the right child must fail (node values are
/// sums) and is not checked again. Returns the failing leaves in order.
std::vector<size_t> locate_invalid(const AggTree& tree, const approval::AverageValue& avg,
                                   CheckStats& stats);

}  // namespace sada::precheck

#pragma once

#include "connshare/graph.hpp"
#include "connshare/shapley.hpp"

#include <map>
#include <span>
#include <vector>

namespace connshare {

/// A tree hung from the source. `depth` counts non-source nodes on the root
/// path including the node itself, so children of the root have depth 1.
struct RootedTree {
  NodeId root;
  std::map<NodeId, NodeId> parent;
  std::map<NodeId, Rational> edge_cost;
  std::map<NodeId, std::size_t> depth;
  std::vector<NodeId> order;  ///< breadth-first from the root, root excluded

  /// Non-source nodes from the root's child down to `node`.
  std::vector<NodeId> path_to(const NodeId& node) const;
  /// Number of nodes in the subtree rooted at each non-source node.
  std::map<NodeId, std::size_t> subtree_sizes() const;
};

/// Roots a tree-shaped instance at its source. Throws InputError when the
/// instance is disconnected or has a cycle.
RootedTree root_tree(const Instance& instance);

/// Each edge's cost split equally among the nodes below it.
Allocation claus_kleitman_shares(const RootedTree& tree);

/// Each node's savings (budget minus parent-edge cost) split equally among the
/// nodes on its root path; a node pays its budget minus what it receives.
/// Throws std::invalid_argument if some budget is missing or below its parent edge.
Allocation savings_tree_shares(const RootedTree& tree, const std::map<NodeId, Rational>& budgets);

/// Share of the i-th node (1-based) on a line s-1-...-n with costs[k-1] the
/// cost of the edge entering node k.
Rational line_formula_share(std::span<const Rational> costs, std::size_t i);

}  // namespace connshare

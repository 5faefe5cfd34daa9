#include "connshare/tree_rules.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace connshare {

std::vector<NodeId> RootedTree::path_to(const NodeId& node) const {
  std::vector<NodeId> path;
  for (NodeId at = node; at != root; at = parent.at(at)) path.push_back(at);
  std::reverse(path.begin(), path.end());
  return path;
}

std::map<NodeId, std::size_t> RootedTree::subtree_sizes() const {
  std::map<NodeId, std::size_t> size;
  for (const auto& n : order) size[n] = 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& up = parent.at(*it);
    if (up != root) size[up] += size[*it];
  }
  return size;
}

RootedTree root_tree(const Instance& instance) {
  if (instance.edges.size() + 1 != instance.nodes.size()) {
    throw InputError("not a tree: " + std::to_string(instance.nodes.size()) + " nodes but " +
                     std::to_string(instance.edges.size()) + " edges");
  }
  RootedTree tree;
  tree.root = instance.source;
  std::map<NodeId, std::vector<std::size_t>> incident;
  for (std::size_t e = 0; e < instance.edges.size(); ++e) {
    incident[instance.edges[e].u].push_back(e);
    incident[instance.edges[e].v].push_back(e);
  }
  std::deque<NodeId> queue{instance.source};
  std::set<NodeId> seen{instance.source};
  while (!queue.empty()) {
    NodeId at = std::move(queue.front());
    queue.pop_front();
    for (std::size_t e : incident[at]) {
      const NodeId& next = instance.edges[e].other(at);
      if (seen.contains(next)) continue;
      seen.insert(next);
      tree.parent[next] = at;
      tree.edge_cost[next] = instance.edges[e].cost;
      tree.depth[next] = at == tree.root ? 1 : tree.depth.at(at) + 1;
      tree.order.push_back(next);
      queue.push_back(next);
    }
  }
  if (seen.size() != instance.nodes.size()) throw InputError("not a tree: some nodes are unreachable from the source");
  return tree;
}

Allocation claus_kleitman_shares(const RootedTree& tree) {
  const auto size = tree.subtree_sizes();
  Allocation shares;
  for (const auto& node : tree.order) {
    Rational x;
    for (const auto& j : tree.path_to(node)) x += tree.edge_cost.at(j) / Rational(size.at(j));
    shares.emplace(node, x);
  }
  return shares;
}

Allocation savings_tree_shares(const RootedTree& tree, const std::map<NodeId, Rational>& budgets) {
  std::map<NodeId, Rational> received;
  for (const auto& j : tree.order) {
    auto b = budgets.find(j);
    if (b == budgets.end()) throw std::invalid_argument("node \"" + j + "\" has no budget");
    Rational saving = b->second - tree.edge_cost.at(j);
    if (sgn(saving) < 0) {
      throw std::invalid_argument("node \"" + j + "\" cannot afford its parent edge; restrict to selected nodes");
    }
    Rational part = saving / Rational(tree.depth.at(j));
    for (const auto& i : tree.path_to(j)) received[i] += part;
  }
  Allocation shares;
  for (const auto& node : tree.order) shares.emplace(node, budgets.at(node) - received[node]);
  return shares;
}

Rational line_formula_share(std::span<const Rational> costs, std::size_t i) {
  const std::size_t n = costs.size();
  if (i < 1 || i > n) {
    throw std::out_of_range("line index " + std::to_string(i) + " outside 1.." + std::to_string(n));
  }
  Rational share;
  for (std::size_t k = 1; k <= i; ++k) share += costs[k - 1] / Rational(n - k + 1);
  return share;
}

}  // namespace connshare

#include "connshare/coalition_values.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <set>
#include <string>

namespace connshare {

CapExceeded::CapExceeded(std::size_t players, std::size_t cap)
    : std::runtime_error(std::to_string(players) + " selected nodes exceed the enumeration cap of " +
                         std::to_string(cap) + " (raise --max-coalition-nodes)"),
      players_(players),
      cap_(cap) {}

Budgets budgets_for(const Graph& graph, const Instance& instance) {
  Budgets out(graph.size());
  for (std::size_t i = 0; i < graph.size(); ++i) out[i] = instance.budget(graph.id(i));
  return out;
}

std::vector<std::size_t> members(std::span<const std::size_t> players, Coalition coalition) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < players.size(); ++k) {
    if (coalition >> k & 1U) out.push_back(players[k]);
  }
  return out;
}

namespace {

void check_cap(std::size_t players, std::size_t cap) {
  if (players > cap || players > kMaxCoalitionCap) throw CapExceeded(players, std::min(cap, kMaxCoalitionCap));
}

}  // namespace

Rational steiner_value(const Graph& graph, std::span<const std::size_t> coalition,
                       std::span<const std::size_t> candidates) {
  std::vector<std::size_t> extra;
  for (std::size_t c : candidates) {
    if (std::find(coalition.begin(), coalition.end(), c) == coalition.end()) extra.push_back(c);
  }
  check_cap(extra.size(), kMaxCoalitionCap);
  std::optional<Rational> best;
  std::vector<std::size_t> vertices;
  for (Coalition mask = 0; mask < (Coalition{1} << extra.size()); ++mask) {
    vertices.assign(coalition.begin(), coalition.end());
    for (std::size_t v : members(extra, mask)) vertices.push_back(v);
    if (auto cost = induced_mst_cost(graph, vertices); cost && (!best || *cost < *best)) best = cost;
  }
  if (!best) throw std::logic_error("coalition is not connectable to the source through the candidates");
  return *best;
}

ValueTable steiner_value_table(const Graph& graph, std::span<const std::size_t> selected, std::size_t cap) {
  check_cap(selected.size(), cap);
  const std::size_t n = selected.size();
  const std::size_t count = std::size_t{1} << n;

  std::vector<std::optional<Rational>> induced(count);
  std::vector<std::size_t> vertices;
  for (Coalition mask = 0; mask < count; ++mask) {
    vertices = members(selected, mask);
    induced[mask] = induced_mst_cost(graph, vertices);
  }
  // Superset minimum: after processing bit k, induced[S] is the best over all
  // supersets of S that differ only in bits < k+1.
  for (std::size_t k = 0; k < n; ++k) {
    const Coalition bit = Coalition{1} << k;
    for (Coalition mask = 0; mask < count; ++mask) {
      if (mask & bit) continue;
      const auto& with = induced[mask | bit];
      if (with && (!induced[mask] || *with < *induced[mask])) induced[mask] = with;
    }
  }

  ValueTable table{ValueFlavor::connection, n, {}};
  table.values.reserve(count);
  for (auto& v : induced) {
    if (!v) throw std::logic_error("selected nodes are not all connected to the source");
    table.values.push_back(std::move(*v));
  }
  return table;
}

std::vector<std::size_t> g_star(const Graph& graph, const Budgets& budgets, std::span<const std::size_t> pool) {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<char> in_pool(graph.size(), 0);
  for (std::size_t v : pool) in_pool[v] = 1;
  std::vector<char> in_tree(graph.size(), 0);
  in_tree[graph.source()] = 1;
  std::vector<std::size_t> tree_nodes{graph.source()};
  std::vector<std::size_t> admitted;
  std::set<std::size_t> discarded;  // links dropped since the last admission

  for (;;) {
    std::size_t best_link = none, best_node = none, best_from = none;
    for (std::size_t from : tree_nodes) {
      for (const auto& arc : graph.neighbors(from)) {
        if (in_tree[arc.to] || !in_pool[arc.to] || discarded.contains(arc.link)) continue;
        const Rational& cost = graph.links()[arc.link].cost;
        bool better = best_link == none;
        if (!better) {
          const Rational& best = graph.links()[best_link].cost;
          better = cost < best ||
                   (cost == best && (arc.to < best_node || (arc.to == best_node && from < best_from)));
        }
        if (better) {
          best_link = arc.link;
          best_node = arc.to;
          best_from = from;
        }
      }
    }
    if (best_link == none) break;

    const auto& budget = budgets[best_node];
    if (!budget || *budget >= graph.links()[best_link].cost) {
      in_tree[best_node] = 1;
      tree_nodes.push_back(best_node);
      admitted.push_back(best_node);
      discarded.clear();
    } else {
      discarded.insert(best_link);
    }
  }
  return admitted;
}

Rational connection_cost(const Graph& graph, std::span<const std::size_t> admitted) {
  auto cost = induced_mst_cost(graph, admitted);
  assert(cost && "g_star output must be connected within itself");
  if (!cost) throw std::logic_error("admitted set is not connected to the source");
  return *cost;
}

ValueTable scsm_value_table(const Graph& graph, const Budgets& budgets, std::span<const std::size_t> selected,
                            std::size_t cap) {
  check_cap(selected.size(), cap);
  const std::size_t n = selected.size();
  const std::size_t count = std::size_t{1} << n;

  ValueTable table{ValueFlavor::savings, n, {}};
  table.values.reserve(count);
  for (Coalition mask = 0; mask < count; ++mask) {
    const auto pool = members(selected, mask);
    const auto admitted = g_star(graph, budgets, pool);
    Rational value;
    for (std::size_t v : admitted) {
      if (!budgets[v]) throw std::invalid_argument("missing budget for node \"" + graph.id(v) + "\"");
      value += *budgets[v];
    }
    value -= connection_cost(graph, admitted);
    table.values.push_back(std::move(value));
  }
  return table;
}

}  // namespace connshare

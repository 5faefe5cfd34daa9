#pragma once

#include "connshare/graph.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace connshare {

/// Bitmask over an ordered player list; bit k is the k-th player in id order.
using Coalition = std::uint32_t;

inline constexpr std::size_t kDefaultCoalitionCap = 16;
inline constexpr std::size_t kMaxCoalitionCap = 24;

class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::size_t players, std::size_t cap);
  std::size_t players() const { return players_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t players_;
  std::size_t cap_;
};

enum class ValueFlavor { connection, savings };

/// Coalition values for every subset of a player list. values[0] is the empty
/// coalition; values.back() is the grand coalition.
struct ValueTable {
  ValueFlavor flavor = ValueFlavor::connection;
  std::size_t player_count = 0;
  std::vector<Rational> values;

  const Rational& operator[](Coalition c) const { return values[c]; }
  Coalition grand() const { return static_cast<Coalition>((std::uint64_t{1} << player_count) - 1); }
};

/// Per graph-node budget; nullopt means unlimited.
using Budgets = std::vector<std::optional<Rational>>;
Budgets budgets_for(const Graph& graph, const Instance& instance);

/// Players of `coalition` given the ordered player list.
std::vector<std::size_t> members(std::span<const std::size_t> players, Coalition coalition);

/// Minimum cost of a tree joining `coalition` to the source that may route
/// through any node of `candidates`. Direct minimum over all supersets.
Rational steiner_value(const Graph& graph, std::span<const std::size_t> coalition,
                       std::span<const std::size_t> candidates);

/// Connection values for every subset of `selected`: induced MST cost per
/// subset, then a min-over-supersets sweep. `selected` must be sorted.
ValueTable steiner_value_table(const Graph& graph, std::span<const std::size_t> selected,
                               std::size_t cap = kDefaultCoalitionCap);

/// Budget-aware greedy selection. Grows from the source over nodes of `pool`,
/// always trying the cheapest crossing edge; a node is admitted when its budget
/// covers that edge, otherwise the edge is discarded until the next admission.
/// Returns admitted nodes in admission order.
std::vector<std::size_t> g_star(const Graph& graph, const Budgets& budgets, std::span<const std::size_t> pool);

/// Cost of connecting a g_star output to the source using only its own nodes.
Rational connection_cost(const Graph& graph, std::span<const std::size_t> admitted);

/// Savings values: for each S, total budget of g_star(S) minus its connection cost.
ValueTable scsm_value_table(const Graph& graph, const Budgets& budgets, std::span<const std::size_t> selected,
                            std::size_t cap = kDefaultCoalitionCap);

}  // namespace connshare

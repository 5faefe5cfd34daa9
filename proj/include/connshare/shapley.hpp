#pragma once

#include "connshare/coalition_values.hpp"
#include "connshare/graph.hpp"

#include <map>
#include <span>
#include <vector>

namespace connshare {

/// Shares keyed by node id.
using Allocation = std::map<NodeId, Rational>;

Rational total(const Allocation& allocation);

/// |S|!(n-|S|-1)!/n! for |S| = 0..n-1.
std::vector<Rational> shapley_weights(std::size_t n);

/// Exact Shapley value of every player, summing weighted marginal contributions
/// over subsets. Result is indexed like the table's players.
std::vector<Rational> shapley_values(const ValueTable& table);

/// Same as shapley_values, keyed by `players` (bit k of the table is players[k]).
/// Throws std::invalid_argument if the table does not cover 2^|players| coalitions.
Allocation shapley_allocate(const ValueTable& table, std::span<const NodeId> players);

}  // namespace connshare

#pragma once

#include "connshare/coalition_values.hpp"
#include "connshare/graph.hpp"
#include "connshare/shapley.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace connshare {

enum class Mechanism { amcm, scsm };

std::string_view to_string(Mechanism mechanism);
std::optional<Mechanism> parse_mechanism(std::string_view name);

struct SolveOptions {
  std::size_t max_coalition_nodes = kDefaultCoalitionCap;
};

/// Result of one mechanism run on one report profile.
struct MechanismOutcome {
  Mechanism mechanism = Mechanism::amcm;
  std::vector<NodeId> selected;  ///< id order
  std::vector<Edge> tree_edges;  ///< Prim insertion order
  Allocation shares;             ///< every non-source node; 0 when unselected
  Rational total_cost;           ///< sum of tree edge costs
  /// Per non-source node: share <= budget. Unlimited budgets are always feasible.
  std::map<NodeId, bool> budget_feasible;
  /// Coalition values over `selected` (bit k = selected[k]).
  ValueTable table;
  /// SCSM only: the Shapley split of savings (share = budget - saving share).
  std::optional<Allocation> savings_shares;

  bool is_selected(const NodeId& node) const;
  const Rational& share(const NodeId& node) const { return shares.at(node); }
};

/// Average marginal cost: Prim tree of the reported graph, Shapley value of the
/// Steiner connection game. Budgets are ignored for the shares.
MechanismOutcome run_amcm(const Instance& instance, const ReportProfile& report, const SolveOptions& options = {});

/// Saving-based: budget-aware selection, Shapley split of savings, share equal
/// to budget minus saving share. Requires a finite budget on every node.
MechanismOutcome run_scsm(const Instance& instance, const ReportProfile& report, const SolveOptions& options = {});

MechanismOutcome run_mechanism(Mechanism mechanism, const Instance& instance, const ReportProfile& report,
                               const SolveOptions& options = {});

/// Raised by run_scsm when some node lacks a budget.
class MissingBudget : public InputError {
 public:
  explicit MissingBudget(const NodeId& node);
};

nlohmann::json outcome_to_json(const MechanismOutcome& outcome);
/// Value table as {"<bitmask>": "<rational>"} plus the player order.
nlohmann::json table_to_json(const MechanismOutcome& outcome);

}  // namespace connshare

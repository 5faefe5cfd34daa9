#pragma once

#include "connshare/graph.hpp"
#include "connshare/mechanisms.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace connshare {

enum class Property { truthfulness, budget_feasibility, budget_balance, cost_monotonicity, positiveness };

std::string_view to_string(Property property);
std::optional<Property> parse_property(std::string_view name);

// ---------------------------------------------------------------------------
// Random instances

enum class BudgetPolicy { unlimited, uniform, tight };
enum class Topology { graph, tree, line };

std::string_view to_string(BudgetPolicy policy);
std::optional<BudgetPolicy> parse_budget_policy(std::string_view name);
std::string_view to_string(Topology topology);
std::optional<Topology> parse_topology(std::string_view name);

/// Parameters of the seeded generator. A random spanning tree (or a line) is
/// laid first; for Topology::graph every other pair then gets an edge with
/// probability `density`. Costs are integers in [cost_min, cost_max].
///
/// Budgets: `uniform` draws from [budget_min, budget_max]; `tight` gives each
/// node its construction-tree parent cost plus a slack from [slack_min, slack_max],
/// so the budget-aware selection admits everyone.
struct GenSpec {
  std::size_t nodes = 5;
  double density = 0.5;
  std::int64_t cost_min = 1;
  std::int64_t cost_max = 20;
  BudgetPolicy budget_policy = BudgetPolicy::unlimited;
  std::int64_t budget_min = 1;
  std::int64_t budget_max = 30;
  std::int64_t slack_min = 0;
  std::int64_t slack_max = 10;
  Topology topology = Topology::graph;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument describing the first bad field.
void validate(const GenSpec& spec);
GenSpec gen_spec_from_json(const nlohmann::json& doc);
nlohmann::json gen_spec_to_json(const GenSpec& spec);

/// Deterministic in `spec`: node ids are "s" and "v1".."vN" (zero-padded).
Instance gen_random_instance(const GenSpec& spec);

// ---------------------------------------------------------------------------
// Certification

/// Every subset of `node`'s adjacent edges as that node's report, all other
/// nodes truthful. The last profile is the truthful one.
std::vector<ReportProfile> enumerate_reports(const Instance& instance, const NodeId& node);

enum class PerturbKind { plus_one, times_two, times_ten };
std::string_view to_string(PerturbKind kind);

struct Perturbation {
  std::size_t edge = 0;
  PerturbKind kind = PerturbKind::plus_one;
};

Instance perturbed(const Instance& instance, const Perturbation& perturbation);

/// One counterexample. `before`/`after` depend on the property:
///   truthfulness        share when truthful / share under `deviation`
///   cost_monotonicity   share before / after `perturbation`
///   budget_feasibility  share / budget
///   budget_balance      sum of shares / tree cost
///   positiveness        share / 0
struct ViolationReport {
  Property property = Property::truthfulness;
  Mechanism mechanism = Mechanism::amcm;
  std::string instance_digest;
  NodeId node;
  ReportProfile baseline;
  std::optional<ReportProfile> deviation;
  std::optional<Perturbation> perturbation;
  Rational before;
  Rational after;
};

nlohmann::json violation_to_json(const Instance& instance, const ViolationReport& report);

/// Re-runs the mechanism(s) behind a witness and confirms both recorded values.
bool replays(const Instance& instance, const ViolationReport& report, const SolveOptions& options = {});

struct PropertyCheck {
  Property property = Property::truthfulness;
  Mechanism mechanism = Mechanism::amcm;
  std::vector<ViolationReport> witnesses;
  std::size_t comparisons = 0;   ///< share comparisons actually made
  std::size_t deselections = 0;  ///< deviations/perturbations that changed selection (not scored)

  bool holds() const { return witnesses.empty(); }
};

PropertyCheck check_property(const Instance& instance, Mechanism mechanism, Property property,
                             const SolveOptions& options = {});

/// check_property over many instances, fanned out over `jobs` threads (0 = one
/// per hardware thread). Results come back in input order.
std::vector<PropertyCheck> check_corpus(const std::vector<Instance>& corpus, Mechanism mechanism, Property property,
                                        const SolveOptions& options = {}, unsigned jobs = 0);

}  // namespace connshare

#include "connshare/mechanisms.hpp"

#include <algorithm>

namespace connshare {

using nlohmann::json;

std::string_view to_string(Mechanism mechanism) { return mechanism == Mechanism::amcm ? "amcm" : "scsm"; }

std::optional<Mechanism> parse_mechanism(std::string_view name) {
  if (name == "amcm") return Mechanism::amcm;
  if (name == "scsm") return Mechanism::scsm;
  return std::nullopt;
}

MissingBudget::MissingBudget(const NodeId& node)
    : InputError("missing budget: node \"" + node + "\" has no budget (SCSM needs one for every node)") {}

bool MechanismOutcome::is_selected(const NodeId& node) const {
  return std::binary_search(selected.begin(), selected.end(), node);
}

namespace {

std::vector<NodeId> ids_of(const Graph& graph, std::span<const std::size_t> indices) {
  std::vector<NodeId> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(graph.id(i));
  return out;
}

void fill_tree(MechanismOutcome& outcome, const Graph& graph, const Instance& instance,
               const SpanningTreeResult& tree) {
  for (std::size_t l : tree.links) outcome.tree_edges.push_back(instance.edges[graph.links()[l].instance_edge]);
  outcome.total_cost = tree.total_cost;
}

void finish(MechanismOutcome& outcome, const Instance& instance) {
  for (const auto& node : instance.agents()) {
    outcome.shares.try_emplace(node, 0);
    const auto budget = instance.budget(node);
    outcome.budget_feasible[node] = !budget || outcome.shares.at(node) <= *budget;
  }
}

}  // namespace

MechanismOutcome run_amcm(const Instance& instance, const ReportProfile& report, const SolveOptions& options) {
  const Graph graph = induced_graph(instance, report);
  const auto tree = prim_mst(graph, graph.source());
  const auto selected = tree.covered_sorted();

  MechanismOutcome outcome;
  outcome.mechanism = Mechanism::amcm;
  outcome.selected = ids_of(graph, selected);
  fill_tree(outcome, graph, instance, tree);
  outcome.table = steiner_value_table(graph, selected, options.max_coalition_nodes);
  outcome.shares = shapley_allocate(outcome.table, outcome.selected);
  finish(outcome, instance);
  return outcome;
}

MechanismOutcome run_scsm(const Instance& instance, const ReportProfile& report, const SolveOptions& options) {
  for (const auto& node : instance.agents()) {
    if (!instance.budget(node)) throw MissingBudget(node);
  }
  const Graph graph = induced_graph(instance, report);
  const Budgets budgets = budgets_for(graph, instance);

  std::vector<std::size_t> everyone;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (i != graph.source()) everyone.push_back(i);
  }
  auto selected = g_star(graph, budgets, everyone);
  std::sort(selected.begin(), selected.end());

  MechanismOutcome outcome;
  outcome.mechanism = Mechanism::scsm;
  outcome.selected = ids_of(graph, selected);
  outcome.table = scsm_value_table(graph, budgets, selected, options.max_coalition_nodes);
  outcome.savings_shares = shapley_allocate(outcome.table, outcome.selected);
  for (const auto& [node, saving] : *outcome.savings_shares) {
    outcome.shares.emplace(node, *instance.budget(node) - saving);
  }

  std::vector<char> allowed(graph.size(), 0);
  for (std::size_t v : selected) allowed[v] = 1;
  fill_tree(outcome, graph, instance, prim_mst_within(graph, allowed));
  finish(outcome, instance);
  return outcome;
}

MechanismOutcome run_mechanism(Mechanism mechanism, const Instance& instance, const ReportProfile& report,
                               const SolveOptions& options) {
  return mechanism == Mechanism::amcm ? run_amcm(instance, report, options) : run_scsm(instance, report, options);
}

json outcome_to_json(const MechanismOutcome& outcome) {
  json tree = json::array();
  for (const auto& e : outcome.tree_edges) tree.push_back({{"u", e.u}, {"v", e.v}, {"cost", to_string(e.cost)}});
  json shares = json::object();
  json decimal = json::object();
  for (const auto& [node, share] : outcome.shares) {
    shares[node] = to_string(share);
    decimal[node] = to_decimal(share);
  }
  json feasible = json::object();
  for (const auto& [node, ok] : outcome.budget_feasible) feasible[node] = ok;
  json doc{{"mechanism", std::string(to_string(outcome.mechanism))},
           {"selected", outcome.selected},
           {"tree", std::move(tree)},
           {"shares", std::move(shares)},
           {"shares_decimal", std::move(decimal)},
           {"total_cost", to_string(outcome.total_cost)},
           {"budget_feasible", std::move(feasible)}};
  if (outcome.savings_shares) {
    json savings = json::object();
    for (const auto& [node, s] : *outcome.savings_shares) savings[node] = to_string(s);
    doc["savings_shares"] = std::move(savings);
  }
  return doc;
}

json table_to_json(const MechanismOutcome& outcome) {
  json values = json::object();
  for (Coalition c = 0; c < outcome.table.values.size(); ++c) values[std::to_string(c)] = to_string(outcome.table[c]);
  return {{"flavor", outcome.table.flavor == ValueFlavor::connection ? "connection" : "savings"},
          {"players", outcome.selected},
          {"values", std::move(values)}};
}

}  // namespace connshare

#include "connshare/coalition_values.hpp"
#include "connshare/property_harness.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace connshare;

namespace {

std::vector<std::size_t> idx(const Graph& g, std::vector<NodeId> ids) { return g.indices_of(ids); }

std::vector<std::size_t> agents_of(const Graph& g) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i != g.source()) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_CASE("steiner_value routes through non-members") {
  const auto g = truthful_graph(oracle::load("tree3.json"));
  const auto all = idx(g, {"A", "B", "C"});
  CHECK(steiner_value(g, idx(g, {"B"}), all) == 10);
  CHECK(steiner_value(g, {}, all) == 0);
  CHECK(steiner_value(g, idx(g, {"B", "C"}), all) == 15);
}

TEST_CASE("steiner_value_table reproduces the worked tree example") {
  const auto g = truthful_graph(oracle::load("tree3.json"));
  const auto table = steiner_value_table(g, idx(g, {"A", "B", "C"}));
  // bit 0 = A, bit 1 = B, bit 2 = C
  const std::vector<Rational> expected{0, 6, 10, 10, 11, 11, 15, 15};
  CHECK(table.values == expected);
  CHECK(table.flavor == ValueFlavor::connection);
}

TEST_CASE("steiner_value_table of the empty selection") {
  const auto g = truthful_graph(oracle::load("source_only.json"));
  const auto table = steiner_value_table(g, {});
  CHECK(table.values == std::vector<Rational>{0});
}

TEST_CASE("steiner_value_table on the four-node graph matches the published chain") {
  const auto g = truthful_graph(oracle::load("mesh4.json"));
  const auto table = steiner_value_table(g, idx(g, {"A", "B", "C", "D"}));
  CHECK(table[0b0001] == 10);  // {A}
  CHECK(table[0b0011] == 15);  // {A,B}
  CHECK(table[0b0111] == 21);  // {A,B,C}
  CHECK(table[0b1111] == 26);
}

TEST_CASE("steiner_value_table enforces the cap") {
  GenSpec spec;
  spec.nodes = 6;
  const auto g = truthful_graph(gen_random_instance(spec));
  CHECK_THROWS_AS(steiner_value_table(g, agents_of(g), 5), CapExceeded);
  CHECK_NOTHROW(steiner_value_table(g, agents_of(g), 6));
}

TEST_CASE("g_star follows the budget-aware greedy") {
  SUBCASE("four-node graph with budgets, S = {B, C}") {
    const auto instance = oracle::load("mesh4_budgeted.json");
    const auto g = truthful_graph(instance);
    CHECK(g_star(g, budgets_for(g, instance), idx(g, {"B", "C"})) == idx(g, {"B"}));
    const auto all = g_star(g, budgets_for(g, instance), idx(g, {"A", "B", "C", "D"}));
    CHECK(all == std::vector<std::size_t>{g.require_index("B"), g.require_index("A"), g.require_index("D"),
                                          g.require_index("C")});
  }
  SUBCASE("empty pool") {
    const auto instance = oracle::load("mesh4_budgeted.json");
    const auto g = truthful_graph(instance);
    CHECK(g_star(g, budgets_for(g, instance), {}).empty());
  }
  SUBCASE("budget below the only edge") {
    const auto instance = oracle::load("unaffordable.json");
    const auto g = truthful_graph(instance);
    CHECK(g_star(g, budgets_for(g, instance), idx(g, {"A"})).empty());
  }
  SUBCASE("a rejected edge is retried after an admission") {
    // C cannot afford s-C (9) but can afford A-C (3) once A is in.
    const auto instance = parse_instance(
        R"({"source":"s","nodes":[{"id":"A","budget":"5"},{"id":"C","budget":"4"}],
            "edges":[{"u":"s","v":"C","cost":2},{"u":"s","v":"A","cost":5},{"u":"A","v":"C","cost":3}]})");
    const auto g = truthful_graph(instance);
    // s-C (2) is cheapest and affordable: C first, then A via s-A.
    CHECK(g_star(g, budgets_for(g, instance), idx(g, {"A", "C"})) ==
          std::vector<std::size_t>{g.require_index("C"), g.require_index("A")});
    const auto pricey = parse_instance(
        R"({"source":"s","nodes":[{"id":"A","budget":"5"},{"id":"C","budget":"4"}],
            "edges":[{"u":"s","v":"C","cost":4.5},{"u":"s","v":"A","cost":5},{"u":"A","v":"C","cost":3}]})");
    const auto g2 = truthful_graph(pricey);
    CHECK(g_star(g2, budgets_for(g2, pricey), idx(g2, {"A", "C"})) ==
          std::vector<std::size_t>{g2.require_index("A"), g2.require_index("C")});
  }
  SUBCASE("zero-cost edges admit any budget") {
    const auto instance = parse_instance(
        R"({"source":"s","nodes":[{"id":"A","budget":"0.5"}],"edges":[{"u":"s","v":"A","cost":0}]})");
    const auto g = truthful_graph(instance);
    CHECK(g_star(g, budgets_for(g, instance), idx(g, {"A"})) == idx(g, {"A"}));
  }
}

TEST_CASE("connection_cost") {
  const auto g = truthful_graph(oracle::load("tree3_budgeted.json"));
  CHECK(connection_cost(g, idx(g, {"A", "B"})) == 10);
  CHECK(connection_cost(g, {}) == 0);
  CHECK(connection_cost(g, idx(g, {"A", "B", "C"})) == 15);
}

TEST_CASE("scsm_value_table on the budgeted tree") {
  const auto instance = oracle::load("tree3_budgeted.json");
  const auto g = truthful_graph(instance);
  const auto table = scsm_value_table(g, budgets_for(g, instance), idx(g, {"A", "B", "C"}));
  const std::vector<Rational> expected{0, 2, 0, 5, 0, 3, 0, 6};
  CHECK(table.values == expected);
  CHECK(table.flavor == ValueFlavor::savings);
}

TEST_CASE("scsm_value_table on the four-node graph: v({B,C}) = 2") {
  const auto instance = oracle::load("mesh4_budgeted.json");
  const auto g = truthful_graph(instance);
  const auto table = scsm_value_table(g, budgets_for(g, instance), idx(g, {"A", "B", "C", "D"}));
  CHECK(table[0b0110] == 2);
}

TEST_CASE("property: steiner table agrees with forest enumeration (n <= 5)") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GenSpec spec;
    spec.nodes = 1 + seed % 5;
    spec.density = 0.3 + 0.1 * static_cast<double>(seed % 7);
    spec.cost_min = 0;
    spec.cost_max = 9;
    spec.seed = 1000 + seed;
    const auto g = truthful_graph(gen_random_instance(spec));
    const auto players = agents_of(g);
    const auto table = steiner_value_table(g, players);
    CAPTURE(seed);
    CHECK(table.values == oracle::steiner_table(g, players));
    for (Coalition c = 0; c < table.values.size(); ++c) {
      CHECK(steiner_value(g, members(players, c), players) == table[c]);
    }
  }
}

TEST_CASE("property: connection values are monotone and the grand value is the MST cost") {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    GenSpec spec;
    spec.nodes = 1 + seed % 7;
    spec.density = 0.4;
    spec.seed = 2000 + seed;
    const auto g = truthful_graph(gen_random_instance(spec));
    const auto players = agents_of(g);
    const auto table = steiner_value_table(g, players);
    CHECK(table[table.grand()] == prim_mst(g, g.source()).total_cost);
    for (Coalition s = 0; s < table.values.size(); ++s) {
      for (std::size_t k = 0; k < players.size(); ++k) CHECK(table[s] <= table[s | (Coalition{1} << k)]);
    }
  }
}

TEST_CASE("property: g_star soundness and savings values") {
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    GenSpec spec;
    spec.nodes = 1 + seed % 6;
    spec.density = 0.5;
    spec.budget_policy = BudgetPolicy::uniform;
    spec.budget_min = 1;
    spec.budget_max = 25;
    spec.seed = 3000 + seed;
    const auto instance = gen_random_instance(spec);
    const auto g = truthful_graph(instance);
    const auto budgets = budgets_for(g, instance);
    auto selected = g_star(g, budgets, agents_of(g));

    // Each admitted node has an affordable edge to something admitted earlier.
    std::vector<std::size_t> earlier{g.source()};
    for (std::size_t v : selected) {
      bool affordable = false;
      for (const auto& arc : g.neighbors(v)) {
        if (std::find(earlier.begin(), earlier.end(), arc.to) != earlier.end() &&
            g.links()[arc.link].cost <= *budgets[v]) {
          affordable = true;
        }
      }
      CHECK(affordable);
      earlier.push_back(v);
    }
    CHECK(induced_mst_cost(g, selected).has_value());

    std::sort(selected.begin(), selected.end());
    const auto table = scsm_value_table(g, budgets, selected);
    for (Coalition s = 0; s < table.values.size(); ++s) {
      CAPTURE(seed);
      CHECK(table[s] >= 0);
      for (std::size_t k = 0; k < selected.size(); ++k) {
        const Coalition with = s | (Coalition{1} << k);
        if (with == s) continue;
        auto before = g_star(g, budgets, members(selected, s));
        auto after = g_star(g, budgets, members(selected, with));
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
        if (before != after) CHECK(table[with] >= table[s]);
      }
    }
  }
}

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "connshare/mechanisms.hpp"
#include "connshare/property_harness.hpp"
#include "connshare/tree_rules.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace connshare;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(const std::string& id, const std::string& title, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto start = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail << " [exception: " << e.what() << "]";
  }
  const double took = seconds_since(start);
  if (!v.pass) ++failures;
  std::printf("%s %s %s (%.3f s)%s\n", v.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(), took,
              v.detail.str().c_str());
  std::fflush(stdout);
}

/// Wall time of one call of `fn`, best of `repeats`, in seconds.
double best_time(int repeats, const std::function<void()>& fn) {
  double best = 1e9;
  for (int r = 0; r < repeats; ++r) {
    const auto start = Clock::now();
    fn();
    best = std::min(best, seconds_since(start));
  }
  return best;
}

std::vector<Instance> certification_corpus() {
  constexpr double densities[] = {0.3, 0.5, 0.7, 1.0};
  std::vector<Instance> corpus;
  for (std::uint64_t i = 0; i < 500; ++i) {
    GenSpec spec;
    spec.nodes = 1 + i % 6;
    spec.density = densities[i / 6 % 4];
    spec.cost_min = 1;
    spec.cost_max = 20;
    spec.budget_policy = i % 2 ? BudgetPolicy::uniform : BudgetPolicy::tight;
    spec.budget_min = 1;
    spec.budget_max = 30;
    spec.slack_min = 0;
    spec.slack_max = 10;
    spec.seed = 70000 + i;
    corpus.push_back(gen_random_instance(spec));
  }
  return corpus;
}

std::size_t witnesses_in(const std::vector<PropertyCheck>& checks, const std::vector<Instance>& corpus,
                         Verdict& v) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    for (const auto& w : checks[i].witnesses) {
      ++count;
      v.require(replays(corpus[i], w), "witness replays");
      if (count <= 3) v.detail << "\n    witness " << violation_to_json(corpus[i], w).dump();
    }
  }
  return count;
}

std::size_t comparisons_in(const std::vector<PropertyCheck>& checks) {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.comparisons;
  return n;
}

}  // namespace

int main() {
  const auto mesh4 = oracle::load("mesh4.json");
  const auto tree3 = oracle::load("tree3.json");
  const auto mesh4_budgeted = oracle::load("mesh4_budgeted.json");
  const auto tree3_budgeted = oracle::load("tree3_budgeted.json");

  criterion("AC1", "AMCM on the three-node tree gives (2, 6, 7), total 15, < 1 ms", [&](Verdict& v) {
    const auto out = run_amcm(tree3, {});
    v.require(out.shares == Allocation{{"A", 2}, {"B", 6}, {"C", 7}}, "shares (2,6,7)");
    v.require(out.total_cost == 15, "total 15");
    const double t = best_time(5, [&] { run_amcm(tree3, {}); });
    v.detail << " solve " << t * 1e3 << " ms";
    v.require(t < 1e-3, "runtime < 1 ms");
  });

  criterion("AC2", "SCSM on the budgeted tree: values, savings split, shares, < 1 ms", [&](Verdict& v) {
    const auto out = run_scsm(tree3_budgeted, {});
    // A, B, C, AB, AC, BC, ABC
    const Coalition order[] = {0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111};
    const Rational expected[] = {2, 0, 0, 5, 3, 0, 6};
    for (int k = 0; k < 7; ++k) v.require(out.table[order[k]] == expected[k], "value table entry");
    v.require(*out.savings_shares == Allocation{{"A", 4}, {"B", Rational(3, 2)}, {"C", Rational(1, 2)}},
              "savings (4, 3/2, 1/2)");
    v.require(out.shares == Allocation{{"A", 4}, {"B", Rational(11, 2)}, {"C", Rational(11, 2)}},
              "shares (4, 11/2, 11/2)");
    const double t = best_time(5, [&] { run_scsm(tree3_budgeted, {}); });
    v.detail << " solve " << t * 1e3 << " ms";
    v.require(t < 1e-3, "runtime < 1 ms");
  });

  criterion("AC3", "four-node graph: AMCM (19/6, 11/2, 55/6, 49/6), SCSM (8, 6, 13/2, 11/2), value constraints",
            [&](Verdict& v) {
              const auto amcm = run_amcm(mesh4, {});
              v.require(amcm.shares == Allocation{{"A", Rational(19, 6)}, {"B", Rational(11, 2)},
                                                  {"C", Rational(55, 6)}, {"D", Rational(49, 6)}},
                        "AMCM shares");
              // players A, B, C, D -> bits 0..3
              v.require(amcm.table[0b0001] == 10, "v({A}) = 10");
              v.require(amcm.table[0b0011] == 15, "v({A,B}) = 15");
              v.require(amcm.table[0b0111] == 21, "v({A,B,C}) = 21");
              v.require(amcm.table[0b1111] == 26, "v({A,B,C,D}) = 26");
              std::set<std::string> tree;
              for (const auto& e : amcm.tree_edges) tree.insert(edge_label(e));
              v.require(tree == std::set<std::string>{"s-B", "A-B", "A-C", "A-D"}, "selected edges");

              const auto budgeted_amcm = run_amcm(mesh4_budgeted, {});
              v.require(budgeted_amcm.shares == amcm.shares, "budgets do not change AMCM");
              const auto scsm = run_scsm(mesh4_budgeted, {});
              v.require(scsm.shares == Allocation{{"A", 8}, {"B", 6}, {"C", Rational(13, 2)}, {"D", Rational(11, 2)}},
                        "SCSM shares");
              v.require(scsm.table[0b0110] == 2, "savings v({B,C}) = 2");
              std::set<std::string> scsm_tree;
              for (const auto& e : scsm.tree_edges) scsm_tree.insert(edge_label(e));
              v.require(scsm_tree == tree, "SCSM selected edges");
            });

  criterion("AC4", "edge-splitting rule == AMCM on 200 random trees; line formula == AMCM on 200 lines, < 30 s",
            [&](Verdict& v) {
              const auto start = Clock::now();
              std::size_t trees = 0, lines = 0;
              for (std::uint64_t i = 0; i < 200; ++i) {
                GenSpec spec;
                spec.nodes = 1 + i % 8;
                spec.topology = Topology::tree;
                spec.cost_min = 1;
                spec.cost_max = 20;
                spec.seed = 10000 + i;
                const auto instance = gen_random_instance(spec);
                if (run_amcm(instance, {}).shares == claus_kleitman_shares(root_tree(instance))) ++trees;

                spec.topology = Topology::line;
                spec.seed = 20000 + i;
                const auto line = gen_random_instance(spec);
                const auto out = run_amcm(line, {});
                std::vector<Rational> costs;
                for (const auto& e : line.edges) costs.push_back(e.cost);
                bool same = true;
                for (std::size_t k = 1; k <= spec.nodes; ++k) {
                  same = same && out.share(line.edges[k - 1].v) == line_formula_share(costs, k);
                }
                if (same) ++lines;
              }
              v.detail << " trees " << trees << "/200, lines " << lines << "/200";
              v.require(trees == 200 && lines == 200, "exact equality everywhere");
              v.require(seconds_since(start) < 30, "runtime < 30 s");
            });

  criterion("AC5", "savings rule == SCSM on 200 random trees with budget = parent cost + slack, < 30 s",
            [&](Verdict& v) {
              const auto start = Clock::now();
              std::size_t equal = 0;
              for (std::uint64_t i = 0; i < 200; ++i) {
                GenSpec spec;
                spec.nodes = 1 + i % 8;
                spec.topology = Topology::tree;
                spec.cost_min = 1;
                spec.cost_max = 20;
                spec.budget_policy = BudgetPolicy::tight;
                spec.slack_min = 0;
                spec.slack_max = 15;
                spec.seed = 30000 + i;
                const auto instance = gen_random_instance(spec);
                if (run_scsm(instance, {}).shares == savings_tree_shares(root_tree(instance), instance.budgets)) {
                  ++equal;
                }
              }
              v.detail << " equal " << equal << "/200";
              v.require(equal == 200, "exact equality everywhere");
              v.require(seconds_since(start) < 30, "runtime < 30 s");
            });

  const auto corpus = certification_corpus();

  criterion("AC6", "truthfulness on 500 random instances (n <= 6), full misreport enumeration, both mechanisms, < 5 min",
            [&](Verdict& v) {
              const auto start = Clock::now();
              for (auto m : {Mechanism::amcm, Mechanism::scsm}) {
                const auto checks = check_corpus(corpus, m, Property::truthfulness);
                const auto found = witnesses_in(checks, corpus, v);
                std::size_t deselected = 0;
                for (const auto& c : checks) deselected += c.deselections;
                v.detail << " " << to_string(m) << ": " << comparisons_in(checks) << " comparisons, " << found
                         << " violations, " << deselected << " selection changes;";
                v.require(found == 0, std::string(to_string(m)) + " truthful");
              }
              v.require(seconds_since(start) < 300, "runtime < 5 min");
            });

  criterion("AC7", "budget balance, positiveness, budget feasibility, cost monotonicity on the same corpus",
            [&](Verdict& v) {
              struct Item {
                Mechanism mechanism;
                Property property;
              };
              const Item items[] = {
                  {Mechanism::amcm, Property::budget_balance},    {Mechanism::scsm, Property::budget_balance},
                  {Mechanism::amcm, Property::positiveness},      {Mechanism::scsm, Property::budget_feasibility},
                  {Mechanism::amcm, Property::cost_monotonicity}, {Mechanism::scsm, Property::cost_monotonicity},
              };
              for (const auto& item : items) {
                const auto checks = check_corpus(corpus, item.mechanism, item.property);
                const auto found = witnesses_in(checks, corpus, v);
                v.detail << " " << to_string(item.mechanism) << "/" << to_string(item.property) << ": " << found
                         << " of " << comparisons_in(checks) << ";";
                v.require(found == 0, std::string(to_string(item.mechanism)) + " " +
                                          std::string(to_string(item.property)));
              }
            });

  criterion("AC8", "AMCM charges above budget where SCSM stays feasible", [&](Verdict& v) {
    const auto amcm = check_property(mesh4_budgeted, Mechanism::amcm, Property::budget_feasibility);
    const auto scsm = check_property(mesh4_budgeted, Mechanism::scsm, Property::budget_feasibility);
    v.require(!amcm.holds(), "AMCM infeasible on the four-node graph");
    v.require(scsm.holds(), "SCSM feasible on the four-node graph");
    for (const auto& w : amcm.witnesses) {
      v.detail << " " << w.node << ": " << to_string(w.before) << " > " << to_string(w.after) << ";";
      v.require(replays(mesh4_budgeted, w), "witness replays");
    }
    std::size_t generated = 0;
    for (const auto& instance : corpus) {
      if (!check_property(instance, Mechanism::amcm, Property::budget_feasibility).holds() &&
          check_property(instance, Mechanism::scsm, Property::budget_feasibility).holds()) {
        ++generated;
      }
    }
    v.detail << " generated witnesses: " << generated << "/" << corpus.size();
    v.require(generated > 0, "a generated witness exists");
  });

  criterion("AC9", "Steiner table == forest enumeration (100 graphs, n <= 5); Shapley == permutation average (n <= 6)",
            [&](Verdict& v) {
              const auto start = Clock::now();
              std::size_t steiner_ok = 0, shapley_ok = 0, shapley_total = 0;
              for (std::uint64_t i = 0; i < 100; ++i) {
                GenSpec spec;
                spec.nodes = 1 + i % 5;
                spec.density = 0.25 + 0.25 * static_cast<double>(i % 4);
                spec.cost_min = 0;
                spec.cost_max = 12;
                spec.seed = 40000 + i;
                const auto g = truthful_graph(gen_random_instance(spec));
                std::vector<std::size_t> players;
                for (std::size_t k = 0; k < g.size(); ++k) {
                  if (k != g.source()) players.push_back(k);
                }
                const auto table = steiner_value_table(g, players);
                bool same = table.values == oracle::steiner_table(g, players);
                for (Coalition c = 0; same && c < table.values.size(); ++c) {
                  same = steiner_value(g, members(players, c), players) == table[c];
                }
                if (same) ++steiner_ok;
              }
              for (std::size_t i = 0; i < 200; ++i) {
                const auto& instance = corpus[i];
                for (auto m : {Mechanism::amcm, Mechanism::scsm}) {
                  const auto out = run_mechanism(m, instance, {});
                  ++shapley_total;
                  const auto phi = shapley_values(out.table);
                  if (phi == oracle::shapley_by_permutations(out.table.values, out.table.player_count)) ++shapley_ok;
                }
              }
              v.detail << " steiner " << steiner_ok << "/100, shapley " << shapley_ok << "/" << shapley_total;
              v.require(steiner_ok == 100, "Steiner oracle");
              v.require(shapley_ok == shapley_total, "Shapley oracle");
              v.require(seconds_since(start) < 120, "runtime < 2 min");
            });

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}

// Command-line front end: solve, check, gen, tree-compare.
//
// Exit codes: 0 success / property holds, 1 property violated or trees
// disagree, 2 usage or input error.

#include "connshare/mechanisms.hpp"
#include "connshare/property_harness.hpp"
#include "connshare/tree_rules.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace connshare;

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kInputError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open \"" + path + "\"");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

Instance load_instance(const std::string& path) {
  try {
    return parse_instance(read_file(path));
  } catch (const InputError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// "n=5,seed=7,trials=50" style corpus description.
struct RandomCorpus {
  GenSpec spec;
  std::size_t trials = 1;
};

RandomCorpus parse_random(const std::string& text, BudgetPolicy default_policy) {
  RandomCorpus corpus;
  corpus.spec.budget_policy = default_policy;
  std::stringstream in(text);
  std::string item;
  bool have_n = false;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--random: expected key=value, got \"" + item + "\"");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "n" || key == "nodes") {
        corpus.spec.nodes = std::stoul(value);
        have_n = true;
      } else if (key == "seed") corpus.spec.seed = std::stoull(value);
      else if (key == "trials") corpus.trials = std::stoul(value);
      else if (key == "density") corpus.spec.density = std::stod(value);
      else if (key == "cost-min") corpus.spec.cost_min = std::stoll(value);
      else if (key == "cost-max") corpus.spec.cost_max = std::stoll(value);
      else if (key == "budget-min") corpus.spec.budget_min = std::stoll(value);
      else if (key == "budget-max") corpus.spec.budget_max = std::stoll(value);
      else if (key == "slack-min") corpus.spec.slack_min = std::stoll(value);
      else if (key == "slack-max") corpus.spec.slack_max = std::stoll(value);
      else if (key == "policy" || key == "budget-policy") {
        auto p = parse_budget_policy(value);
        if (!p) throw UsageError("--random: unknown budget policy \"" + value + "\"");
        corpus.spec.budget_policy = *p;
      } else if (key == "topology") {
        auto t = parse_topology(value);
        if (!t) throw UsageError("--random: unknown topology \"" + value + "\"");
        corpus.spec.topology = *t;
      } else {
        throw UsageError("--random: unknown key \"" + key + "\"");
      }
    } catch (const std::logic_error&) {
      throw UsageError("--random: bad value for " + key + ": \"" + value + "\"");
    }
  }
  if (!have_n) throw UsageError("--random: n=<nodes> is required");
  if (corpus.trials < 1) throw UsageError("--random: trials must be at least 1");
  try {
    validate(corpus.spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--random: ") + e.what());
  }
  return corpus;
}

std::vector<Instance> build_corpus(const RandomCorpus& corpus) {
  std::vector<Instance> out;
  for (std::size_t t = 0; t < corpus.trials; ++t) {
    GenSpec spec = corpus.spec;
    spec.seed = corpus.spec.seed + t;
    out.push_back(gen_random_instance(spec));
  }
  return out;
}

void print_table(const Instance& instance, const MechanismOutcome& outcome, std::ostream& out) {
  out << "mechanism " << to_string(outcome.mechanism) << "\n";
  out << "tree";
  for (const auto& e : outcome.tree_edges) out << " " << edge_label(e) << ":" << to_string(e.cost);
  out << "\n";
  out << std::left << std::setw(10) << "node" << std::setw(10) << "selected" << std::setw(12) << "share"
      << std::setw(14) << "decimal" << std::setw(10) << "budget" << "feasible\n";
  for (const auto& [node, share] : outcome.shares) {
    const auto budget = instance.budget(node);
    out << std::setw(10) << node << std::setw(10) << (outcome.is_selected(node) ? "yes" : "no") << std::setw(12)
        << to_string(share) << std::setw(14) << to_decimal(share) << std::setw(10)
        << (budget ? to_string(*budget) : std::string("-")) << (outcome.budget_feasible.at(node) ? "yes" : "no")
        << "\n";
  }
  out << "total " << to_string(outcome.total_cost) << "\n";
}

void print_csv(const Instance& instance, const MechanismOutcome& outcome, std::ostream& out) {
  out << "node,selected,share,decimal,budget,feasible\n";
  for (const auto& [node, share] : outcome.shares) {
    const auto budget = instance.budget(node);
    out << node << "," << (outcome.is_selected(node) ? 1 : 0) << "," << to_string(share) << "," << to_decimal(share)
        << "," << (budget ? to_string(*budget) : "") << "," << (outcome.budget_feasible.at(node) ? 1 : 0) << "\n";
  }
  out << "total,," << to_string(outcome.total_cost) << "," << to_decimal(outcome.total_cost) << ",,\n";
}

Mechanism require_mechanism(const std::string& name) {
  auto m = parse_mechanism(name);
  if (!m) throw UsageError("unknown mechanism \"" + name + "\" (expected amcm or scsm)");
  return *m;
}

struct SolveArgs {
  std::string mechanism;
  std::string instance;
  std::string report;
  bool dump_table = false;
};

int cmd_solve(const SolveArgs& args, const std::string& format, const SolveOptions& options) {
  const Mechanism mechanism = require_mechanism(args.mechanism);
  const Instance instance = load_instance(args.instance);
  ReportProfile report;
  if (!args.report.empty()) {
    try {
      report = parse_report(instance, read_file(args.report));
    } catch (const InputError& e) {
      throw UsageError(args.report + ": " + e.what());
    }
  }
  const auto outcome = run_mechanism(mechanism, instance, report, options);
  if (format == "json") {
    auto doc = outcome_to_json(outcome);
    if (args.dump_table) doc["table"] = table_to_json(outcome);
    std::cout << doc.dump(2) << "\n";
  } else if (format == "csv") {
    print_csv(instance, outcome, std::cout);
  } else {
    print_table(instance, outcome, std::cout);
    if (args.dump_table) std::cout << table_to_json(outcome).dump() << "\n";
  }
  return kOk;
}

struct CheckArgs {
  std::string property;
  std::string mechanism;
  std::string instance;
  std::string random;
  unsigned jobs = 0;
};

int cmd_check(const CheckArgs& args, const SolveOptions& options) {
  const auto property = parse_property(args.property);
  if (!property) throw UsageError("unknown property \"" + args.property + "\"");
  const Mechanism mechanism = require_mechanism(args.mechanism);
  if (args.instance.empty() == args.random.empty()) throw UsageError("give exactly one of --instance or --random");

  std::vector<Instance> corpus;
  if (!args.instance.empty()) {
    corpus.push_back(load_instance(args.instance));
  } else {
    corpus = build_corpus(parse_random(args.random, BudgetPolicy::uniform));
  }
  const auto results = check_corpus(corpus, mechanism, *property, options, args.jobs);

  std::size_t witnesses = 0, comparisons = 0, deselections = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (const auto& w : results[i].witnesses) std::cout << violation_to_json(corpus[i], w).dump() << "\n";
    witnesses += results[i].witnesses.size();
    comparisons += results[i].comparisons;
    deselections += results[i].deselections;
  }
  std::cout << to_string(*property) << " " << to_string(mechanism) << ": " << (witnesses == 0 ? "holds" : "violated")
            << " (" << corpus.size() << " instance" << (corpus.size() == 1 ? "" : "s") << ", " << comparisons
            << " comparisons, " << witnesses << " witnesses, " << deselections << " selection changes)\n";
  return witnesses == 0 ? kOk : kViolated;
}

struct GenArgs {
  GenSpec spec;
  std::string policy = "unlimited";
  std::string topology = "graph";
  std::string spec_file;
  std::string output;
};

int cmd_gen(GenArgs args) {
  GenSpec spec = args.spec;
  if (!args.spec_file.empty()) {
    try {
      spec = gen_spec_from_json(nlohmann::json::parse(read_file(args.spec_file)));
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(args.spec_file + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw UsageError(args.spec_file + ": " + e.what());
    }
  } else {
    auto p = parse_budget_policy(args.policy);
    if (!p) throw UsageError("unknown budget policy \"" + args.policy + "\"");
    auto t = parse_topology(args.topology);
    if (!t) throw UsageError("unknown topology \"" + args.topology + "\"");
    spec.budget_policy = *p;
    spec.topology = *t;
  }
  Instance instance;
  try {
    instance = gen_random_instance(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::string text = instance_to_json(instance).dump(2) + "\n";
  if (args.output.empty() || args.output == "-") {
    std::cout << text;
    std::cerr << instance_digest(instance) << "\n";
  } else {
    std::ofstream out(args.output, std::ios::binary);
    if (!out) throw UsageError("cannot write \"" + args.output + "\"");
    out << text;
    std::cout << instance_digest(instance) << "\n";
  }
  return kOk;
}

bool affordable_tree(const Instance& instance, const RootedTree& tree) {
  for (const auto& node : tree.order) {
    const auto budget = instance.budget(node);
    if (!budget || *budget < tree.edge_cost.at(node)) return false;
  }
  return true;
}

void print_pair(const char* title, const Allocation& mechanism, const Allocation& rule, std::ostream& out) {
  out << title << "\n";
  for (const auto& [node, share] : mechanism) {
    out << "  " << std::left << std::setw(8) << node << std::setw(12) << to_string(share) << std::setw(12)
        << to_string(rule.at(node)) << (share == rule.at(node) ? "equal" : "DIFFERENT") << "\n";
  }
}

bool compare_tree(const Instance& instance, const SolveOptions& options, std::ostream& out) {
  RootedTree tree;
  try {
    tree = root_tree(instance);
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
  bool equal = true;
  const auto amcm = run_amcm(instance, {}, options);
  const auto ck = claus_kleitman_shares(tree);
  equal = equal && amcm.shares == ck;
  out << "instance " << instance_digest(instance) << "\n";
  print_pair("amcm vs edge-splitting rule", amcm.shares, ck, out);

  if (affordable_tree(instance, tree)) {
    const auto scsm = run_scsm(instance, {}, options);
    const auto savings = savings_tree_shares(tree, instance.budgets);
    equal = equal && scsm.shares == savings;
    print_pair("scsm vs savings rule", scsm.shares, savings, out);
  } else {
    out << "scsm vs savings rule: skipped (budgets missing or below a parent edge)\n";
  }
  return equal;
}

struct TreeArgs {
  std::string instance;
  std::string random;
};

int cmd_tree_compare(const TreeArgs& args, const SolveOptions& options) {
  if (args.instance.empty() == args.random.empty()) throw UsageError("give exactly one of --instance or --random");
  std::vector<Instance> corpus;
  if (!args.instance.empty()) {
    corpus.push_back(load_instance(args.instance));
  } else {
    auto random = parse_random(args.random, BudgetPolicy::tight);
    if (random.spec.topology == Topology::graph) random.spec.topology = Topology::tree;
    corpus = build_corpus(random);
  }
  std::size_t mismatches = 0;
  for (const auto& instance : corpus) {
    if (!compare_tree(instance, options, std::cout)) ++mismatches;
  }
  std::cout << (mismatches == 0 ? "equal" : "mismatch") << " (" << corpus.size() << " tree"
            << (corpus.size() == 1 ? "" : "s") << ", " << mismatches << " mismatched)\n";
  return mismatches == 0 ? kOk : kViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact connection cost sharing: AMCM and SCSM solver and property checker"};
  app.require_subcommand(1);
  app.fallthrough();

  std::size_t cap = kDefaultCoalitionCap;
  std::string format = "json";
  app.add_option("--max-coalition-nodes", cap, "Enumeration cap on selected nodes")
      ->envname("CONNSHARE_MAX_COALITION_NODES")
      ->check(CLI::Range(std::size_t{1}, kMaxCoalitionCap));
  app.add_option("--format", format, "Output format for solve")
      ->envname("CONNSHARE_FORMAT")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run a mechanism on an instance");
  solve_cmd->add_option("--mechanism", solve.mechanism, "amcm or scsm")->required();
  solve_cmd->add_option("--instance", solve.instance, "Instance JSON file")->required();
  solve_cmd->add_option("--report", solve.report, "Report profile JSON file (default: truthful)");
  solve_cmd->add_flag("--dump-table", solve.dump_table, "Also print the coalition value table");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Certify a mechanism property by enumeration");
  check_cmd->add_option("--property", check.property,
                        "truthfulness, budget_feasibility, budget_balance, cost_monotonicity or positiveness")
      ->required();
  check_cmd->add_option("--mechanism", check.mechanism, "amcm or scsm")->required();
  check_cmd->add_option("--instance", check.instance, "Instance JSON file");
  check_cmd->add_option("--random", check.random,
                        "Random corpus, e.g. n=5,seed=7,trials=50[,density=,policy=,cost-min=,cost-max=,topology=]");
  check_cmd->add_option("--jobs", check.jobs, "Worker threads (0 = all cores)");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a seeded random instance");
  gen_cmd->add_option("--nodes", gen.spec.nodes, "Non-source node count");
  gen_cmd->add_option("--density", gen.spec.density, "Extra-edge probability in (0,1]");
  gen_cmd->add_option("--seed", gen.spec.seed, "PRNG seed");
  gen_cmd->add_option("--cost-min", gen.spec.cost_min);
  gen_cmd->add_option("--cost-max", gen.spec.cost_max);
  gen_cmd->add_option("--budget-policy", gen.policy, "unlimited, uniform or tight");
  gen_cmd->add_option("--budget-min", gen.spec.budget_min);
  gen_cmd->add_option("--budget-max", gen.spec.budget_max);
  gen_cmd->add_option("--slack-min", gen.spec.slack_min);
  gen_cmd->add_option("--slack-max", gen.spec.slack_max);
  gen_cmd->add_option("--topology", gen.topology, "graph, tree or line");
  gen_cmd->add_option("--spec", gen.spec_file, "Generator spec JSON file (overrides the flags)");
  gen_cmd->add_option("-o,--output", gen.output, "Output path (default stdout)");

  TreeArgs tree;
  auto* tree_cmd = app.add_subcommand("tree-compare", "Compare the mechanisms with the closed-form tree rules");
  tree_cmd->add_option("--instance", tree.instance, "Tree-shaped instance JSON file");
  tree_cmd->add_option("--random", tree.random, "Random trees, e.g. n=8,seed=1,trials=100");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  const SolveOptions options{cap};
  try {
    if (*solve_cmd) return cmd_solve(solve, format, options);
    if (*check_cmd) return cmd_check(check, options);
    if (*gen_cmd) return cmd_gen(gen);
    if (*tree_cmd) return cmd_tree_compare(tree, options);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

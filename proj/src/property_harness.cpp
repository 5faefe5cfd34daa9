#include "connshare/property_harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace connshare {

using nlohmann::json;

std::string_view to_string(Property property) {
  switch (property) {
    case Property::truthfulness: return "truthfulness";
    case Property::budget_feasibility: return "budget_feasibility";
    case Property::budget_balance: return "budget_balance";
    case Property::cost_monotonicity: return "cost_monotonicity";
    case Property::positiveness: return "positiveness";
  }
  return "?";
}

std::optional<Property> parse_property(std::string_view name) {
  for (auto p : {Property::truthfulness, Property::budget_feasibility, Property::budget_balance,
                 Property::cost_monotonicity, Property::positiveness}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::string_view to_string(BudgetPolicy policy) {
  switch (policy) {
    case BudgetPolicy::unlimited: return "unlimited";
    case BudgetPolicy::uniform: return "uniform";
    case BudgetPolicy::tight: return "tight";
  }
  return "?";
}

std::optional<BudgetPolicy> parse_budget_policy(std::string_view name) {
  for (auto p : {BudgetPolicy::unlimited, BudgetPolicy::uniform, BudgetPolicy::tight}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::string_view to_string(Topology topology) {
  switch (topology) {
    case Topology::graph: return "graph";
    case Topology::tree: return "tree";
    case Topology::line: return "line";
  }
  return "?";
}

std::optional<Topology> parse_topology(std::string_view name) {
  for (auto t : {Topology::graph, Topology::tree, Topology::line}) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

std::string_view to_string(PerturbKind kind) {
  switch (kind) {
    case PerturbKind::plus_one: return "+1";
    case PerturbKind::times_two: return "x2";
    case PerturbKind::times_ten: return "x10";
  }
  return "?";
}

void validate(const GenSpec& spec) {
  constexpr std::int64_t limit = std::int64_t{1} << 40;
  auto range = [&](std::int64_t lo, std::int64_t hi, const char* what) {
    if (lo < 0 || hi < lo || hi > limit) {
      throw std::invalid_argument(std::string("invalid ") + what + " range [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
    }
  };
  if (spec.nodes < 1) throw std::invalid_argument("node count must be at least 1");
  if (!(spec.density > 0.0 && spec.density <= 1.0)) throw std::invalid_argument("density must lie in (0, 1]");
  range(spec.cost_min, spec.cost_max, "cost");
  if (spec.budget_policy == BudgetPolicy::uniform) {
    range(spec.budget_min, spec.budget_max, "budget");
    if (spec.budget_min < 1) throw std::invalid_argument("budgets must be positive: budget_min >= 1");
  }
  if (spec.budget_policy == BudgetPolicy::tight) {
    range(spec.slack_min, spec.slack_max, "slack");
    if (spec.cost_min + spec.slack_min < 1) {
      throw std::invalid_argument("tight budgets could be zero: need cost_min + slack_min >= 1");
    }
  }
}

GenSpec gen_spec_from_json(const json& doc) {
  GenSpec spec;
  if (!doc.is_object()) throw std::invalid_argument("generator spec must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "nodes") spec.nodes = value.get<std::size_t>();
    else if (key == "density") spec.density = value.get<double>();
    else if (key == "cost_min") spec.cost_min = value.get<std::int64_t>();
    else if (key == "cost_max") spec.cost_max = value.get<std::int64_t>();
    else if (key == "budget_min") spec.budget_min = value.get<std::int64_t>();
    else if (key == "budget_max") spec.budget_max = value.get<std::int64_t>();
    else if (key == "slack_min") spec.slack_min = value.get<std::int64_t>();
    else if (key == "slack_max") spec.slack_max = value.get<std::int64_t>();
    else if (key == "seed") spec.seed = value.get<std::uint64_t>();
    else if (key == "budget_policy") {
      auto p = parse_budget_policy(value.get<std::string>());
      if (!p) throw std::invalid_argument("unknown budget policy \"" + value.get<std::string>() + "\"");
      spec.budget_policy = *p;
    } else if (key == "topology") {
      auto t = parse_topology(value.get<std::string>());
      if (!t) throw std::invalid_argument("unknown topology \"" + value.get<std::string>() + "\"");
      spec.topology = *t;
    } else {
      throw std::invalid_argument("unknown generator field \"" + key + "\"");
    }
  }
  validate(spec);
  return spec;
}

json gen_spec_to_json(const GenSpec& spec) {
  return {{"nodes", spec.nodes},
          {"density", spec.density},
          {"cost_min", spec.cost_min},
          {"cost_max", spec.cost_max},
          {"budget_policy", std::string(to_string(spec.budget_policy))},
          {"budget_min", spec.budget_min},
          {"budget_max", spec.budget_max},
          {"slack_min", spec.slack_min},
          {"slack_max", spec.slack_max},
          {"topology", std::string(to_string(spec.topology))},
          {"seed", spec.seed}};
}

namespace {

// std distributions are implementation-defined; these draws are not.
class Draws {
 public:
  explicit Draws(std::uint64_t seed) : engine_(seed) {}

  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

Instance gen_random_instance(const GenSpec& spec) {
  validate(spec);
  Draws draw(spec.seed);

  const std::size_t width = std::to_string(spec.nodes).size();
  std::vector<NodeId> ids{"s"};
  for (std::size_t k = 1; k <= spec.nodes; ++k) {
    std::string digits = std::to_string(k);
    ids.push_back("v" + std::string(width - digits.size(), '0') + digits);
  }

  Instance instance;
  instance.source = "s";
  instance.nodes = ids;
  std::vector<std::vector<char>> linked(ids.size(), std::vector<char>(ids.size(), 0));
  std::vector<std::int64_t> parent_cost(ids.size(), 0);

  for (std::size_t k = 1; k <= spec.nodes; ++k) {
    const std::size_t parent =
        spec.topology == Topology::line ? k - 1 : static_cast<std::size_t>(draw.between(0, static_cast<std::int64_t>(k) - 1));
    const std::int64_t cost = draw.between(spec.cost_min, spec.cost_max);
    parent_cost[k] = cost;
    linked[parent][k] = linked[k][parent] = 1;
    instance.edges.push_back({ids[parent], ids[k], Rational(static_cast<long>(cost))});
  }
  if (spec.topology == Topology::graph) {
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        if (linked[a][b] || !draw.chance(spec.density)) continue;
        linked[a][b] = linked[b][a] = 1;
        instance.edges.push_back({ids[a], ids[b], Rational(static_cast<long>(draw.between(spec.cost_min, spec.cost_max)))});
      }
    }
  }
  for (std::size_t k = 1; k <= spec.nodes; ++k) {
    switch (spec.budget_policy) {
      case BudgetPolicy::unlimited:
        break;
      case BudgetPolicy::uniform:
        instance.budgets.emplace(ids[k], Rational(static_cast<long>(draw.between(spec.budget_min, spec.budget_max))));
        break;
      case BudgetPolicy::tight:
        instance.budgets.emplace(
            ids[k], Rational(static_cast<long>(parent_cost[k] + draw.between(spec.slack_min, spec.slack_max))));
        break;
    }
  }
  validate(instance);
  return instance;
}

std::vector<ReportProfile> enumerate_reports(const Instance& instance, const NodeId& node) {
  if (node == instance.source) throw std::invalid_argument("the source does not report");
  const auto incident = instance.incident_edges(node);
  if (incident.size() >= 32) throw std::invalid_argument("node degree too large to enumerate reports");
  std::vector<ReportProfile> out;
  const std::uint32_t count = std::uint32_t{1} << incident.size();
  out.reserve(count);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    ReportProfile report;
    auto& declared = report.declared[node];
    for (std::size_t k = 0; k < incident.size(); ++k) {
      if (mask >> k & 1U) declared.insert(incident[k]);
    }
    out.push_back(std::move(report));
  }
  return out;
}

Instance perturbed(const Instance& instance, const Perturbation& perturbation) {
  Instance copy = instance;
  auto& cost = copy.edges.at(perturbation.edge).cost;
  switch (perturbation.kind) {
    case PerturbKind::plus_one: cost += 1; break;
    case PerturbKind::times_two: cost *= 2; break;
    case PerturbKind::times_ten: cost *= 10; break;
  }
  return copy;
}

json violation_to_json(const Instance& instance, const ViolationReport& report) {
  json doc{{"property", std::string(to_string(report.property))},
           {"mechanism", std::string(to_string(report.mechanism))},
           {"instance", report.instance_digest},
           {"node", report.node},
           {"baseline", report_to_json(instance, report.baseline)},
           {"before", to_string(report.before)},
           {"after", to_string(report.after)}};
  if (report.deviation) doc["deviation"] = report_to_json(instance, *report.deviation);
  if (report.perturbation) {
    doc["perturbation"] = {{"edge", edge_label(instance.edges.at(report.perturbation->edge))},
                           {"kind", std::string(to_string(report.perturbation->kind))}};
  }
  return doc;
}

namespace {

constexpr PerturbKind kPerturbations[] = {PerturbKind::plus_one, PerturbKind::times_two, PerturbKind::times_ten};

ViolationReport witness(const Instance& instance, Mechanism mechanism, Property property, NodeId node,
                        Rational before, Rational after) {
  ViolationReport report;
  report.property = property;
  report.mechanism = mechanism;
  report.instance_digest = instance_digest(instance);
  report.node = std::move(node);
  report.before = std::move(before);
  report.after = std::move(after);
  return report;
}

}  // namespace

PropertyCheck check_property(const Instance& instance, Mechanism mechanism, Property property,
                             const SolveOptions& options) {
  PropertyCheck check;
  check.property = property;
  check.mechanism = mechanism;
  const auto base = run_mechanism(mechanism, instance, {}, options);

  switch (property) {
    case Property::budget_balance: {
      ++check.comparisons;
      const Rational paid = total(base.shares);
      if (paid != base.total_cost) {
        check.witnesses.push_back(witness(instance, mechanism, property, "", paid, base.total_cost));
      }
      break;
    }
    case Property::positiveness:
      for (const auto& [node, share] : base.shares) {
        ++check.comparisons;
        if (sgn(share) < 0) check.witnesses.push_back(witness(instance, mechanism, property, node, share, 0));
      }
      break;
    case Property::budget_feasibility:
      for (const auto& [node, share] : base.shares) {
        const auto budget = instance.budget(node);
        if (!budget) continue;
        ++check.comparisons;
        if (share > *budget) check.witnesses.push_back(witness(instance, mechanism, property, node, share, *budget));
      }
      break;
    case Property::truthfulness:
      for (const auto& node : instance.agents()) {
        const bool selected = base.is_selected(node);
        auto reports = enumerate_reports(instance, node);
        reports.pop_back();  // truthful profile
        for (auto& report : reports) {
          const auto out = run_mechanism(mechanism, instance, report, options);
          if (!selected || !out.is_selected(node)) {
            if (selected != out.is_selected(node)) ++check.deselections;
            continue;
          }
          ++check.comparisons;
          if (base.share(node) > out.share(node)) {
            auto w = witness(instance, mechanism, property, node, base.share(node), out.share(node));
            w.deviation = std::move(report);
            check.witnesses.push_back(std::move(w));
          }
        }
      }
      break;
    case Property::cost_monotonicity:
      for (const auto& node : base.selected) {
        for (std::size_t e : instance.incident_edges(node)) {
          for (PerturbKind kind : kPerturbations) {
            const Perturbation p{e, kind};
            const auto out = run_mechanism(mechanism, perturbed(instance, p), {}, options);
            if (!out.is_selected(node)) {
              ++check.deselections;
              continue;
            }
            ++check.comparisons;
            if (out.share(node) < base.share(node)) {
              auto w = witness(instance, mechanism, property, node, base.share(node), out.share(node));
              w.perturbation = p;
              check.witnesses.push_back(std::move(w));
            }
          }
        }
      }
      break;
  }
  return check;
}

bool replays(const Instance& instance, const ViolationReport& report, const SolveOptions& options) {
  if (report.instance_digest != instance_digest(instance)) return false;
  const auto base = run_mechanism(report.mechanism, instance, report.baseline, options);
  switch (report.property) {
    case Property::budget_balance:
      return total(base.shares) == report.before && base.total_cost == report.after && report.before != report.after;
    case Property::positiveness:
      return base.share(report.node) == report.before && sgn(report.before) < 0;
    case Property::budget_feasibility: {
      const auto budget = instance.budget(report.node);
      return budget && base.share(report.node) == report.before && *budget == report.after &&
             report.before > report.after;
    }
    case Property::truthfulness: {
      if (!report.deviation) return false;
      const auto out = run_mechanism(report.mechanism, instance, *report.deviation, options);
      return base.is_selected(report.node) && out.is_selected(report.node) &&
             base.share(report.node) == report.before && out.share(report.node) == report.after &&
             report.before > report.after;
    }
    case Property::cost_monotonicity: {
      if (!report.perturbation) return false;
      const auto out = run_mechanism(report.mechanism, perturbed(instance, *report.perturbation), report.baseline, options);
      return out.is_selected(report.node) && base.share(report.node) == report.before &&
             out.share(report.node) == report.after && report.after < report.before;
    }
  }
  return false;
}

std::vector<PropertyCheck> check_corpus(const std::vector<Instance>& corpus, Mechanism mechanism, Property property,
                                        const SolveOptions& options, unsigned jobs) {
  if (jobs == 0) jobs = std::max(1U, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, corpus.size())));
  std::vector<PropertyCheck> results(corpus.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < corpus.size(); i = next++) {
      try {
        results[i] = check_property(corpus[i], mechanism, property, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace connshare

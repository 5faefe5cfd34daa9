#include "connshare/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <limits>

namespace connshare {

using nlohmann::json;

std::string edge_label(const Edge& edge) { return edge.u + "-" + edge.v; }

std::vector<NodeId> Instance::agents() const {
  std::vector<NodeId> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) {
    if (n != source) out.push_back(n);
  }
  return out;
}

std::optional<Rational> Instance::budget(const NodeId& node) const {
  if (auto it = budgets.find(node); it != budgets.end()) return it->second;
  return std::nullopt;
}

std::vector<std::size_t> Instance::incident_edges(const NodeId& node) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].touches(node)) out.push_back(e);
  }
  return out;
}

bool Instance::has_node(const NodeId& node) const {
  return std::binary_search(nodes.begin(), nodes.end(), node);
}

void validate(Instance& instance) {
  std::sort(instance.nodes.begin(), instance.nodes.end());
  if (auto dup = std::adjacent_find(instance.nodes.begin(), instance.nodes.end()); dup != instance.nodes.end()) {
    throw InputError("nodes: duplicate node \"" + *dup + "\"");
  }
  if (!instance.has_node(instance.source)) {
    throw InputError("source: \"" + instance.source + "\" is not a node");
  }
  std::set<std::pair<NodeId, NodeId>> seen;
  for (std::size_t e = 0; e < instance.edges.size(); ++e) {
    const auto& edge = instance.edges[e];
    const std::string where = "edges[" + std::to_string(e) + "]";
    for (const auto* end : {&edge.u, &edge.v}) {
      if (!instance.has_node(*end)) throw InputError(where + ": unknown endpoint \"" + *end + "\"");
    }
    if (edge.u == edge.v) throw InputError(where + ": self-loop on \"" + edge.u + "\"");
    if (sgn(edge.cost) < 0) throw InputError(where + ".cost: negative cost " + to_string(edge.cost));
    auto key = std::minmax(edge.u, edge.v);
    if (!seen.emplace(key.first, key.second).second) {
      throw InputError(where + ": duplicate edge " + key.first + "-" + key.second);
    }
  }
  for (const auto& [node, budget] : instance.budgets) {
    if (!instance.has_node(node)) throw InputError("budgets: unknown node \"" + node + "\"");
    if (node == instance.source) throw InputError("budgets: the source has no budget");
    if (sgn(budget) <= 0) throw InputError("nodes[" + node + "].budget: non-positive budget " + to_string(budget));
  }
}

namespace {

Rational parse_number(const json& value, const std::string& where) {
  try {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer() || value.is_number_unsigned()) return parse_rational(value.dump());
    if (value.is_number_float()) return parse_rational(value.dump());
  } catch (const std::invalid_argument& e) {
    throw InputError(where + ": " + e.what());
  }
  throw InputError(where + ": expected a number or numeric string");
}

const json& require(const json& object, const char* key, const std::string& where) {
  if (!object.is_object() || !object.contains(key)) {
    throw InputError(where + ": missing \"" + key + "\"");
  }
  return object.at(key);
}

std::string require_string(const json& value, const std::string& where) {
  if (!value.is_string()) throw InputError(where + ": expected a string");
  return value.get<std::string>();
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("malformed document: top level must be an object");

  Instance instance;
  instance.source = require_string(require(doc, "source", "$"), "source");
  instance.nodes.push_back(instance.source);

  if (doc.contains("nodes")) {
    const auto& nodes = doc.at("nodes");
    if (!nodes.is_array()) throw InputError("nodes: expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const std::string where = "nodes[" + std::to_string(i) + "]";
      const auto& entry = nodes[i];
      NodeId id = entry.is_string() ? entry.get<std::string>()
                                    : require_string(require(entry, "id", where), where + ".id");
      if (id == instance.source) {
        if (entry.is_object() && entry.contains("budget")) {
          throw InputError(where + ".budget: the source has no budget");
        }
        continue;
      }
      if (std::find(instance.nodes.begin(), instance.nodes.end(), id) != instance.nodes.end()) {
        throw InputError(where + ": duplicate node \"" + id + "\"");
      }
      if (entry.is_object() && entry.contains("budget") && !entry.at("budget").is_null()) {
        Rational budget = parse_number(entry.at("budget"), where + ".budget");
        if (sgn(budget) <= 0) throw InputError(where + ".budget: non-positive budget " + to_string(budget));
        instance.budgets.emplace(id, budget);
      }
      instance.nodes.push_back(std::move(id));
    }
  }

  if (doc.contains("edges")) {
    const auto& edges = doc.at("edges");
    if (!edges.is_array()) throw InputError("edges: expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string where = "edges[" + std::to_string(i) + "]";
      const auto& entry = edges[i];
      Edge edge{require_string(require(entry, "u", where), where + ".u"),
                require_string(require(entry, "v", where), where + ".v"),
                parse_number(require(entry, "cost", where), where + ".cost")};
      instance.edges.push_back(std::move(edge));
    }
  }

  validate(instance);
  return instance;
}

json instance_to_json(const Instance& instance) {
  json nodes = json::array();
  for (const auto& id : instance.agents()) {
    json entry{{"id", id}};
    if (auto b = instance.budget(id)) entry["budget"] = to_string(*b);
    nodes.push_back(std::move(entry));
  }
  json edges = json::array();
  for (const auto& e : instance.edges) {
    edges.push_back({{"u", e.u}, {"v", e.v}, {"cost", to_string(e.cost)}});
  }
  return {{"source", instance.source}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

std::string instance_digest(const Instance& instance) {
  const std::string canonical = instance_to_json(instance).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

bool ReportProfile::declares(const Instance& instance, const NodeId& node, std::size_t edge) const {
  if (node == instance.source) return true;
  auto it = declared.find(node);
  if (it == declared.end()) return true;
  return it->second.contains(edge);
}

void validate(const Instance& instance, const ReportProfile& report) {
  for (const auto& [node, edges] : report.declared) {
    if (!instance.has_node(node)) throw InputError("report: unknown node \"" + node + "\"");
    for (std::size_t e : edges) {
      if (e >= instance.edges.size() || !instance.edges[e].touches(node)) {
        throw InputError("report[" + node + "]: declares an edge that is not adjacent");
      }
    }
  }
}

ReportProfile parse_report(const Instance& instance, std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("malformed report: top level must be an object");

  ReportProfile report;
  for (const auto& [node, list] : doc.items()) {
    const std::string where = "report[" + node + "]";
    if (!instance.has_node(node)) throw InputError(where + ": unknown node");
    if (!list.is_array()) throw InputError(where + ": expected an array of edge labels");
    std::map<std::string, std::size_t> labels;
    for (std::size_t e : instance.incident_edges(node)) {
      const auto& edge = instance.edges[e];
      labels.emplace(edge.u + "-" + edge.v, e);
      labels.emplace(edge.v + "-" + edge.u, e);
    }
    auto& declared = report.declared[node];
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string label = require_string(list[i], where + "[" + std::to_string(i) + "]");
      auto hit = labels.find(label);
      if (hit == labels.end()) {
        throw InputError(where + "[" + std::to_string(i) + "]: \"" + label + "\" is not an adjacent edge");
      }
      declared.insert(hit->second);
    }
  }
  if (auto it = report.declared.find(instance.source); it != report.declared.end()) {
    report.declared.erase(it);
  }
  return report;
}

json report_to_json(const Instance& instance, const ReportProfile& report) {
  json doc = json::object();
  for (const auto& [node, edges] : report.declared) {
    json list = json::array();
    for (std::size_t e : edges) list.push_back(edge_label(instance.edges[e]));
    doc[node] = std::move(list);
  }
  return doc;
}

Graph::Graph(std::vector<NodeId> ids, std::size_t source, std::vector<Link> links)
    : ids_(std::move(ids)), source_(source), links_(std::move(links)), adjacency_(ids_.size()) {
  for (std::size_t l = 0; l < links_.size(); ++l) {
    adjacency_[links_[l].a].push_back({links_[l].b, l});
    adjacency_[links_[l].b].push_back({links_[l].a, l});
  }
  for (auto& arcs : adjacency_) {
    std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) { return x.to < y.to; });
  }
}

std::optional<std::size_t> Graph::index_of(const NodeId& node) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), node);
  if (it == ids_.end() || *it != node) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

std::size_t Graph::require_index(const NodeId& node) const {
  if (auto i = index_of(node)) return *i;
  throw std::out_of_range("unknown node \"" + node + "\"");
}

std::vector<std::size_t> Graph::indices_of(std::span<const NodeId> nodes) const {
  std::vector<std::size_t> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(require_index(n));
  std::sort(out.begin(), out.end());
  return out;
}

bool Graph::has_link(std::size_t a, std::size_t b) const {
  for (const auto& arc : adjacency_[a]) {
    if (arc.to == b) return true;
  }
  return false;
}

Graph induced_graph(const Instance& instance, const ReportProfile& report) {
  validate(instance, report);
  std::vector<NodeId> ids = instance.nodes;
  std::sort(ids.begin(), ids.end());
  auto index = [&](const NodeId& n) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), n) - ids.begin());
  };
  std::vector<Graph::Link> links;
  for (std::size_t e = 0; e < instance.edges.size(); ++e) {
    const auto& edge = instance.edges[e];
    if (report.declares(instance, edge.u, e) && report.declares(instance, edge.v, e)) {
      std::size_t a = index(edge.u), b = index(edge.v);
      links.push_back({std::min(a, b), std::max(a, b), edge.cost, e});
    }
  }
  const std::size_t source = index(instance.source);
  return Graph(std::move(ids), source, std::move(links));
}

std::vector<std::size_t> SpanningTreeResult::covered_sorted() const {
  auto out = covered;
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

SpanningTreeResult grow_tree(const Graph& graph, std::size_t root, const std::vector<char>* allowed) {
  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  SpanningTreeResult result;
  std::vector<char> in_tree(graph.size(), 0);
  in_tree[root] = 1;
  std::vector<std::size_t> tree_nodes{root};

  for (;;) {
    std::size_t best_link = none, best_node = none, best_from = none;
    for (std::size_t from : tree_nodes) {
      for (const auto& arc : graph.neighbors(from)) {
        if (in_tree[arc.to]) continue;
        if (allowed && !(*allowed)[arc.to]) continue;
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
    in_tree[best_node] = 1;
    tree_nodes.push_back(best_node);
    result.links.push_back(best_link);
    result.covered.push_back(best_node);
    result.total_cost += graph.links()[best_link].cost;
  }
  return result;
}

}  // namespace

SpanningTreeResult prim_mst(const Graph& graph, std::size_t source) { return grow_tree(graph, source, nullptr); }

SpanningTreeResult prim_mst(const Graph& graph, const NodeId& source) {
  return prim_mst(graph, graph.require_index(source));
}

SpanningTreeResult prim_mst_within(const Graph& graph, const std::vector<char>& allowed) {
  return grow_tree(graph, graph.source(), &allowed);
}

std::optional<Rational> induced_mst_cost(const Graph& graph, std::span<const std::size_t> vertex_set) {
  if (vertex_set.empty()) return Rational(0);
  std::vector<char> allowed(graph.size(), 0);
  for (std::size_t v : vertex_set) allowed[v] = 1;
  auto tree = prim_mst_within(graph, allowed);
  if (tree.covered.size() != vertex_set.size()) return std::nullopt;
  return tree.total_cost;
}

}  // namespace connshare

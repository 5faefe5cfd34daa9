#pragma once

#include "connshare/rational.hpp"

#include <json.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace connshare {

using NodeId = std::string;

/// Raised for malformed instance or report documents. The message starts with
/// the JSON location of the offending item.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  NodeId u;
  NodeId v;
  Rational cost;

  bool touches(const NodeId& node) const { return u == node || v == node; }
  const NodeId& other(const NodeId& node) const { return u == node ? v : u; }
};

/// "u-v" as used in report files.
std::string edge_label(const Edge& edge);

/// Connection problem: nodes, one source, undirected edges and public budgets.
///
/// `nodes` is kept sorted and contains the source. A node without an entry in
/// `budgets` has an unlimited budget.
struct Instance {
  std::vector<NodeId> nodes;
  NodeId source;
  std::vector<Edge> edges;
  std::map<NodeId, Rational> budgets;

  /// Non-source nodes in id order.
  std::vector<NodeId> agents() const;
  std::optional<Rational> budget(const NodeId& node) const;
  /// Indices into `edges` of the edges touching `node`, in file order.
  std::vector<std::size_t> incident_edges(const NodeId& node) const;
  bool has_node(const NodeId& node) const;
};

/// Checks every Instance invariant and sorts `nodes`. Throws InputError.
void validate(Instance& instance);

Instance parse_instance(std::string_view text);
nlohmann::json instance_to_json(const Instance& instance);
/// FNV-1a over the compact canonical JSON form, as 16 hex digits.
std::string instance_digest(const Instance& instance);

/// Edges each node declares usable, as indices into Instance::edges.
/// A node without an entry is truthful (declares all its edges); the source is
/// always truthful.
struct ReportProfile {
  std::map<NodeId, std::set<std::size_t>> declared;

  bool declares(const Instance& instance, const NodeId& node, std::size_t edge) const;
};

ReportProfile parse_report(const Instance& instance, std::string_view text);
/// Throws InputError if some declared edge is not adjacent to its declarer.
void validate(const Instance& instance, const ReportProfile& report);
nlohmann::json report_to_json(const Instance& instance, const ReportProfile& report);

/// Weighted undirected graph over dense node indices. Index order equals node-id
/// order, so comparing indices is comparing ids.
class Graph {
 public:
  struct Link {
    std::size_t a;
    std::size_t b;
    Rational cost;
    std::size_t instance_edge;
  };
  struct Arc {
    std::size_t to;
    std::size_t link;
  };

  Graph() = default;
  Graph(std::vector<NodeId> ids, std::size_t source, std::vector<Link> links);

  std::size_t size() const { return ids_.size(); }
  std::size_t source() const { return source_; }
  const NodeId& id(std::size_t index) const { return ids_[index]; }
  const std::vector<NodeId>& ids() const { return ids_; }
  std::optional<std::size_t> index_of(const NodeId& node) const;
  std::size_t require_index(const NodeId& node) const;
  std::vector<std::size_t> indices_of(std::span<const NodeId> nodes) const;

  const std::vector<Link>& links() const { return links_; }
  const std::vector<Arc>& neighbors(std::size_t index) const { return adjacency_[index]; }
  bool has_link(std::size_t a, std::size_t b) const;

 private:
  std::vector<NodeId> ids_;
  std::size_t source_ = 0;
  std::vector<Link> links_;
  std::vector<std::vector<Arc>> adjacency_;
};

/// Graph whose edges are those declared by both endpoints.
Graph induced_graph(const Instance& instance, const ReportProfile& report);
inline Graph truthful_graph(const Instance& instance) { return induced_graph(instance, {}); }

struct SpanningTreeResult {
  std::vector<std::size_t> links;  ///< indices into Graph::links(), in insertion order
  Rational total_cost;
  std::vector<std::size_t> covered;  ///< non-source nodes, in insertion order

  std::vector<std::size_t> covered_sorted() const;
};

/// Prim's algorithm from `source`. Ties on cost go to the smaller candidate
/// node, then the smaller tree node. Covers the source's component only.
SpanningTreeResult prim_mst(const Graph& graph, std::size_t source);
SpanningTreeResult prim_mst(const Graph& graph, const NodeId& source);

/// Prim restricted to the subgraph induced by `allowed` (plus the source).
SpanningTreeResult prim_mst_within(const Graph& graph, const std::vector<char>& allowed);

/// MST cost of the subgraph induced on `vertex_set` and the source, or nullopt
/// if some vertex of the set cannot be reached inside it.
std::optional<Rational> induced_mst_cost(const Graph& graph, std::span<const std::size_t> vertex_set);

}  // namespace connshare

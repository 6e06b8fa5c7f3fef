// Copyright 2026 The dgbc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgbc/node_set.hpp"

namespace dgbc {

using Edge = std::pair<NodeId, NodeId>;

/// Thrown for malformed graphs and out-of-range or inconsistent node sets.
class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable simple directed graph over nodes 0..n-1 with no self-loops.
/// Every node carries a unique display name (defaults to its index).
class DiGraph {
 public:
  DiGraph() = default;

  /// Throws GraphError on self-loops, duplicate edges, out-of-range
  /// endpoints, n > 64, or duplicate/mis-sized names.
  DiGraph(NodeId n, const std::vector<Edge>& edges, std::vector<std::string> names = {});

  NodeId size() const { return n_; }
  NodeSet nodes() const { return NodeSet::first_n(n_); }
  const std::string& name(NodeId i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<NodeId> find(const std::string& name) const;

  bool has_edge(NodeId tail, NodeId head) const { return out_[tail].contains(head); }
  NodeSet out(NodeId i) const { return out_[i]; }
  NodeSet in(NodeId i) const { return in_[i]; }
  std::size_t edge_count() const;

  /// All edges sorted by (tail, head).
  std::vector<Edge> edges() const;

  /// Names of the members of `s`, ascending by index.
  std::vector<std::string> names_of(NodeSet s) const;
  /// Resolves names to a set; throws GraphError on unknown names.
  NodeSet set_of(const std::vector<std::string>& names) const;

  /// Throws GraphError if `s` has members outside 0..n-1.
  void check(NodeSet s) const;
  void check(NodeId i) const;

  friend bool operator==(const DiGraph&, const DiGraph&) = default;

 private:
  NodeId n_ = 0;
  std::vector<std::string> names_;
  std::vector<NodeSet> out_;
  std::vector<NodeSet> in_;
};

/// { i not in B | exists j in B with (i,j) in E }
NodeSet incoming_neighbors(const DiGraph& g, NodeSet b);

/// Strongly connected components of the subgraph induced by `active`.
struct SccDecomposition {
  /// Components ordered by their smallest member.
  std::vector<NodeSet> components;
  /// component_of[i] is the component index of active node i, -1 otherwise.
  std::vector<int> component_of;
  /// reaches[k] lists every l != k such that nodes of component k have a path
  /// to nodes of component l (transitive closure of the condensation).
  std::vector<std::vector<int>> reaches;

  /// Components not reachable from any other component.
  std::vector<int> sources() const;
};

SccDecomposition scc_decomposition(const DiGraph& g);
SccDecomposition scc_decomposition(const DiGraph& g, NodeSet active);

/// G with the nodes of `removed` isolated, plus the surviving node set.
struct ReducedGraph {
  DiGraph graph;
  NodeSet nodes;
};

/// G_{F,F1}: nodes V-F; drops every edge incident on F and every edge
/// leaving F1. Throws GraphError if F and F1 overlap, F = V, F1 is not a
/// proper subset of V-F, or (when a bound is given) |F| or |F1| exceeds it.
ReducedGraph reduced_graph(const DiGraph& g, NodeSet faulty, NodeSet silenced,
                           std::optional<int> bound = std::nullopt);

/// G_{-F}: nodes V-F with all edges incident on F removed.
ReducedGraph without(const DiGraph& g, NodeSet removed);

/// Node set of the source component of G_{F,F1}. When several source
/// components exist, the one holding the smallest node index is returned.
NodeSet source_component(const DiGraph& g, NodeSet faulty, NodeSet silenced,
                         std::optional<int> bound = std::nullopt);

/// Nodes of `within` that can reach `target` using only nodes of `within`.
NodeSet reaching(const DiGraph& g, NodeId target, NodeSet within);
/// Nodes of `within` reachable from `origin` using only nodes of `within`.
NodeSet reachable_from(const DiGraph& g, NodeId origin, NodeSet within);

/// True iff every ordered pair of `s` is joined by a path inside `within`.
bool strongly_connected_in(const DiGraph& g, NodeSet s, NodeSet within);

/// Lexicographically smallest shortest path origin -> target through
/// `within`; empty when unreachable.
std::vector<NodeId> shortest_path(const DiGraph& g, NodeId origin, NodeId target, NodeSet within);

/// Certificate of pairwise vertex-disjoint (sources, target)-paths that avoid
/// `excluded`. Paths share only the target (and, for single-source queries,
/// the source).
struct PathSet {
  NodeId target = 0;
  NodeSet sources;
  NodeSet excluded;
  std::vector<std::vector<NodeId>> paths;
  /// Present when fewer paths than requested exist: a vertex set of size
  /// paths.size() meeting every (sources, target)-path that avoids
  /// `excluded`. May contain source nodes.
  std::optional<NodeSet> cut;

  std::size_t count() const { return paths.size(); }
};

/// Up to k vertex-disjoint (sources, target)-paths excluding `excluded`,
/// computed by unit-capacity max-flow on the node-split graph with edges
/// explored in ascending (tail, head) order. Deterministic.
/// Throws GraphError if target is in sources or excluded, or sources and
/// excluded overlap.
PathSet max_disjoint_paths(const DiGraph& g, NodeSet sources, NodeId target, NodeSet excluded,
                           std::size_t k);

/// Single-source variant: paths share `source` and `target` only. The cut is
/// reported only when (source, target) is not an edge.
PathSet max_disjoint_paths_between(const DiGraph& g, NodeId source, NodeId target,
                                   NodeSet excluded, std::size_t k);

/// Number of disjoint (sources, target)-paths excluding `excluded`, capped
/// at k. Same flow as max_disjoint_paths, without extracting paths.
std::size_t count_disjoint_paths(const DiGraph& g, NodeSet sources, NodeId target,
                                 NodeSet excluded, std::size_t k);

namespace detail {
/// max_disjoint_paths without the direct-edge shortcut; exposed for tests.
PathSet max_disjoint_paths_flow(const DiGraph& g, NodeSet sources, NodeId target,
                                NodeSet excluded, std::size_t k);
}  // namespace detail

}  // namespace dgbc

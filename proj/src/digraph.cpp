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

#include "dgbc/digraph.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace dgbc {

DiGraph::DiGraph(NodeId n, const std::vector<Edge>& edges, std::vector<std::string> names)
    : n_(n), names_(std::move(names)), out_(n), in_(n) {
  if (n > kMaxNodes) throw GraphError("graph has more than 64 nodes");
  if (names_.empty()) {
    names_.reserve(n);
    for (NodeId i = 0; i < n; ++i) names_.push_back(std::to_string(i));
  }
  if (names_.size() != n) throw GraphError("name count does not match node count");
  std::set<std::string> seen;
  for (const auto& nm : names_) {
    if (nm.empty()) throw GraphError("empty node name");
    if (!seen.insert(nm).second) throw GraphError("duplicate node name '" + nm + "'");
  }
  for (auto [tail, head] : edges) {
    if (tail >= n || head >= n) throw GraphError("edge endpoint out of range");
    if (tail == head) throw GraphError("self-loop on node '" + names_[tail] + "'");
    if (out_[tail].contains(head)) {
      throw GraphError("duplicate edge " + names_[tail] + " -> " + names_[head]);
    }
    out_[tail].insert(head);
    in_[head].insert(tail);
  }
}

std::optional<NodeId> DiGraph::find(const std::string& name) const {
  for (NodeId i = 0; i < n_; ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t DiGraph::edge_count() const {
  std::size_t m = 0;
  for (auto s : out_) m += static_cast<std::size_t>(s.size());
  return m;
}

std::vector<Edge> DiGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId i = 0; i < n_; ++i) {
    for (NodeId j : out_[i]) out.emplace_back(i, j);
  }
  return out;
}

std::vector<std::string> DiGraph::names_of(NodeSet s) const {
  check(s);
  std::vector<std::string> out;
  for (NodeId i : s) out.push_back(names_[i]);
  return out;
}

NodeSet DiGraph::set_of(const std::vector<std::string>& names) const {
  NodeSet s;
  for (const auto& nm : names) {
    auto id = find(nm);
    if (!id) throw GraphError("unknown node '" + nm + "'");
    s.insert(*id);
  }
  return s;
}

void DiGraph::check(NodeSet s) const {
  if (!s.subset_of(nodes())) throw GraphError("node index out of range");
}

void DiGraph::check(NodeId i) const {
  if (i >= n_) throw GraphError("node index out of range");
}

NodeSet incoming_neighbors(const DiGraph& g, NodeSet b) {
  g.check(b);
  NodeSet result;
  for (NodeId j : b) result |= g.in(j);
  return result - b;
}

NodeSet reachable_from(const DiGraph& g, NodeId origin, NodeSet within) {
  if (!within.contains(origin)) return {};
  NodeSet seen = NodeSet::single(origin);
  NodeSet frontier = seen;
  while (!frontier.empty()) {
    NodeSet next;
    for (NodeId u : frontier) next |= g.out(u);
    next = (next & within) - seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

NodeSet reaching(const DiGraph& g, NodeId target, NodeSet within) {
  if (!within.contains(target)) return {};
  NodeSet seen = NodeSet::single(target);
  NodeSet frontier = seen;
  while (!frontier.empty()) {
    NodeSet next;
    for (NodeId u : frontier) next |= g.in(u);
    next = (next & within) - seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

bool strongly_connected_in(const DiGraph& g, NodeSet s, NodeSet within) {
  if (s.empty()) return false;
  if (!s.subset_of(within)) return false;
  NodeId root = s.front();
  return s.subset_of(reachable_from(g, root, within)) && s.subset_of(reaching(g, root, within));
}

std::vector<NodeId> shortest_path(const DiGraph& g, NodeId origin, NodeId target, NodeSet within) {
  if (!within.contains(origin) || !within.contains(target)) return {};
  if (origin == target) return {origin};
  // Layered distances to target over reversed edges.
  std::vector<int> dist(g.size(), -1);
  dist[target] = 0;
  NodeSet seen = NodeSet::single(target);
  NodeSet frontier = seen;
  int level = 0;
  while (!frontier.empty() && dist[origin] < 0) {
    ++level;
    NodeSet next;
    for (NodeId u : frontier) next |= g.in(u);
    next = (next & within) - seen;
    for (NodeId v : next) dist[v] = level;
    seen |= next;
    frontier = next;
  }
  if (dist[origin] < 0) return {};
  std::vector<NodeId> path{origin};
  NodeId cur = origin;
  while (cur != target) {
    for (NodeId nx : g.out(cur) & within) {
      if (dist[nx] == dist[cur] - 1) {
        cur = nx;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

std::vector<int> SccDecomposition::sources() const {
  std::vector<bool> reached(components.size(), false);
  for (const auto& succ : reaches) {
    for (int l : succ) reached[static_cast<std::size_t>(l)] = true;
  }
  std::vector<int> out;
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (!reached[k]) out.push_back(static_cast<int>(k));
  }
  return out;
}

SccDecomposition scc_decomposition(const DiGraph& g) { return scc_decomposition(g, g.nodes()); }

SccDecomposition scc_decomposition(const DiGraph& g, NodeSet active) {
  g.check(active);
  const NodeId n = g.size();
  std::vector<NodeSet> reach(n);
  for (NodeId i : active) reach[i] = reachable_from(g, i, active);

  SccDecomposition d;
  d.component_of.assign(n, -1);
  for (NodeId i : active) {
    if (d.component_of[i] >= 0) continue;
    NodeSet comp;
    for (NodeId j : reach[i]) {
      if (reach[j].contains(i)) comp.insert(j);
    }
    const int idx = static_cast<int>(d.components.size());
    for (NodeId j : comp) d.component_of[j] = idx;
    d.components.push_back(comp);
  }
  d.reaches.resize(d.components.size());
  for (std::size_t k = 0; k < d.components.size(); ++k) {
    NodeSet r = reach[d.components[k].front()] - d.components[k];
    std::vector<bool> mark(d.components.size(), false);
    for (NodeId j : r) mark[static_cast<std::size_t>(d.component_of[j])] = true;
    for (std::size_t l = 0; l < mark.size(); ++l) {
      if (mark[l]) d.reaches[k].push_back(static_cast<int>(l));
    }
  }
  return d;
}

namespace {

void check_reduction_args(const DiGraph& g, NodeSet faulty, NodeSet silenced, std::optional<int> bound) {
  g.check(faulty);
  g.check(silenced);
  if (faulty.intersects(silenced)) throw GraphError("F and F1 overlap");
  if (faulty == g.nodes()) throw GraphError("F must be a proper subset of V");
  if (!silenced.empty() && silenced == g.nodes() - faulty) {
    throw GraphError("F1 must be a proper subset of V-F");
  }
  if (bound && (faulty.size() > *bound || silenced.size() > *bound)) {
    throw GraphError("|F| or |F1| exceeds the fault bound");
  }
}

ReducedGraph build_reduced(const DiGraph& g, NodeSet faulty, NodeSet silenced) {
  std::vector<Edge> kept;
  for (auto [i, j] : g.edges()) {
    if (faulty.contains(i) || faulty.contains(j) || silenced.contains(i)) continue;
    kept.emplace_back(i, j);
  }
  return {DiGraph(g.size(), kept, g.names()), g.nodes() - faulty};
}

}  // namespace

ReducedGraph reduced_graph(const DiGraph& g, NodeSet faulty, NodeSet silenced, std::optional<int> bound) {
  check_reduction_args(g, faulty, silenced, bound);
  return build_reduced(g, faulty, silenced);
}

ReducedGraph without(const DiGraph& g, NodeSet removed) {
  g.check(removed);
  return build_reduced(g, removed, {});
}

NodeSet source_component(const DiGraph& g, NodeSet faulty, NodeSet silenced, std::optional<int> bound) {
  check_reduction_args(g, faulty, silenced, bound);
  // Work on G directly with masked adjacency: a node of F1 keeps its
  // incoming edges but cannot reach anything, so it is a singleton
  // component with no successors.
  const NodeSet active = g.nodes() - faulty;
  const NodeId n = g.size();
  std::vector<NodeSet> reach(n);
  for (NodeId i : active) {
    NodeSet seen = NodeSet::single(i);
    NodeSet frontier = silenced.contains(i) ? NodeSet{} : seen;
    while (!frontier.empty()) {
      NodeSet next;
      for (NodeId u : frontier) next |= g.out(u);
      next = (next & active) - seen;
      seen |= next;
      frontier = next - silenced;
    }
    reach[i] = seen;
  }
  // Components in order of smallest member; the first one not reached from
  // outside itself is the answer.
  NodeSet done;
  for (NodeId i : active) {
    if (done.contains(i)) continue;
    NodeSet comp;
    for (NodeId j : reach[i]) {
      if (reach[j].contains(i)) comp.insert(j);
    }
    done |= comp;
    bool is_source = true;
    for (NodeId j : active - comp) {
      if (reach[j].contains(i)) {
        is_source = false;
        break;
      }
    }
    if (is_source) return comp;
  }
  return {};
}

namespace {

/// Unit vertex-capacity flow from a source set to one target, on the
/// node-split graph: in(v) = 2v, out(v) = 2v+1, in(v) -> out(v) of capacity
/// one. The super source feeds every in(s) with unbounded capacity. Flow
/// paths never re-enter the source set. Residual searches visit vertices in
/// ascending order of discovery and edges in ascending head order.
class BitFlow {
 public:
  BitFlow(const DiGraph& g, NodeSet sources, NodeId target, NodeSet excluded)
      : g_(g), sources_(sources), target_(target), heads_(g.nodes() - excluded - sources) {
    succ_.fill(-1);
    pred_.fill(-1);
  }

  /// Augments until k units flow or no augmenting path remains.
  std::size_t run(std::size_t k) {
    std::size_t flow = 0;
    while (flow < k && augment()) ++flow;
    return flow;
  }

  /// Valid after run() stopped short: vertices whose in-copy is reachable
  /// in the residual graph but whose out-copy is not.
  NodeSet min_cut() const { return reach_in_ - reach_out_ - NodeSet::single(target_); }

  /// One path per used source, ascending by source.
  std::vector<std::vector<NodeId>> paths() const {
    std::vector<std::vector<NodeId>> out;
    for (NodeId s : sources_) {
      if (succ_[s] < 0) continue;
      std::vector<NodeId> p{s};
      for (int v = succ_[s]; v >= 0; v = static_cast<NodeId>(v) == target_ ? -1 : succ_[static_cast<std::size_t>(v)]) {
        p.push_back(static_cast<NodeId>(v));
      }
      out.push_back(std::move(p));
    }
    return out;
  }

 private:
  static constexpr int kSuper = -1;

  bool used(NodeId v) const { return sources_.contains(v) ? succ_[v] >= 0 : pred_[v] >= 0; }

  bool augment() {
    std::array<int, 2 * kMaxNodes> parent{};
    std::array<int, 2 * kMaxNodes> queue{};
    std::size_t tail = 0;
    NodeSet seen_in;
    NodeSet seen_out;
    auto visit_in = [&](NodeId v, int from) {
      if (seen_in.contains(v)) return false;
      seen_in.insert(v);
      parent[2 * v] = from;
      queue[tail++] = static_cast<int>(2 * v);
      return v == target_;
    };
    auto visit_out = [&](NodeId v, int from) {
      if (seen_out.contains(v)) return;
      seen_out.insert(v);
      parent[2 * v + 1] = from;
      queue[tail++] = static_cast<int>(2 * v + 1);
    };
    for (NodeId s : sources_) visit_in(s, kSuper);
    bool found = false;
    for (std::size_t qi = 0; qi < tail && !found; ++qi) {
      const int x = queue[qi];
      const auto v = static_cast<NodeId>(x / 2);
      if (x % 2 == 0) {
        if (v == target_) continue;
        if (!used(v)) {
          visit_out(v, x);
        } else if (!sources_.contains(v)) {
          visit_out(static_cast<NodeId>(pred_[v]), x);
        }
        continue;
      }
      for (NodeId w : g_.out(v) & heads_) {
        if (succ_[v] == static_cast<int>(w)) continue;
        if (visit_in(w, x)) {
          found = true;
          break;
        }
      }
      if (!found && used(v)) visit_in(v, x);
    }
    if (!found) {
      reach_in_ = seen_in;
      reach_out_ = seen_out;
      return false;
    }
    for (int y = static_cast<int>(2 * target_); parent[static_cast<std::size_t>(y)] != kSuper;) {
      const int x = parent[static_cast<std::size_t>(y)];
      const auto a = static_cast<NodeId>(x / 2);
      const auto b = static_cast<NodeId>(y / 2);
      if (a != b) {
        if (x % 2 == 1) {
          // Forward edge a -> b gains flow.
          succ_[a] = static_cast<int>(b);
          if (b != target_) pred_[b] = static_cast<int>(a);
        } else {
          // Reverse step in(a) -> out(b) cancels edge b -> a.
          if (succ_[b] == static_cast<int>(a)) succ_[b] = -1;
          if (pred_[a] == static_cast<int>(b)) pred_[a] = -1;
        }
      }
      y = x;
    }
    return true;
  }

  const DiGraph& g_;
  NodeSet sources_;
  NodeId target_;
  NodeSet heads_;
  std::array<int, kMaxNodes> succ_{};
  std::array<int, kMaxNodes> pred_{};
  NodeSet reach_in_;
  NodeSet reach_out_;
};

void check_path_args(const DiGraph& g, NodeSet sources, NodeId target, NodeSet excluded) {
  g.check(sources);
  g.check(excluded);
  g.check(target);
  if (sources.contains(target)) throw GraphError("target lies in the source set");
  if (excluded.contains(target)) throw GraphError("target lies in the excluded set");
  if (sources.intersects(excluded)) throw GraphError("sources and excluded sets overlap");
}

}  // namespace

namespace detail {

PathSet max_disjoint_paths_flow(const DiGraph& g, NodeSet sources, NodeId target, NodeSet excluded,
                                std::size_t k) {
  check_path_args(g, sources, target, excluded);
  PathSet ps{target, sources, excluded, {}, std::nullopt};
  BitFlow flow(g, sources, target, excluded);
  const std::size_t got = flow.run(k);
  ps.paths = flow.paths();
  if (got < k) ps.cut = flow.min_cut();
  return ps;
}

}  // namespace detail

PathSet max_disjoint_paths(const DiGraph& g, NodeSet sources, NodeId target, NodeSet excluded,
                           std::size_t k) {
  check_path_args(g, sources, target, excluded);
  // The first k augmentations take the direct source in-neighbours in
  // ascending order; skip the search.
  const NodeSet direct = g.in(target) & sources;
  if (static_cast<std::size_t>(direct.size()) >= k) {
    PathSet ps{target, sources, excluded, {}, std::nullopt};
    for (NodeId s : direct) {
      if (ps.paths.size() == k) break;
      ps.paths.push_back({s, target});
    }
    return ps;
  }
  return detail::max_disjoint_paths_flow(g, sources, target, excluded, k);
}

PathSet max_disjoint_paths_between(const DiGraph& g, NodeId source, NodeId target, NodeSet excluded,
                                   std::size_t k) {
  g.check(source);
  if (source == target) throw GraphError("source equals target");
  check_path_args(g, NodeSet::single(source), target, excluded);
  // Internally disjoint (source,target)-paths are the direct edge plus
  // disjoint paths from the source's other out-neighbours, avoiding source.
  PathSet ps{target, NodeSet::single(source), excluded, {}, std::nullopt};
  const bool direct = g.has_edge(source, target);
  if (direct && k > 0) ps.paths.push_back({source, target});
  const std::size_t rest = k - ps.paths.size();
  const NodeSet firsts = g.out(source) - excluded - NodeSet::single(target);
  BitFlow flow(g, firsts, target, excluded | NodeSet::single(source));
  const std::size_t got = flow.run(rest);
  for (auto& p : flow.paths()) {
    p.insert(p.begin(), source);
    ps.paths.push_back(std::move(p));
  }
  if (got < rest && !direct) ps.cut = flow.min_cut();
  return ps;
}

std::size_t count_disjoint_paths(const DiGraph& g, NodeSet sources, NodeId target, NodeSet excluded,
                                 std::size_t k) {
  check_path_args(g, sources, target, excluded);
  const NodeSet direct = g.in(target) & sources;
  if (static_cast<std::size_t>(direct.size()) >= k) return k;
  if (sources.empty()) return 0;
  BitFlow flow(g, sources, target, excluded);
  return flow.run(k);
}

}  // namespace dgbc

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

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dgbc;
using fixtures::names;

TEST_CASE("node sets") {
  NodeSet s = NodeSet::from({5, 1, 3});
  CHECK(s.size() == 3);
  CHECK(s.front() == 1);
  CHECK(s.to_vector() == std::vector<NodeId>{1, 3, 5});
  CHECK((s - NodeSet::single(3)).to_vector() == std::vector<NodeId>{1, 5});
  CHECK(NodeSet::first_n(64).size() == 64);
  CHECK_THROWS_AS(s.insert(64), std::out_of_range);
  CHECK(NodeSet::from({1}).subset_of(s));
  CHECK_FALSE(NodeSet::from({2}).intersects(s));
}

TEST_CASE("graph construction rejects malformed input") {
  CHECK_THROWS_AS(DiGraph(2, {{0, 0}}), GraphError);
  CHECK_THROWS_AS(DiGraph(2, {{0, 1}, {0, 1}}), GraphError);
  CHECK_THROWS_AS(DiGraph(2, {{0, 2}}), GraphError);
  CHECK_THROWS_AS(DiGraph(2, {}, {"a", "a"}), GraphError);
  CHECK_THROWS_AS(DiGraph(2, {}, {"a"}), GraphError);
  CHECK_THROWS_AS(DiGraph(65, {}), GraphError);
  const DiGraph g(3, {{2, 0}, {0, 1}});
  CHECK(g.edges() == std::vector<Edge>{{0, 1}, {2, 0}});
  CHECK(g.name(2) == "2");
}

TEST_CASE("incoming neighbours") {
  const DiGraph sink4 = fixtures::sink4();
  CHECK(incoming_neighbors(sink4, names(sink4, {"x"})) == names(sink4, {"v1", "v2", "v3", "v4"}));
  CHECK(incoming_neighbors(sink4, sink4.nodes()).empty());
  const DiGraph tc = fixtures::two_clique_2();
  const NodeSet k1 = names(tc, {"u1", "u2", "u3", "u4", "u5", "u6", "u7"});
  CHECK(incoming_neighbors(tc, k1) == names(tc, {"w4", "w5", "w6", "w7"}));
}

TEST_CASE("strongly connected components") {
  const DiGraph c3 = fixtures::c3();
  auto d = scc_decomposition(c3);
  REQUIRE(d.components.size() == 1);
  CHECK(d.components[0] == c3.nodes());

  const DiGraph sink4 = fixtures::sink4();
  d = scc_decomposition(sink4);
  REQUIRE(d.components.size() == 2);
  CHECK(d.components[0] == names(sink4, {"v1", "v2", "v3", "v4"}));
  CHECK(d.components[1] == names(sink4, {"x"}));
  CHECK(d.reaches[0] == std::vector<int>{1});
  CHECK(d.reaches[1].empty());
  CHECK(d.sources() == std::vector<int>{0});

  const DiGraph empty3(3, {});
  d = scc_decomposition(empty3);
  CHECK(d.components.size() == 3);
  for (const auto& r : d.reaches) CHECK(r.empty());
}

TEST_CASE("reduced graphs") {
  const DiGraph c3 = fixtures::c3();
  CHECK(reduced_graph(c3, {}, {}).graph == c3);

  auto r = reduced_graph(c3, names(c3, {"c"}), {});
  CHECK(r.nodes == names(c3, {"a", "b"}));
  CHECK(r.graph.edge_count() == 1);
  CHECK(r.graph.has_edge(0, 1));

  r = reduced_graph(c3, {}, names(c3, {"a"}));
  CHECK(r.graph.edges() == std::vector<Edge>{{1, 2}, {2, 0}});

  CHECK_THROWS_AS(reduced_graph(c3, names(c3, {"a"}), names(c3, {"a"})), GraphError);
  CHECK_THROWS_AS(reduced_graph(c3, names(c3, {"a", "b"}), {}, 1), GraphError);
}

TEST_CASE("source components") {
  const DiGraph c3 = fixtures::c3();
  CHECK(source_component(c3, {}, {}) == c3.nodes());
  CHECK(source_component(c3, {}, names(c3, {"a"})) == names(c3, {"b"}));
  const DiGraph sink4 = fixtures::sink4();
  CHECK(source_component(sink4, {}, {}) == names(sink4, {"v1", "v2", "v3", "v4"}));
}

TEST_CASE("source component matches brute force on random graphs") {
  XorShift64Star rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<NodeId>(2 + rng.below(6));
    const DiGraph g = random_digraph(n, 0.15 + 0.5 * rng.uniform(), rng.next());
    NodeSet faulty;
    NodeSet silenced;
    for (NodeId i = 0; i < n; ++i) {
      const auto roll = rng.below(5);
      if (roll == 0) faulty.insert(i);
      if (roll == 1) silenced.insert(i);
    }
    if (faulty == g.nodes() || silenced == g.nodes() - faulty) continue;
    const auto all = oracle::source_components(g, faulty, silenced);
    const NodeSet got = source_component(g, faulty, silenced);
    REQUIRE_FALSE(all.empty());
    NodeSet best = all[0];
    for (const auto& c : all) {
      if (c.front() < best.front()) best = c;
    }
    CHECK(got == best);
    // No edge enters the component from outside in the reduced graph.
    for (NodeId v : got) {
      CHECK((g.in(v) - faulty - silenced - got).empty());
    }
    if (!got.subset_of(silenced)) CHECK_FALSE(got.intersects(silenced));
  }
}

TEST_CASE("shortest paths break ties by smallest next hop") {
  const DiGraph g(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  CHECK(shortest_path(g, 0, 3, g.nodes()) == std::vector<NodeId>{0, 1, 3});
  CHECK(shortest_path(g, 0, 3, g.nodes() - NodeSet::single(1)) == std::vector<NodeId>{0, 2, 3});
  CHECK(shortest_path(g, 3, 0, g.nodes()).empty());
  CHECK(shortest_path(g, 2, 2, g.nodes()) == std::vector<NodeId>{2});
}

TEST_CASE("disjoint paths on the fixtures") {
  const DiGraph sink4 = fixtures::sink4();
  auto ps = max_disjoint_paths(sink4, names(sink4, {"v1", "v2", "v3", "v4"}), 4, {}, 4);
  CHECK(ps.count() == 4);
  for (const auto& p : ps.paths) CHECK(p.size() == 2);

  const DiGraph tc = fixtures::two_clique_2();
  const NodeSet faulty = names(tc, {"u1", "u2"});
  const NodeSet k2 = names(tc, {"w1", "w2", "w3", "w4", "w5", "w6", "w7"});
  ps = max_disjoint_paths(tc, k2, *tc.find("u4"), faulty, 3);
  CHECK(ps.count() == 3);
  CHECK_FALSE(ps.cut.has_value());

  const NodeSet left = names(tc, {"u3", "u4", "u5", "u6", "u7"});
  ps = max_disjoint_paths(tc, left, *tc.find("w1"), faulty, 3);
  CHECK(ps.count() == 2);
  REQUIRE(ps.cut.has_value());
  CHECK(ps.cut->size() == 2);
  CHECK(oracle::max_disjoint(tc, left, *tc.find("w1"), faulty) == 2);
}

namespace {

void check_pathset(const DiGraph& g, const PathSet& ps, NodeSet sources, NodeId target, NodeSet excluded) {
  NodeSet used;
  for (const auto& p : ps.paths) {
    REQUIRE(p.size() >= 2);
    CHECK(sources.contains(p.front()));
    CHECK(p.back() == target);
    NodeSet mine;
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK_FALSE(excluded.contains(p[i]));
      if (i + 1 < p.size()) CHECK(g.has_edge(p[i], p[i + 1]));
      if (p[i] != target) {
        CHECK_FALSE(mine.contains(p[i]));
        mine.insert(p[i]);
      }
    }
    CHECK_FALSE(used.intersects(mine));
    used |= mine;
  }
}

}  // namespace

TEST_CASE("disjoint path counts match brute force") {
  XorShift64Star rng(2024);
  for (int trial = 0; trial < 400; ++trial) {
    const auto n = static_cast<NodeId>(3 + rng.below(5));
    const DiGraph g = random_digraph(n, 0.2 + 0.6 * rng.uniform(), rng.next());
    const auto target = static_cast<NodeId>(rng.below(n));
    NodeSet sources;
    NodeSet excluded;
    for (NodeId i = 0; i < n; ++i) {
      if (i == target) continue;
      const auto roll = rng.below(4);
      if (roll == 0) sources.insert(i);
      if (roll == 1) excluded.insert(i);
    }
    if (sources.empty()) continue;
    const std::size_t best = oracle::max_disjoint(g, sources, target, excluded);
    const std::size_t k = 1 + rng.below(n);
    const PathSet ps = max_disjoint_paths(g, sources, target, excluded, k);
    CHECK(ps.count() == std::min(k, best));
    check_pathset(g, ps, sources, target, excluded);
    CHECK(count_disjoint_paths(g, sources, target, excluded, k) == std::min(k, best));
    if (ps.count() < k) {
      REQUIRE(ps.cut.has_value());
      CHECK(static_cast<std::size_t>(ps.cut->size()) == ps.count());
      CHECK_FALSE(ps.cut->contains(target));
      CHECK(oracle::max_disjoint(g, sources - *ps.cut, target, excluded | *ps.cut) == 0);
    }
    // The direct-edge shortcut returns what the search would.
    const PathSet flow = detail::max_disjoint_paths_flow(g, sources, target, excluded, k);
    CHECK(flow.paths == ps.paths);
  }
}

TEST_CASE("paths between two nodes share only their endpoints") {
  XorShift64Star rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<NodeId>(3 + rng.below(5));
    const DiGraph g = random_digraph(n, 0.3 + 0.5 * rng.uniform(), rng.next());
    const NodeId s = 0;
    const NodeId t = n - 1;
    const PathSet ps = max_disjoint_paths_between(g, s, t, {}, n);
    NodeSet used;
    for (const auto& p : ps.paths) {
      CHECK(p.front() == s);
      CHECK(p.back() == t);
      for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        CHECK_FALSE(used.contains(p[i]));
        used.insert(p[i]);
      }
      for (std::size_t i = 0; i + 1 < p.size(); ++i) CHECK(g.has_edge(p[i], p[i + 1]));
    }
    // Brute force: direct edge plus disjoint paths from out-neighbours.
    const NodeSet firsts = g.out(s) - NodeSet::single(t);
    std::size_t expect = g.has_edge(s, t) ? 1 : 0;
    if (!firsts.empty()) expect += oracle::max_disjoint(g, firsts, t, NodeSet::single(s));
    CHECK(ps.count() == expect);
    if (ps.cut) CHECK(static_cast<std::size_t>(ps.cut->size()) == ps.count());
  }
}

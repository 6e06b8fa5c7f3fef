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

#include "dgbc/relations.hpp"

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dgbc;
using fixtures::names;

TEST_CASE("arrow relation") {
  const DiGraph sink4 = fixtures::sink4();
  CHECK(arrow(sink4, names(sink4, {"v1", "v2", "v3", "v4"}), names(sink4, {"x"}), 1));
  const DiGraph tc = fixtures::two_clique_2();
  const NodeSet k1 = tc.set_of({"u1", "u2", "u3", "u4", "u5", "u6", "u7"});
  CHECK(arrow(tc, k1, tc.nodes() - k1, 2));
  CHECK_FALSE(arrow(tc, k1, tc.nodes() - k1, 4));
  CHECK_FALSE(arrow(sink4, {}, names(sink4, {"x"}), 0));
  CHECK_THROWS_AS(arrow(sink4, names(sink4, {"x"}), {}, 1), GraphError);
  CHECK_THROWS_AS(arrow(sink4, names(sink4, {"x"}), names(sink4, {"x"}), 1), GraphError);
}

TEST_CASE("propagation in the two-clique example") {
  const DiGraph tc = fixtures::two_clique_2();
  const NodeSet faulty = names(tc, {"u1", "u2"});
  const NodeSet k2 = names(tc, {"w1", "w2", "w3", "w4", "w5", "w6", "w7"});
  const NodeSet rest = names(tc, {"u3", "u4", "u5", "u6", "u7"});
  const PropagateCert yes = propagates(tc, k2, rest, faulty, 2);
  CHECK(yes.verdict);
  CHECK(yes.paths.size() == 5);
  for (const auto& [t, ps] : yes.paths) CHECK(ps.count() == 3);
  const PropagateCert no = propagates(tc, rest, k2, faulty, 2);
  CHECK_FALSE(no.verdict);
  REQUIRE(no.failing_target.has_value());
  REQUIRE(no.cut.has_value());
  CHECK(no.cut->size() <= 2);
  CHECK(propagates_fast(tc, k2, rest, faulty, 2));
  CHECK_FALSE(propagates_fast(tc, rest, k2, faulty, 2));
}

TEST_CASE("propagation edge cases") {
  const DiGraph sink4 = fixtures::sink4();
  CHECK(propagates(sink4, names(sink4, {"v1"}), {}, {}, 1).verdict);
  CHECK_FALSE(propagates(sink4, {}, names(sink4, {"x"}), {}, 1).verdict);
  CHECK_THROWS_AS(propagates(sink4, names(sink4, {"v1"}), names(sink4, {"v1"}), {}, 1), GraphError);
  CHECK_THROWS_AS(propagates(sink4, names(sink4, {"v1"}), names(sink4, {"x"}), names(sink4, {"v2", "v3"}), 1),
                  GraphError);
}

TEST_CASE("propagation matches brute force and its structural laws") {
  XorShift64Star rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<NodeId>(3 + rng.below(4));
    const DiGraph g = random_digraph(n, 0.3 + 0.6 * rng.uniform(), rng.next());
    const int f = static_cast<int>(rng.below(3));
    NodeSet a;
    NodeSet b;
    NodeSet c;
    NodeSet faulty;
    for (NodeId i = 0; i < n; ++i) {
      switch (rng.below(4)) {
        case 0:
          a.insert(i);
          break;
        case 1:
          b.insert(i);
          break;
        case 2:
          c.insert(i);
          break;
        default:
          if (faulty.size() < f) {
            faulty.insert(i);
          } else {
            c.insert(i);
          }
      }
    }
    const bool ab = propagates(g, a, b, faulty, f).verdict;
    CHECK(ab == oracle::propagates(g, a, b, faulty, f));
    CHECK(ab == propagates_fast(g, a, b, faulty, f));
    if (ab && !b.empty()) CHECK(a.size() >= f + 1);
    // Monotone in the source set.
    if (ab) CHECK(propagates(g, a | c, b, faulty, f).verdict);
    // Closure: A => B and A u B => C give A => B u C.
    if (ab && propagates(g, a | b, c, faulty, f).verdict) CHECK(propagates(g, a, b | c, faulty, f).verdict);
  }
}

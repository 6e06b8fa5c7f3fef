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

namespace dgbc {

bool arrow(const DiGraph& g, NodeSet a, NodeSet b, int f) {
  g.check(a);
  g.check(b);
  if (b.empty()) throw GraphError("arrow: B must be non-empty");
  if (a.intersects(b)) throw GraphError("arrow: A and B overlap");
  return (incoming_neighbors(g, b) & a).size() > f;
}

namespace {

void check_propagate_args(const DiGraph& g, NodeSet a, NodeSet b, NodeSet faulty, int f) {
  g.check(a);
  g.check(b);
  g.check(faulty);
  if (f < 0) throw GraphError("fault bound must be non-negative");
  if (a.intersects(b) || a.intersects(faulty) || b.intersects(faulty)) {
    throw GraphError("propagates: A, B, F must be pairwise disjoint");
  }
  if (faulty.size() > f) throw GraphError("propagates: |F| exceeds f");
}

}  // namespace

PropagateCert propagates(const DiGraph& g, NodeSet a, NodeSet b, NodeSet faulty, int f) {
  check_propagate_args(g, a, b, faulty, f);
  PropagateCert cert;
  if (b.empty()) {
    cert.verdict = true;
    return cert;
  }
  if (a.empty()) {
    cert.failing_target = b.front();
    cert.cut = NodeSet{};
    return cert;
  }
  const auto need = static_cast<std::size_t>(f + 1);
  for (NodeId target : b) {
    PathSet ps = max_disjoint_paths(g, a, target, faulty, need);
    if (ps.count() < need) {
      cert.failing_target = target;
      cert.cut = ps.cut;
      cert.paths.clear();
      return cert;
    }
    cert.paths.emplace(target, std::move(ps));
  }
  cert.verdict = true;
  return cert;
}

bool propagates_fast(const DiGraph& g, NodeSet a, NodeSet b, NodeSet faulty, int f) {
  check_propagate_args(g, a, b, faulty, f);
  if (b.empty()) return true;
  if (a.size() <= f) return false;
  const auto need = static_cast<std::size_t>(f + 1);
  for (NodeId target : b) {
    if ((g.in(target) & a).size() > f) continue;
    if (count_disjoint_paths(g, a, target, faulty, need) < need) return false;
  }
  return true;
}

}  // namespace dgbc

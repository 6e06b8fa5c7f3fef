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

#include <map>
#include <optional>

#include "dgbc/digraph.hpp"

namespace dgbc {

/// A -> B: A holds at least f+1 distinct incoming neighbours of B.
/// Throws GraphError if A and B overlap or B is empty.
bool arrow(const DiGraph& g, NodeSet a, NodeSet b, int f);

/// Outcome of a propagate query, with the paths that prove it or the
/// target and cut that refute it.
struct PropagateCert {
  bool verdict = false;
  /// One PathSet of exactly f+1 paths per target (filled when verdict holds).
  std::map<NodeId, PathSet> paths;
  /// First target (ascending) lacking f+1 disjoint paths.
  std::optional<NodeId> failing_target;
  /// Vertex cut of size <= f separating A from the failing target.
  std::optional<NodeSet> cut;
};

/// A propagates in V-F to B: B is empty, or every b in B has f+1 disjoint
/// (A,b)-paths excluding F. Throws GraphError unless A, B, F are pairwise
/// disjoint and |F| <= f.
PropagateCert propagates(const DiGraph& g, NodeSet a, NodeSet b, NodeSet faulty, int f);

/// Verdict only; stops at the first failing target.
bool propagates_fast(const DiGraph& g, NodeSet a, NodeSet b, NodeSet faulty, int f);

}  // namespace dgbc

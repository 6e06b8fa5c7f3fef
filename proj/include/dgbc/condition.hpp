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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dgbc/digraph.hpp"

namespace dgbc {

/// Which form of the feasibility condition a verdict refers to.
enum class ConditionForm { propagate, absorb };

/// A partition certifying a violation. Propagate form (A,B,F): `a` = A,
/// `b` = B, `c` empty. Absorb form (L,C,R,F): `a` = L, `c` = C, `b` = R.
struct PartitionWitness {
  NodeSet a;
  NodeSet b;
  NodeSet c;
  NodeSet faulty;
  friend bool operator==(const PartitionWitness&, const PartitionWitness&) = default;
};

struct ConditionVerdict {
  ConditionForm form = ConditionForm::propagate;
  int f = 0;
  bool satisfied = false;
  std::optional<PartitionWitness> witness;
  /// Fault sets scanned, and canonical partitions covered up to and
  /// including the witness (all of them when satisfied).
  std::uint64_t fault_sets_examined = 0;
  std::uint64_t partitions_examined = 0;
};

struct ScanOptions {
  /// 0 picks DGBC_THREADS from the environment, else the hardware count.
  unsigned threads = 0;
};

/// Every F with |F| <= f, ordered by size then lexicographically by the
/// sorted member indices. Sets equal to V are skipped.
std::vector<NodeSet> fault_sets(NodeId n, int f);

/// For every partition A,B,F of V with A,B non-empty and |F| <= f, A
/// propagates in V-F to B or B to A. Unordered {A,B} are scanned once with A
/// holding the smallest index of V-F; the reported witness is the first
/// violating partition in that order regardless of thread count.
/// Throws GraphError if n < 2 or f < 0.
ConditionVerdict check_theorem1(const DiGraph& g, int f, ScanOptions opts = {});

/// For every partition L,C,R,F of V with L,R non-empty and |F| <= f,
/// L u C -> R or R u C -> L.
ConditionVerdict check_condition1(const DiGraph& g, int f, ScanOptions opts = {});

/// Necessary screen: n >= 3f+1 and, when f > 0, every node has at least
/// 2f+1 incoming neighbours.
struct DegreeCheck {
  bool pass = true;
  bool too_few_nodes = false;
  std::optional<NodeId> offending;
  std::string reason;
};
DegreeCheck check_degree_bounds(const DiGraph& g, int f);

/// Builds a propagate-form witness from a failed degree screen.
PartitionWitness witness_from_degree_failure(const DiGraph& g, int f, const DegreeCheck& check);

/// Re-checks a witness against the relations module.
bool witness_holds(const DiGraph& g, int f, ConditionForm form, const PartitionWitness& w);

enum class FuzzMode { exhaustive, random };

struct EquivalenceReport {
  NodeId n = 0;
  int f = 0;
  std::uint64_t graphs_tested = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t disagreements = 0;
  /// Graph JSON of the first disagreement, if any.
  std::optional<std::string> first_disagreement;
};

/// Runs both checkers on every digraph with n nodes (exhaustive, n <= 4) or
/// on `trials` seeded random digraphs whose edge probability is drawn from
/// [0.4, 1]. Throws std::invalid_argument for exhaustive n > 4.
EquivalenceReport equivalence_fuzz(NodeId n, int f, FuzzMode mode, std::uint64_t trials = 0,
                                   std::uint64_t seed = 0);

unsigned resolve_threads(unsigned requested);

}  // namespace dgbc

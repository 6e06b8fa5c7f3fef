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

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgbc/condition.hpp"
#include "dgbc/digraph.hpp"

namespace dgbc {

enum class Value : std::uint8_t { zero = 0, one = 1, bottom = 2 };

inline Value value_of(bool b) { return b ? Value::one : Value::zero; }
inline bool is_bit(Value v) { return v != Value::bottom; }
const char* to_string(Value v);

struct NodeState {
  bool v = false;
  Value t = Value::bottom;
};

/// Thrown when planning meets a partition where neither side propagates.
class ConditionViolated : public std::runtime_error {
 public:
  ConditionViolated(const std::string& what, PartitionWitness w)
      : std::runtime_error(what), witness(w) {}
  PartitionWitness witness;
};

enum class PhaseTag : std::uint8_t { propagate_into_s, equality, propagate_out, fault_poll };
const char* to_string(PhaseTag tag);

/// Routes of one sub-protocol phase, grouped by destination: the routes
/// ending at the i-th member of `destinations` (ascending) occupy indices
/// [i*group, (i+1)*group). Each route lists its nodes from origin to
/// destination.
class RouteBundle {
 public:
  RouteBundle(NodeSet destinations, std::uint32_t group) : destinations_(destinations), group_(group) {
    offsets_.push_back(0);
  }
  void add(const std::vector<NodeId>& route);

  NodeSet destinations() const { return destinations_; }
  std::uint32_t group() const { return group_; }
  std::uint32_t size() const { return static_cast<std::uint32_t>(offsets_.size() - 1); }
  std::uint32_t length(std::uint32_t r) const { return offsets_[r + 1] - offsets_[r]; }
  NodeId hop(std::uint32_t r, std::uint32_t i) const { return hops_[offsets_[r] + i]; }
  NodeId origin(std::uint32_t r) const { return hop(r, 0); }
  NodeId destination(std::uint32_t r) const { return hop(r, length(r) - 1); }
  std::vector<NodeId> route(std::uint32_t r) const;
  /// Rounds needed: edges on the longest route.
  std::uint32_t rounds() const { return rounds_; }

 private:
  NodeSet destinations_;
  std::uint32_t group_;
  std::uint32_t rounds_ = 0;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint8_t> hops_;
};

struct Phase {
  PhaseTag tag = PhaseTag::equality;
  NodeSet senders;
  std::shared_ptr<const RouteBundle> routes;
};

struct IterationPlan {
  std::uint32_t outer = 0;
  std::uint32_t inner = 0;
  NodeSet faulty;
  NodeSet a;
  NodeSet b;
  NodeSet s;
  int case_tag = 1;
  /// Case 1: equality, propagate_out. Case 2: propagate_into_s, equality,
  /// propagate_out. Both end with fault_poll when F is non-empty.
  std::array<Phase, 4> phases{};
  std::uint8_t phase_count = 0;
  std::uint64_t round_begin = 0;
  std::uint32_t rounds = 0;

  std::span<const Phase> phase_list() const { return {phases.data(), phase_count}; }
};

struct OuterPlan {
  NodeSet faulty;
  std::size_t first = 0;
  std::size_t count = 0;
};

struct ProtocolPlan {
  DiGraph graph;
  int f = 0;
  std::vector<OuterPlan> outer;
  std::vector<IterationPlan> iterations;
  std::uint64_t total_rounds = 0;
};

/// All F with |F| <= f, by size then lexicographically.
std::vector<NodeSet> plan_outer(const DiGraph& g, int f);

struct Orientation {
  NodeSet a;
  NodeSet b;
  int case_tag = 1;
};

/// Orients a partition X,Y of V-F. Throws ConditionViolated if neither side
/// propagates to the other.
Orientation orient_partition(const DiGraph& g, int f, NodeSet faulty, NodeSet x, NodeSet y);

/// S for a Case-1 partition (A propagates to B, B does not propagate to A).
NodeSet choose_s_case1(const DiGraph& g, int f, NodeSet faulty, NodeSet a, NodeSet b);

/// S for a Case-2 partition: source component of G_{F,F1} with F1 the f
/// smallest nodes of V-F.
NodeSet choose_s_case2(const DiGraph& g, int f, NodeSet faulty, NodeSet a, NodeSet b);

/// N_k: the f+1 smallest incoming neighbours of k in V-F.
NodeSet poll_set(const DiGraph& g, int f, NodeSet faulty, NodeId k);

/// Plans every OUTER and INNER iteration. Runs the degree screen first and
/// throws ConditionViolated on failure or when a partition cannot be
/// oriented.
ProtocolPlan build_plan(const DiGraph& g, int f);

/// Mechanically re-checks the Case-1/Case-2 invariants of `it` and its
/// routes. Returns a description of the first failure.
std::optional<std::string> verify_iteration_plan(const DiGraph& g, int f, const IterationPlan& it);

struct PhaseContext {
  std::uint32_t outer = 0;
  std::uint32_t inner = 0;
  const IterationPlan* iteration = nullptr;
  const Phase* phase = nullptr;
};

/// Transports the origin value of every route to its destination.
/// `sent[r]` is what the origin of route r emits; `received[r]` is what its
/// destination holds at the phase deadline.
class Exchange {
 public:
  virtual ~Exchange() = default;
  virtual void deliver(const PhaseContext& ctx, std::span<const Value> sent, std::span<Value> received,
                       const std::vector<NodeState>& states) = 0;
};

/// Lossless delivery with no faulty behaviour.
class IdealExchange : public Exchange {
 public:
  void deliver(const PhaseContext& ctx, std::span<const Value> sent, std::span<Value> received,
               const std::vector<NodeState>& states) override;
};

/// Receiver rule of Propagate: all 0 -> 0, all 1 -> 1, else bottom.
Value propagate_rule(std::span<const Value> values);
/// Receiver rule of Equality.
Value equality_rule(Value own, std::span<const Value> values);

void run_propagate(const PhaseContext& ctx, std::vector<NodeState>& states, Exchange& ex);
void run_equality(const PhaseContext& ctx, std::vector<NodeState>& states, Exchange& ex);
void run_fault_poll(const PhaseContext& ctx, std::vector<NodeState>& states, Exchange& ex);
void run_inner_iteration(const IterationPlan& it, std::vector<NodeState>& states, Exchange& ex);

std::vector<NodeState> initial_states(const std::vector<bool>& inputs);

/// Runs every iteration of `plan`; returns the final v of every node.
std::vector<bool> bc_consensus(const ProtocolPlan& plan, const std::vector<bool>& inputs, Exchange& ex);
std::vector<bool> bc_consensus(const ProtocolPlan& plan, const std::vector<bool>& inputs);

/// f = 0: the smallest node of the source component routes its input to
/// everybody. Throws ConditionViolated if some node cannot be reached.
std::vector<bool> f0_consensus(const DiGraph& g, const std::vector<bool>& inputs);
NodeId f0_representative(const DiGraph& g);

/// One binary instance per bit of `bits`-bit inputs, low bit first.
std::vector<std::uint64_t> multivalued_consensus(const ProtocolPlan& plan, const std::vector<std::uint64_t>& inputs,
                                                 int bits, Exchange& ex);
std::vector<std::uint64_t> multivalued_consensus(const ProtocolPlan& plan, const std::vector<std::uint64_t>& inputs,
                                                 int bits);

}  // namespace dgbc

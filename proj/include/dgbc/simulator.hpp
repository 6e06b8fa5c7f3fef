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
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dgbc/protocol.hpp"

namespace dgbc {

inline constexpr int kTranscriptSchema = 1;

/// One hop of one route. `route` indexes the current phase's RouteBundle.
struct Message {
  NodeId from = 0;
  NodeId to = 0;
  std::uint32_t outer = 0;
  std::uint32_t inner = 0;
  PhaseTag tag = PhaseTag::equality;
  std::uint32_t route = 0;
  std::uint32_t hop = 0;
  Value value = Value::bottom;
  std::uint64_t seq = 0;
};

/// Read-only snapshot handed to the adversary every round.
struct WorldView {
  const ProtocolPlan& plan;
  const IterationPlan& iteration;
  const Phase& phase;
  const std::vector<NodeState>& states;
  const std::vector<bool>& inputs;
  /// Value currently held for each route of the phase, at the node about to
  /// forward it.
  const std::vector<Value>& in_flight;
  NodeSet faulty;
  std::uint64_t round = 0;
  std::uint32_t hop = 0;
};

/// Full-knowledge Byzantine adversary. Each round it receives the messages
/// the faulty nodes would send if they were honest and may drop, rewrite or
/// add to them. Messages must originate at a faulty node and use an edge.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual void act(const WorldView& view, std::vector<Message>& outbound) = 0;
};

enum class StrategyKind { honest, silent, flip, equivocate, split_brain, random, scripted };

using ScriptFn = std::function<void(const WorldView&, std::vector<Message>&)>;

struct StrategySpec {
  StrategyKind kind = StrategyKind::honest;
  std::uint64_t seed = 0;
  /// split-brain: value told to each final destination. Empty means the
  /// destination's own input.
  std::vector<bool> preferred;
  ScriptFn script;
};

StrategyKind parse_strategy(const std::string& tag);
std::string to_string(StrategyKind kind);
std::unique_ptr<Adversary> make_adversary(const StrategySpec& spec);

enum class TranscriptLevel { iterations, messages };

struct IterationRecord {
  std::uint32_t outer = 0;
  std::uint32_t inner = 0;
  NodeSet faulty;
  NodeSet a;
  NodeSet b;
  NodeSet s;
  int case_tag = 1;
  std::uint64_t round_begin = 0;
  std::uint64_t round_end = 0;
  /// Nodes holding v = 1.
  NodeSet v_begin;
  NodeSet v_end;
};

struct OuterRecord {
  std::uint32_t index = 0;
  NodeSet faulty;
  std::uint64_t round_end = 0;
  NodeSet v_end;
};

struct LinkStats {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t order_violations = 0;
  std::uint64_t rejected = 0;  // adversary messages off the schedule
};

struct MonitorVerdict {
  std::string name;
  bool pass = true;
  std::string detail;
  std::optional<std::uint64_t> round;
};

struct Transcript {
  NodeId n = 0;
  int f = 0;
  NodeSet faulty;
  NodeSet inputs;  // nodes with input 1
  std::uint64_t planned_rounds = 0;
  std::uint64_t rounds = 0;
  std::vector<IterationRecord> iterations;
  std::vector<OuterRecord> outers;
  LinkStats links;
};

MonitorVerdict monitor_lemma1(const Transcript& t);
MonitorVerdict monitor_agreement_at_fstar(const Transcript& t, NodeSet fstar);
MonitorVerdict monitor_links(const Transcript& t);
MonitorVerdict monitor_termination(const Transcript& t);
/// Final agreement among fault-free nodes and validity of the common value.
MonitorVerdict monitor_outcome(const Transcript& t);

struct RunConfig {
  std::vector<bool> inputs;
  NodeSet faulty;
  StrategySpec strategy;
  TranscriptLevel level = TranscriptLevel::iterations;
  /// When set, JSON-lines records are streamed here as the run proceeds.
  std::ostream* sink = nullptr;
  /// Written into the header record.
  std::string label;
};

struct RunResult {
  std::vector<bool> final_v;
  NodeSet fault_free;
  std::optional<bool> decision;
  Transcript transcript;
  std::vector<MonitorVerdict> monitors;
  bool ok() const;
};

/// Executes every planned iteration on the round engine under the
/// configured adversary, then evaluates all monitors.
RunResult run(const ProtocolPlan& plan, const RunConfig& config);

struct MultiRunResult {
  std::vector<std::uint64_t> final_words;
  std::optional<std::uint64_t> decision;
  std::vector<RunResult> bits;
  bool ok() const;
};

/// One run per bit, low bit first. Each instance gets seed + bit.
MultiRunResult run_multivalued(const ProtocolPlan& plan, const std::vector<std::uint64_t>& inputs, int bits,
                               const RunConfig& base);

}  // namespace dgbc

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

#include "dgbc/protocol.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <tuple>

#include "dgbc/relations.hpp"

namespace dgbc {

const char* to_string(Value v) {
  switch (v) {
    case Value::zero:
      return "0";
    case Value::one:
      return "1";
    case Value::bottom:
      return "bot";
  }
  return "?";
}

const char* to_string(PhaseTag tag) {
  switch (tag) {
    case PhaseTag::propagate_into_s:
      return "propagate-into-s";
    case PhaseTag::equality:
      return "equality";
    case PhaseTag::propagate_out:
      return "propagate-out";
    case PhaseTag::fault_poll:
      return "fault-poll";
  }
  return "?";
}

void RouteBundle::add(const std::vector<NodeId>& route) {
  if (route.empty()) throw std::invalid_argument("empty route");
  for (NodeId v : route) hops_.push_back(static_cast<std::uint8_t>(v));
  offsets_.push_back(static_cast<std::uint32_t>(hops_.size()));
  rounds_ = std::max(rounds_, static_cast<std::uint32_t>(route.size() - 1));
}

std::vector<NodeId> RouteBundle::route(std::uint32_t r) const {
  std::vector<NodeId> out;
  for (std::uint32_t i = 0; i < length(r); ++i) out.push_back(hop(r, i));
  return out;
}

std::vector<NodeSet> plan_outer(const DiGraph& g, int f) { return fault_sets(g.size(), f); }

Orientation orient_partition(const DiGraph& g, int f, NodeSet faulty, NodeSet x, NodeSet y) {
  if (x.empty() || y.empty() || x.intersects(y) || (x | y | faulty) != g.nodes() || (x | y).intersects(faulty)) {
    throw GraphError("orient_partition: X, Y must be a non-empty partition of V-F");
  }
  const bool xy = propagates_fast(g, x, y, faulty, f);
  const bool yx = propagates_fast(g, y, x, faulty, f);
  if (xy && yx) {
    const NodeId low = (x | y).front();
    return x.contains(low) ? Orientation{x, y, 2} : Orientation{y, x, 2};
  }
  if (xy) return {x, y, 1};
  if (yx) return {y, x, 1};
  throw ConditionViolated("neither side of the partition propagates to the other", {x, y, {}, faulty});
}

NodeSet choose_s_case1(const DiGraph& g, int f, NodeSet faulty, NodeSet a, NodeSet b) {
  const auto k = static_cast<std::size_t>(f + 1);
  std::optional<NodeSet> cut;
  NodeId anchor = 0;
  for (NodeId x : a) {
    PathSet ps = max_disjoint_paths(g, b, x, faulty, k);
    if (ps.count() < k) {
      cut = ps.cut;
      anchor = x;
      break;
    }
  }
  if (!cut) throw std::logic_error("case 1: B propagates to A");
  const NodeSet rest = g.nodes() - faulty;
  const NodeSet left = reaching(g, anchor, rest - *cut);
  const NodeSet right = rest - left;
  const NodeSet entry = incoming_neighbors(g, left) & right;
  if (entry.size() > f) throw std::logic_error("case 1: more than f entry points into A'");
  const NodeSet s = source_component(g, faulty, entry);
  if (s.empty() || !s.subset_of(left) || !left.subset_of(a)) {
    throw std::logic_error("case 1: source component escapes A'");
  }
  return s;
}

NodeSet choose_s_case2(const DiGraph& g, int f, NodeSet faulty, NodeSet a, NodeSet b) {
  const NodeSet rest = a | b;
  NodeSet first;
  int taken = 0;
  for (NodeId v : rest) {
    if (taken == f) break;
    first.insert(v);
    ++taken;
  }
  const NodeSet s = source_component(g, faulty, first);
  if (s.empty()) throw std::logic_error("case 2: empty source component");
  return s;
}

NodeSet poll_set(const DiGraph& g, int f, NodeSet faulty, NodeId k) {
  NodeSet out;
  for (NodeId u : g.in(k) - faulty) {
    if (out.size() == f + 1) break;
    out.insert(u);
  }
  if (out.size() != f + 1) {
    throw std::logic_error("node " + g.name(k) + " has fewer than f+1 incoming neighbours outside F");
  }
  return out;
}

namespace {

using BundleKey = std::tuple<int, std::uint64_t, std::uint64_t, std::uint64_t>;

class BundleCache {
 public:
  BundleCache(const DiGraph& g, int f) : g_(g), f_(f) {}

  std::shared_ptr<const RouteBundle> propagate(NodeSet faulty, NodeSet from, NodeSet to) {
    auto& slot = cache_[{0, faulty.bits(), from.bits(), to.bits()}];
    if (slot) return slot;
    const PropagateCert cert = propagates(g_, from, to, faulty, f_);
    if (!cert.verdict) throw std::logic_error("propagate phase without a propagating source");
    auto bundle = std::make_shared<RouteBundle>(to, static_cast<std::uint32_t>(f_ + 1));
    for (NodeId d : to) {
      for (const auto& p : cert.paths.at(d).paths) bundle->add(p);
    }
    slot = bundle;
    return slot;
  }

  std::shared_ptr<const RouteBundle> equality(NodeSet faulty, NodeSet s) {
    auto& slot = cache_[{1, faulty.bits(), s.bits(), 0}];
    if (slot) return slot;
    auto bundle = std::make_shared<RouteBundle>(s, static_cast<std::uint32_t>(s.size() - 1));
    const NodeSet within = g_.nodes() - faulty;
    for (NodeId j : s) {
      for (NodeId i : s) {
        if (i == j) continue;
        const auto p = shortest_path(g_, i, j, within);
        if (p.empty()) throw std::logic_error("equality set is not strongly connected");
        bundle->add(p);
      }
    }
    slot = bundle;
    return slot;
  }

  std::pair<std::shared_ptr<const RouteBundle>, NodeSet> poll(NodeSet faulty) {
    auto& slot = cache_[{2, faulty.bits(), 0, 0}];
    NodeSet senders;
    for (NodeId k : faulty) senders |= poll_set(g_, f_, faulty, k);
    if (slot) return {slot, senders};
    auto bundle = std::make_shared<RouteBundle>(faulty, static_cast<std::uint32_t>(f_ + 1));
    for (NodeId k : faulty) {
      for (NodeId u : poll_set(g_, f_, faulty, k)) bundle->add({u, k});
    }
    slot = bundle;
    return {slot, senders};
  }

 private:
  const DiGraph& g_;
  int f_;
  std::map<BundleKey, std::shared_ptr<const RouteBundle>> cache_;
};

}  // namespace

ProtocolPlan build_plan(const DiGraph& g, int f) {
  if (f < 0) throw GraphError("fault bound must be non-negative");
  if (g.size() < 2) throw GraphError("consensus needs at least two nodes");
  const DegreeCheck deg = check_degree_bounds(g, f);
  if (!deg.pass) throw ConditionViolated(deg.reason, witness_from_degree_failure(g, f, deg));

  ProtocolPlan plan;
  plan.graph = g;
  plan.f = f;
  BundleCache cache(g, f);
  std::uint64_t clock = 0;
  const auto outers = plan_outer(g, f);
  // The S constructions assume the condition holds globally; a partition can
  // orient fine while another one fails, so a broken assumption is turned
  // into a proper witness here.
  try {
    for (std::size_t oi = 0; oi < outers.size(); ++oi) {
      const NodeSet faulty = outers[oi];
      const NodeSet rest = g.nodes() - faulty;
      const auto members = rest.to_vector();
      OuterPlan op{faulty, plan.iterations.size(), 0};
      std::optional<std::pair<std::shared_ptr<const RouteBundle>, NodeSet>> poll;
      if (!faulty.empty()) poll = cache.poll(faulty);
      const std::uint64_t count = members.size() < 2 ? 0 : (std::uint64_t{1} << (members.size() - 1)) - 1;
      for (std::uint64_t mask = 0; mask < count; ++mask) {
        NodeSet x = NodeSet::single(members[0]);
        for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
          x.insert(members[static_cast<std::size_t>(std::countr_zero(bits)) + 1]);
        }
        const Orientation o = orient_partition(g, f, faulty, x, rest - x);
        IterationPlan it;
        it.outer = static_cast<std::uint32_t>(oi);
        it.inner = static_cast<std::uint32_t>(mask);
        it.faulty = faulty;
        it.a = o.a;
        it.b = o.b;
        it.case_tag = o.case_tag;
        auto push = [&it](PhaseTag tag, NodeSet senders, std::shared_ptr<const RouteBundle> routes) {
          it.rounds += routes->rounds();
          it.phases[it.phase_count++] = Phase{tag, senders, std::move(routes)};
        };
        if (o.case_tag == 1) {
          it.s = choose_s_case1(g, f, faulty, o.a, o.b);
        } else {
          it.s = choose_s_case2(g, f, faulty, o.a, o.b);
          push(PhaseTag::propagate_into_s, o.a, cache.propagate(faulty, o.a, it.s - o.a));
        }
        push(PhaseTag::equality, it.s, cache.equality(faulty, it.s));
        push(PhaseTag::propagate_out, it.s, cache.propagate(faulty, it.s, rest - it.s));
        if (poll) push(PhaseTag::fault_poll, poll->second, poll->first);
        it.round_begin = clock;
        clock += it.rounds;
        plan.iterations.push_back(std::move(it));
        ++op.count;
      }
      plan.outer.push_back(op);
    }
  } catch (const std::logic_error&) {
    const ConditionVerdict v = check_theorem1(g, f);
    if (!v.satisfied) throw ConditionViolated("condition violated", *v.witness);
    throw;
  }
  plan.total_rounds = clock;
  return plan;
}

namespace {

std::optional<std::string> verify_routes(const DiGraph& g, NodeSet faulty, const Phase& ph, NodeSet origins,
                                         bool disjoint, std::uint32_t group) {
  const RouteBundle& rb = *ph.routes;
  const auto dests = rb.destinations().to_vector();
  if (rb.group() != group || rb.size() != dests.size() * group) {
    return std::string(to_string(ph.tag)) + ": wrong route count";
  }
  for (std::size_t di = 0; di < dests.size(); ++di) {
    NodeSet used;
    NodeSet starts;
    for (std::uint32_t r = static_cast<std::uint32_t>(di * group); r < (di + 1) * group; ++r) {
      const auto p = rb.route(r);
      if (p.back() != dests[di]) return std::string(to_string(ph.tag)) + ": route ends at the wrong node";
      if (!origins.contains(p.front())) return std::string(to_string(ph.tag)) + ": route starts outside the senders";
      starts.insert(p.front());
      NodeSet seen;
      for (std::size_t h = 0; h < p.size(); ++h) {
        if (faulty.contains(p[h]) && ph.tag != PhaseTag::fault_poll) {
          return std::string(to_string(ph.tag)) + ": route passes through F";
        }
        if (seen.contains(p[h])) return std::string(to_string(ph.tag)) + ": route is not simple";
        seen.insert(p[h]);
        if (h + 1 < p.size() && !g.has_edge(p[h], p[h + 1])) {
          return std::string(to_string(ph.tag)) + ": route uses a missing edge";
        }
      }
      const NodeSet inner = seen - NodeSet::single(p.back());
      if (disjoint && used.intersects(inner)) return std::string(to_string(ph.tag)) + ": routes are not disjoint";
      used |= inner;
    }
    if (ph.tag == PhaseTag::equality && starts != origins - NodeSet::single(dests[di])) {
      return "equality: missing ordered pair";
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> verify_iteration_plan(const DiGraph& g, int f, const IterationPlan& it) {
  const NodeSet rest = g.nodes() - it.faulty;
  if (it.faulty.size() > f) return "|F| exceeds f";
  if (it.a.empty() || it.b.empty() || it.a.intersects(it.b) || (it.a | it.b) != rest) {
    return "A, B do not partition V-F";
  }
  if (it.s.empty()) return "S is empty";
  if (it.case_tag == 1 && !it.s.subset_of(it.a)) return "case 1: S is not inside A";
  if (it.case_tag == 2 && !it.s.subset_of(rest)) return "case 2: S is not inside A u B";
  if (it.case_tag != 1 && it.case_tag != 2) return "unknown case";
  if (!strongly_connected_in(g, it.s, rest)) return "S is not strongly connected in G_-F";
  if (!propagates(g, it.s, rest - it.s, it.faulty, f).verdict) return "S does not propagate to V-F-S";
  if (it.case_tag == 2 && !propagates(g, it.a, it.s - it.a, it.faulty, f).verdict) {
    return "case 2: A does not propagate to S-A";
  }
  std::vector<PhaseTag> want;
  if (it.case_tag == 2) want.push_back(PhaseTag::propagate_into_s);
  want.push_back(PhaseTag::equality);
  want.push_back(PhaseTag::propagate_out);
  if (!it.faulty.empty()) want.push_back(PhaseTag::fault_poll);
  if (want.size() != it.phase_count) return "wrong phase sequence";
  std::uint32_t rounds = 0;
  const auto k = static_cast<std::uint32_t>(f + 1);
  for (std::size_t i = 0; i < want.size(); ++i) {
    const Phase& ph = it.phases[i];
    if (ph.tag != want[i] || !ph.routes) return "wrong phase sequence";
    rounds += ph.routes->rounds();
    std::optional<std::string> err;
    switch (ph.tag) {
      case PhaseTag::propagate_into_s:
        if (ph.routes->destinations() != it.s - it.a) return "propagate-into-s: wrong destinations";
        err = verify_routes(g, it.faulty, ph, it.a, true, k);
        break;
      case PhaseTag::equality:
        if (ph.routes->destinations() != it.s) return "equality: wrong destinations";
        err = verify_routes(g, it.faulty, ph, it.s, false, static_cast<std::uint32_t>(it.s.size() - 1));
        break;
      case PhaseTag::propagate_out:
        if (ph.routes->destinations() != rest - it.s) return "propagate-out: wrong destinations";
        err = verify_routes(g, it.faulty, ph, it.s, true, k);
        break;
      case PhaseTag::fault_poll: {
        if (ph.routes->destinations() != it.faulty) return "fault-poll: wrong destinations";
        err = verify_routes(g, it.faulty, ph, rest, true, k);
        if (err) break;
        std::uint32_t r = 0;
        for (NodeId kk : it.faulty) {
          NodeSet got;
          for (std::uint32_t j = 0; j < k; ++j, ++r) got.insert(ph.routes->origin(r));
          if (got != poll_set(g, f, it.faulty, kk) || ph.routes->rounds() != 1) return "fault-poll: wrong N_k";
        }
        break;
      }
    }
    if (err) return err;
  }
  if (rounds != it.rounds) return "round schedule mismatch";
  return std::nullopt;
}

void IdealExchange::deliver(const PhaseContext&, std::span<const Value> sent, std::span<Value> received,
                            const std::vector<NodeState>&) {
  std::copy(sent.begin(), sent.end(), received.begin());
}

Value propagate_rule(std::span<const Value> values) {
  if (values.empty()) return Value::bottom;
  const Value first = values[0];
  if (!is_bit(first)) return Value::bottom;
  for (Value v : values) {
    if (v != first) return Value::bottom;
  }
  return first;
}

Value equality_rule(Value own, std::span<const Value> values) {
  if (!is_bit(own)) return Value::bottom;
  for (Value v : values) {
    if (v != own) return Value::bottom;
  }
  return own;
}

namespace {

struct Scratch {
  std::vector<Value> sent;
  std::vector<Value> received;
};

Scratch& scratch_for(const RouteBundle& rb) {
  thread_local Scratch s;
  s.sent.resize(rb.size());
  s.received.assign(rb.size(), Value::bottom);
  return s;
}

}  // namespace

void run_propagate(const PhaseContext& ctx, std::vector<NodeState>& states, Exchange& ex) {
  const RouteBundle& rb = *ctx.phase->routes;
  Scratch& sc = scratch_for(rb);
  for (std::uint32_t r = 0; r < rb.size(); ++r) sc.sent[r] = states[rb.origin(r)].t;
  ex.deliver(ctx, sc.sent, sc.received, states);
  std::size_t at = 0;
  for (NodeId d : rb.destinations()) {
    states[d].t = propagate_rule(std::span<const Value>(sc.received).subspan(at, rb.group()));
    at += rb.group();
  }
}

void run_equality(const PhaseContext& ctx, std::vector<NodeState>& states, Exchange& ex) {
  const RouteBundle& rb = *ctx.phase->routes;
  Scratch& sc = scratch_for(rb);
  for (std::uint32_t r = 0; r < rb.size(); ++r) sc.sent[r] = states[rb.origin(r)].t;
  ex.deliver(ctx, sc.sent, sc.received, states);
  std::size_t at = 0;
  for (NodeId j : rb.destinations()) {
    states[j].t = equality_rule(states[j].t, std::span<const Value>(sc.received).subspan(at, rb.group()));
    at += rb.group();
  }
}

void run_fault_poll(const PhaseContext& ctx, std::vector<NodeState>& states, Exchange& ex) {
  const RouteBundle& rb = *ctx.phase->routes;
  Scratch& sc = scratch_for(rb);
  for (std::uint32_t r = 0; r < rb.size(); ++r) sc.sent[r] = value_of(states[rb.origin(r)].v);
  ex.deliver(ctx, sc.sent, sc.received, states);
  std::size_t at = 0;
  for (NodeId k : rb.destinations()) {
    const Value got = propagate_rule(std::span<const Value>(sc.received).subspan(at, rb.group()));
    if (is_bit(got)) states[k].v = got == Value::one;
    at += rb.group();
  }
}

void run_inner_iteration(const IterationPlan& it, std::vector<NodeState>& states, Exchange& ex) {
  for (auto& st : states) st.t = Value::bottom;
  const NodeSet seed = it.case_tag == 1 ? it.s : it.a;
  for (NodeId i : seed) states[i].t = value_of(states[i].v);
  PhaseContext ctx{it.outer, it.inner, &it, nullptr};
  bool adopted = false;
  for (const Phase& ph : it.phase_list()) {
    ctx.phase = &ph;
    switch (ph.tag) {
      case PhaseTag::propagate_into_s:
      case PhaseTag::propagate_out:
        run_propagate(ctx, states, ex);
        break;
      case PhaseTag::equality:
        run_equality(ctx, states, ex);
        break;
      case PhaseTag::fault_poll:
        break;
    }
    if (ph.tag == PhaseTag::propagate_out) {
      const NodeSet rest = (it.a | it.b);
      const NodeSet adopters = it.case_tag == 1 ? rest - it.s : rest - (it.a & it.s);
      for (NodeId j : adopters) {
        if (is_bit(states[j].t)) states[j].v = states[j].t == Value::one;
      }
      adopted = true;
    }
    if (ph.tag == PhaseTag::fault_poll) {
      if (!adopted) throw std::logic_error("fault poll before adoption");
      run_fault_poll(ctx, states, ex);
    }
  }
}

std::vector<NodeState> initial_states(const std::vector<bool>& inputs) {
  std::vector<NodeState> st(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) st[i].v = inputs[i];
  return st;
}

namespace {

void check_inputs(const ProtocolPlan& plan, std::size_t count) {
  if (count != plan.graph.size()) throw std::invalid_argument("one input per node is required");
}

}  // namespace

std::vector<bool> bc_consensus(const ProtocolPlan& plan, const std::vector<bool>& inputs, Exchange& ex) {
  check_inputs(plan, inputs.size());
  auto states = initial_states(inputs);
  for (const auto& it : plan.iterations) run_inner_iteration(it, states, ex);
  std::vector<bool> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) out[i] = states[i].v;
  return out;
}

std::vector<bool> bc_consensus(const ProtocolPlan& plan, const std::vector<bool>& inputs) {
  IdealExchange ex;
  return bc_consensus(plan, inputs, ex);
}

NodeId f0_representative(const DiGraph& g) {
  const NodeSet s = source_component(g, {}, {});
  if (s.empty()) throw GraphError("graph has no nodes");
  return s.front();
}

std::vector<bool> f0_consensus(const DiGraph& g, const std::vector<bool>& inputs) {
  if (inputs.size() != g.size()) throw std::invalid_argument("one input per node is required");
  const NodeId rep = f0_representative(g);
  std::vector<bool> out(g.size());
  for (NodeId j = 0; j < g.size(); ++j) {
    if (j == rep) {
      out[j] = inputs[rep];
      continue;
    }
    const auto route = shortest_path(g, rep, j, g.nodes());
    if (route.empty()) {
      const ConditionVerdict v = check_theorem1(g, 0, ScanOptions{1});
      throw ConditionViolated("node " + g.name(j) + " is unreachable from " + g.name(rep),
                              v.witness.value_or(PartitionWitness{}));
    }
    // All nodes are fault-free here; relays forward unchanged.
    out[j] = inputs[route.front()];
  }
  return out;
}

std::vector<std::uint64_t> multivalued_consensus(const ProtocolPlan& plan, const std::vector<std::uint64_t>& inputs,
                                                 int bits, Exchange& ex) {
  if (bits < 1 || bits > 64) throw std::invalid_argument("bit width must be in 1..64");
  check_inputs(plan, inputs.size());
  std::vector<std::uint64_t> out(inputs.size(), 0);
  for (int b = 0; b < bits; ++b) {
    std::vector<bool> in(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) in[i] = ((inputs[i] >> b) & 1U) != 0;
    const auto dec = bc_consensus(plan, in, ex);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (dec[i]) out[i] |= std::uint64_t{1} << b;
    }
  }
  return out;
}

std::vector<std::uint64_t> multivalued_consensus(const ProtocolPlan& plan, const std::vector<std::uint64_t>& inputs,
                                                 int bits) {
  IdealExchange ex;
  return multivalued_consensus(plan, inputs, bits, ex);
}

}  // namespace dgbc

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

#include "dgbc/simulator.hpp"

#include <array>
#include <stdexcept>

#include "dgbc/generators.hpp"
#include "json.hpp"

namespace dgbc {

using ojson = nlohmann::ordered_json;

StrategyKind parse_strategy(const std::string& tag) {
  if (tag == "honest" || tag == "none") return StrategyKind::honest;
  if (tag == "silent") return StrategyKind::silent;
  if (tag == "flip") return StrategyKind::flip;
  if (tag == "equivocate") return StrategyKind::equivocate;
  if (tag == "split-brain") return StrategyKind::split_brain;
  if (tag == "random") return StrategyKind::random;
  throw std::invalid_argument("unknown strategy '" + tag + "'");
}

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::honest:
      return "honest";
    case StrategyKind::silent:
      return "silent";
    case StrategyKind::flip:
      return "flip";
    case StrategyKind::equivocate:
      return "equivocate";
    case StrategyKind::split_brain:
      return "split-brain";
    case StrategyKind::random:
      return "random";
    case StrategyKind::scripted:
      return "scripted";
  }
  return "?";
}

namespace {

Value flipped(Value v) {
  if (v == Value::zero) return Value::one;
  if (v == Value::one) return Value::zero;
  return v;
}

class Silent : public Adversary {
 public:
  void act(const WorldView&, std::vector<Message>& out) override { out.clear(); }
};

class Flip : public Adversary {
 public:
  void act(const WorldView&, std::vector<Message>& out) override {
    for (auto& m : out) m.value = flipped(m.value);
  }
};

class Equivocate : public Adversary {
 public:
  void act(const WorldView&, std::vector<Message>& out) override {
    for (auto& m : out) m.value = value_of((m.route + m.to) % 2 == 1);
  }
};

class SplitBrain : public Adversary {
 public:
  explicit SplitBrain(std::vector<bool> preferred) : preferred_(std::move(preferred)) {}
  void act(const WorldView& view, std::vector<Message>& out) override {
    for (auto& m : out) {
      const NodeId dest = view.phase.routes->destination(m.route);
      const std::vector<bool>& pick = preferred_.empty() ? view.inputs : preferred_;
      m.value = value_of(pick.at(dest));
    }
  }

 private:
  std::vector<bool> preferred_;
};

class RandomAdversary : public Adversary {
 public:
  explicit RandomAdversary(std::uint64_t seed) : rng_(seed) {}
  void act(const WorldView& view, std::vector<Message>& out) override {
    std::vector<Message> next;
    next.reserve(out.size());
    for (auto m : out) {
      switch (rng_.below(6)) {
        case 0:
          break;
        case 1:
          m.value = flipped(m.value);
          break;
        case 2:
          m.value = Value::bottom;
          break;
        case 3:
          continue;
        case 4:
          m.value = value_of(rng_.below(2) == 1);
          break;
        default: {
          Message junk = m;
          junk.route = static_cast<std::uint32_t>(rng_.below(view.phase.routes->size() + 2));
          junk.value = static_cast<Value>(rng_.below(3));
          next.push_back(m);
          m = junk;
          break;
        }
      }
      next.push_back(m);
    }
    out.swap(next);
  }

 private:
  XorShift64Star rng_;
};

class Scripted : public Adversary {
 public:
  explicit Scripted(ScriptFn fn) : fn_(std::move(fn)) {}
  void act(const WorldView& view, std::vector<Message>& out) override { fn_(view, out); }

 private:
  ScriptFn fn_;
};

}  // namespace

std::unique_ptr<Adversary> make_adversary(const StrategySpec& spec) {
  switch (spec.kind) {
    case StrategyKind::honest:
      return nullptr;
    case StrategyKind::silent:
      return std::make_unique<Silent>();
    case StrategyKind::flip:
      return std::make_unique<Flip>();
    case StrategyKind::equivocate:
      return std::make_unique<Equivocate>();
    case StrategyKind::split_brain:
      return std::make_unique<SplitBrain>(spec.preferred);
    case StrategyKind::random:
      return std::make_unique<RandomAdversary>(spec.seed);
    case StrategyKind::scripted:
      if (!spec.script) throw std::invalid_argument("scripted strategy without a script");
      return std::make_unique<Scripted>(spec.script);
  }
  return nullptr;
}

namespace {

ojson names_json(const DiGraph& g, NodeSet s) { return g.names_of(s); }

ojson bits_json(NodeSet ones, NodeId n) {
  ojson a = ojson::array();
  for (NodeId i = 0; i < n; ++i) a.push_back(ones.contains(i) ? 1 : 0);
  return a;
}

NodeSet ones_of(const std::vector<NodeState>& st) {
  NodeSet s;
  for (NodeId i = 0; i < st.size(); ++i) {
    if (st[i].v) s.insert(i);
  }
  return s;
}

/// Synchronous round engine: one hop per round, all messages of a round
/// delivered at its end over FIFO links.
class World : public Exchange {
 public:
  World(const ProtocolPlan& plan, const RunConfig& cfg, Adversary* adversary)
      : plan_(plan), cfg_(cfg), adversary_(adversary), sent_seq_(kMaxNodes * kMaxNodes, 0),
        recv_seq_(kMaxNodes * kMaxNodes, 0) {}

  std::uint64_t round() const { return round_; }
  const LinkStats& stats() const { return stats_; }

  void deliver(const PhaseContext& ctx, std::span<const Value> sent, std::span<Value> received,
               const std::vector<NodeState>& states) override {
    const RouteBundle& rb = *ctx.phase->routes;
    held_.assign(sent.begin(), sent.end());
    accepted_.assign(rb.size(), false);
    const bool log = cfg_.sink != nullptr && cfg_.level == TranscriptLevel::messages;
    for (std::uint32_t hop = 0; hop < rb.rounds(); ++hop) {
      outbound_.clear();
      for (std::uint32_t r = 0; r < rb.size(); ++r) {
        if (rb.length(r) <= hop + 1) continue;
        const NodeId from = rb.hop(r, hop);
        Message m{from, rb.hop(r, hop + 1), ctx.outer, ctx.inner, ctx.phase->tag, r, hop, held_[r], 0};
        if (cfg_.faulty.contains(from)) {
          outbound_.push_back(m);
          continue;
        }
        // A fault-free relay forwards what it holds, so the slot keeps its
        // value; only the link bookkeeping moves.
        m.seq = link(from, m.to);
        if (log) record(m, true);
      }
      if (!outbound_.empty()) {
        if (adversary_ != nullptr) {
          const WorldView view{plan_, *ctx.iteration, *ctx.phase, states, cfg_.inputs, held_,
                               cfg_.faulty, round_, hop};
          adversary_->act(view, outbound_);
        }
        for (const auto& m : outbound_) {
          if (!cfg_.faulty.contains(m.from)) throw std::logic_error("adversary spoke for a fault-free node");
          if (m.to >= plan_.graph.size() || !plan_.graph.has_edge(m.from, m.to)) {
            throw std::logic_error("adversary used a missing link");
          }
        }
        // A faulty sender's slot reads bottom unless a scheduled message
        // arrives.
        for (std::uint32_t r = 0; r < rb.size(); ++r) {
          if (rb.length(r) > hop + 1 && cfg_.faulty.contains(rb.hop(r, hop))) held_[r] = Value::bottom;
        }
        for (auto& m : outbound_) {
          m.seq = link(m.from, m.to);
          const bool scheduled = m.route < rb.size() && m.hop == hop && rb.length(m.route) > hop + 1 &&
                                 rb.hop(m.route, hop) == m.from && rb.hop(m.route, hop + 1) == m.to &&
                                 !accepted_[m.route];
          if (scheduled) {
            held_[m.route] = m.value;
            accepted_[m.route] = true;
          } else {
            ++stats_.rejected;
          }
          if (log) record(m, scheduled);
        }
        for (const auto& m : outbound_) {
          if (m.route < rb.size()) accepted_[m.route] = false;
        }
      }
      ++round_;
    }
    std::copy(held_.begin(), held_.end(), received.begin());
  }

 private:
  std::uint64_t link(NodeId from, NodeId to) {
    const std::size_t id = from * kMaxNodes + to;
    const std::uint64_t seq = ++sent_seq_[id];
    if (seq != recv_seq_[id] + 1) ++stats_.order_violations;
    recv_seq_[id] = seq;
    ++stats_.sent;
    ++stats_.delivered;
    return seq;
  }

  void record(const Message& m, bool accepted) {
    ojson line{{"type", "msg"},
               {"round", round_},
               {"outer", m.outer},
               {"inner", m.inner},
               {"phase", to_string(m.tag)},
               {"route", m.route},
               {"hop", m.hop},
               {"from", plan_.graph.name(m.from)},
               {"to", plan_.graph.name(m.to)},
               {"value", to_string(m.value)},
               {"seq", m.seq},
               {"accepted", accepted}};
    *cfg_.sink << line.dump() << '\n';
  }

  const ProtocolPlan& plan_;
  const RunConfig& cfg_;
  Adversary* adversary_;
  std::uint64_t round_ = 0;
  LinkStats stats_;
  std::vector<std::uint64_t> sent_seq_;
  std::vector<std::uint64_t> recv_seq_;
  std::vector<Value> held_;
  std::vector<bool> accepted_;
  std::vector<Message> outbound_;
};

MonitorVerdict fail(std::string name, std::string detail, std::optional<std::uint64_t> round = std::nullopt) {
  return {std::move(name), false, std::move(detail), round};
}

bool uniform_on(NodeSet ones, NodeSet group) { return (ones & group).empty() || group.subset_of(ones); }

}  // namespace

MonitorVerdict monitor_lemma1(const Transcript& t) {
  const NodeSet ff = NodeSet::first_n(t.n) - t.faulty;
  for (const auto& rec : t.iterations) {
    const bool had1 = !(rec.v_begin & ff).empty();
    const bool had0 = !(ff - rec.v_begin).empty();
    const bool has1 = !(rec.v_end & ff).empty();
    const bool has0 = !(ff - rec.v_end).empty();
    if ((has1 && !had1) || (has0 && !had0)) {
      return fail("iteration-validity",
                  "iteration " + std::to_string(rec.outer) + "/" + std::to_string(rec.inner) +
                      " produced a value no fault-free node held at its start",
                  rec.round_end);
    }
  }
  return {"iteration-validity", true, std::to_string(t.iterations.size()) + " iterations checked", std::nullopt};
}

MonitorVerdict monitor_agreement_at_fstar(const Transcript& t, NodeSet fstar) {
  const NodeSet ff = NodeSet::first_n(t.n) - fstar;
  std::optional<std::uint32_t> at;
  for (const auto& o : t.outers) {
    if (o.faulty == fstar) {
      at = o.index;
      break;
    }
  }
  if (!at) return fail("agreement-at-fstar", "no OUTER iteration uses the actual faulty set");
  for (const auto& o : t.outers) {
    if (o.index >= *at && !uniform_on(o.v_end, ff)) {
      return fail("agreement-at-fstar", "fault-free nodes disagree after OUTER iteration " + std::to_string(o.index),
                  o.round_end);
    }
  }
  for (const auto& rec : t.iterations) {
    if (rec.outer > *at && !uniform_on(rec.v_end, ff)) {
      return fail("agreement-at-fstar",
                  "agreement lost in iteration " + std::to_string(rec.outer) + "/" + std::to_string(rec.inner),
                  rec.round_end);
    }
  }
  return {"agreement-at-fstar", true, "agreed from OUTER iteration " + std::to_string(*at), std::nullopt};
}

MonitorVerdict monitor_links(const Transcript& t) {
  if (t.links.order_violations != 0 || t.links.sent != t.links.delivered) {
    return fail("links", "sent " + std::to_string(t.links.sent) + ", delivered " + std::to_string(t.links.delivered) +
                             ", out of order " + std::to_string(t.links.order_violations));
  }
  return {"links", true, std::to_string(t.links.sent) + " messages delivered in order", std::nullopt};
}

MonitorVerdict monitor_termination(const Transcript& t) {
  std::uint64_t expect = 0;
  for (const auto& rec : t.iterations) {
    if (rec.round_begin != expect) return fail("termination", "round schedule gap", rec.round_begin);
    expect = rec.round_end;
  }
  if (t.rounds != t.planned_rounds || expect != t.rounds) {
    return fail("termination", "ran " + std::to_string(t.rounds) + " rounds, planned " +
                                   std::to_string(t.planned_rounds));
  }
  return {"termination", true, std::to_string(t.rounds) + " rounds", std::nullopt};
}

MonitorVerdict monitor_outcome(const Transcript& t) {
  const NodeSet ff = NodeSet::first_n(t.n) - t.faulty;
  const NodeSet final_ones = t.outers.empty() ? t.inputs : t.outers.back().v_end;
  if (!uniform_on(final_ones, ff)) return fail("outcome", "fault-free decisions differ", t.rounds);
  const bool one = !(final_ones & ff).empty();
  const bool valid = one ? !(t.inputs & ff).empty() : !(ff - t.inputs).empty();
  if (!valid) return fail("outcome", "decision is not a fault-free input", t.rounds);
  return {"outcome", true, std::string("all fault-free nodes decided ") + (one ? "1" : "0"), std::nullopt};
}

bool RunResult::ok() const {
  for (const auto& m : monitors) {
    if (!m.pass) return false;
  }
  return true;
}

RunResult run(const ProtocolPlan& plan, const RunConfig& cfg) {
  const DiGraph& g = plan.graph;
  if (cfg.inputs.size() != g.size()) throw std::invalid_argument("one input per node is required");
  g.check(cfg.faulty);
  if (cfg.faulty.size() > plan.f) throw std::invalid_argument("more faulty nodes than f");
  auto adversary = cfg.faulty.empty() ? nullptr : make_adversary(cfg.strategy);
  World world(plan, cfg, adversary.get());

  RunResult res;
  Transcript& t = res.transcript;
  t.n = g.size();
  t.f = plan.f;
  t.faulty = cfg.faulty;
  for (NodeId i = 0; i < g.size(); ++i) {
    if (cfg.inputs[i]) t.inputs.insert(i);
  }
  t.planned_rounds = plan.total_rounds;
  t.iterations.reserve(plan.iterations.size());

  if (cfg.sink != nullptr) {
    ojson header{{"type", "header"},
                 {"schema", kTranscriptSchema},
                 {"label", cfg.label},
                 {"nodes", g.names()},
                 {"f", plan.f},
                 {"faulty", names_json(g, cfg.faulty)},
                 {"strategy", to_string(cfg.faulty.empty() ? StrategyKind::honest : cfg.strategy.kind)},
                 {"seed", cfg.strategy.seed},
                 {"inputs", bits_json(t.inputs, t.n)},
                 {"level", cfg.level == TranscriptLevel::messages ? "messages" : "iterations"},
                 {"planned_rounds", plan.total_rounds}};
    *cfg.sink << header.dump() << '\n';
  }

  auto states = initial_states(cfg.inputs);
  for (std::size_t oi = 0; oi < plan.outer.size(); ++oi) {
    const OuterPlan& op = plan.outer[oi];
    for (std::size_t k = op.first; k < op.first + op.count; ++k) {
      const IterationPlan& it = plan.iterations[k];
      IterationRecord rec{it.outer, it.inner, it.faulty, it.a, it.b, it.s, it.case_tag, world.round(), 0,
                          ones_of(states), {}};
      run_inner_iteration(it, states, world);
      rec.round_end = world.round();
      rec.v_end = ones_of(states);
      if (cfg.sink != nullptr) {
        ojson line{{"type", "iteration"},
                   {"outer", rec.outer},
                   {"inner", rec.inner},
                   {"F", names_json(g, rec.faulty)},
                   {"A", names_json(g, rec.a)},
                   {"B", names_json(g, rec.b)},
                   {"S", names_json(g, rec.s)},
                   {"case", rec.case_tag},
                   {"round_begin", rec.round_begin},
                   {"round_end", rec.round_end},
                   {"v_begin", bits_json(rec.v_begin, t.n)},
                   {"v_end", bits_json(rec.v_end, t.n)}};
        *cfg.sink << line.dump() << '\n';
      }
      t.iterations.push_back(rec);
    }
    OuterRecord orec{static_cast<std::uint32_t>(oi), op.faulty, world.round(), ones_of(states)};
    if (cfg.sink != nullptr) {
      ojson line{{"type", "outer"},
                 {"outer", orec.index},
                 {"F", names_json(g, orec.faulty)},
                 {"round_end", orec.round_end},
                 {"v_end", bits_json(orec.v_end, t.n)}};
      *cfg.sink << line.dump() << '\n';
    }
    t.outers.push_back(orec);
  }
  t.rounds = world.round();
  t.links = world.stats();

  res.monitors = {monitor_lemma1(t), monitor_agreement_at_fstar(t, cfg.faulty), monitor_links(t),
                  monitor_termination(t), monitor_outcome(t)};
  res.fault_free = g.nodes() - cfg.faulty;
  res.final_v.resize(g.size());
  for (NodeId i = 0; i < g.size(); ++i) res.final_v[i] = states[i].v;
  const NodeSet ones = ones_of(states);
  if (uniform_on(ones, res.fault_free) && !res.fault_free.empty()) {
    res.decision = ones.contains(res.fault_free.front());
  }
  if (cfg.sink != nullptr) {
    for (const auto& m : res.monitors) {
      ojson line{{"type", "monitor"}, {"name", m.name}, {"pass", m.pass}, {"detail", m.detail}};
      if (m.round) line["round"] = *m.round;
      *cfg.sink << line.dump() << '\n';
    }
    ojson links{{"type", "links"},
                {"sent", t.links.sent},
                {"delivered", t.links.delivered},
                {"order_violations", t.links.order_violations},
                {"rejected", t.links.rejected}};
    *cfg.sink << links.dump() << '\n';
    for (NodeId i : res.fault_free) {
      ojson line{{"type", "decision"}, {"node", g.name(i)}, {"value", res.final_v[i] ? 1 : 0}};
      *cfg.sink << line.dump() << '\n';
    }
  }
  return res;
}

bool MultiRunResult::ok() const {
  for (const auto& b : bits) {
    if (!b.ok()) return false;
  }
  return decision.has_value();
}

MultiRunResult run_multivalued(const ProtocolPlan& plan, const std::vector<std::uint64_t>& inputs, int bits,
                               const RunConfig& base) {
  if (bits < 1 || bits > 64) throw std::invalid_argument("bit width must be in 1..64");
  if (inputs.size() != plan.graph.size()) throw std::invalid_argument("one input per node is required");
  MultiRunResult out;
  out.final_words.assign(inputs.size(), 0);
  bool agreed = true;
  std::uint64_t word = 0;
  for (int b = 0; b < bits; ++b) {
    RunConfig cfg = base;
    cfg.inputs.assign(inputs.size(), false);
    for (std::size_t i = 0; i < inputs.size(); ++i) cfg.inputs[i] = ((inputs[i] >> b) & 1U) != 0;
    cfg.strategy.seed = base.strategy.seed + static_cast<std::uint64_t>(b);
    cfg.label = base.label + (base.label.empty() ? "" : " ") + "bit " + std::to_string(b);
    RunResult r = run(plan, cfg);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      if (r.final_v[i]) out.final_words[i] |= std::uint64_t{1} << b;
    }
    if (r.decision) {
      if (*r.decision) word |= std::uint64_t{1} << b;
    } else {
      agreed = false;
    }
    out.bits.push_back(std::move(r));
  }
  if (agreed) out.decision = word;
  return out;
}

}  // namespace dgbc

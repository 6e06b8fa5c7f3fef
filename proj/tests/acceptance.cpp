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

// Acceptance driver. One PASS/FAIL line per criterion; exit status is the
// number of failures. Pass criterion numbers as arguments to run a subset.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dgbc/condition.hpp"
#include "dgbc/generators.hpp"
#include "dgbc/graph_io.hpp"
#include "dgbc/protocol.hpp"
#include "dgbc/relations.hpp"
#include "dgbc/simulator.hpp"
#include "oracles.hpp"

using namespace dgbc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
std::pair<std::invoke_result_t<F>, double> timed(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = fn();
  return {std::move(r), seconds_since(t0)};
}

std::string fmt(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

std::vector<bool> unpack(std::uint64_t mask, NodeId n) {
  std::vector<bool> v(n);
  for (NodeId i = 0; i < n; ++i) v[i] = ((mask >> i) & 1U) != 0;
  return v;
}

Outcome clique_with_sink() {
  const DiGraph g = clique_sink(4);
  const auto [one, t1] = timed([&] { return check_theorem1(g, 1); });
  const auto [two, t2] = timed([&] { return check_theorem1(g, 2); });
  const bool pass = one.satisfied && !two.satisfied && t1 < 1.0 && t2 < 1.0;
  return {pass, "f=1 " + std::string(one.satisfied ? "satisfied" : "violated") + " in " + fmt(t1) + ", f=2 " +
                    (two.satisfied ? "satisfied" : "violated") + " in " + fmt(t2)};
}

Outcome two_clique_network() {
  const DiGraph g = two_clique(2);
  const auto [v, t] = timed([&] { return check_theorem1(g, 2); });
  return {v.satisfied && t <= 600.0, std::string(v.satisfied ? "satisfied" : "violated") + " over " +
                                          std::to_string(v.partitions_examined) + " partitions in " + fmt(t)};
}

Outcome worked_example() {
  const DiGraph g = two_clique(2);
  const NodeSet f = g.set_of({"u1", "u2"});
  const NodeSet k2 = g.set_of({"w1", "w2", "w3", "w4", "w5", "w6", "w7"});
  const NodeSet rest = g.set_of({"u3", "u4", "u5", "u6", "u7"});
  const bool forward = propagates(g, k2, rest, f, 2).verdict;
  const bool backward = propagates(g, rest, k2, f, 2).verdict;
  const bool oracle_forward = oracle::propagates(g, k2, rest, f, 2);
  const bool oracle_backward = oracle::propagates(g, rest, k2, f, 2);
  const bool pass = forward && !backward && oracle_forward == forward && oracle_backward == backward;
  return {pass, std::string("K2 to {u3..u7}: ") + (forward ? "true" : "false") + ", reverse: " +
                    (backward ? "true" : "false")};
}

Outcome menger_oracle() {
  XorShift64Star rng(500);
  std::uint64_t probes = 0;
  std::uint64_t mismatches = 0;
  for (int graph = 0; graph < 500; ++graph) {
    const auto n = static_cast<NodeId>(2 + rng.below(6));
    const DiGraph g = random_digraph(n, 0.2 + 0.7 * rng.uniform(), rng.next());
    for (int probe = 0; probe < 16; ++probe) {
      const auto target = static_cast<NodeId>(rng.below(n));
      NodeSet sources;
      NodeSet excluded;
      for (NodeId i = 0; i < n; ++i) {
        if (i == target) continue;
        const auto roll = rng.below(3);
        if (roll == 0) sources.insert(i);
        if (roll == 1 && rng.below(2) == 0) excluded.insert(i);
      }
      if (sources.empty()) continue;
      ++probes;
      const std::size_t want = oracle::max_disjoint(g, sources, target, excluded);
      const PathSet got = max_disjoint_paths(g, sources, target, excluded, n);
      if (got.count() != want) ++mismatches;
    }
  }
  return {mismatches == 0 && probes > 0,
          std::to_string(probes) + " probes on 500 graphs, " + std::to_string(mismatches) + " mismatches"};
}

Outcome form_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  // Every digraph on 4 nodes, checked against both brute-force forms too.
  const EquivalenceReport ex = equivalence_fuzz(4, 1, FuzzMode::exhaustive);
  std::uint64_t oracle_gaps = 0;
  for (std::uint64_t mask = 0; mask < 4096; ++mask) {
    std::vector<Edge> edges;
    int bit = 0;
    for (NodeId i = 0; i < 4; ++i) {
      for (NodeId j = 0; j < 4; ++j) {
        if (i == j) continue;
        if ((mask >> bit++) & 1U) edges.emplace_back(i, j);
      }
    }
    const DiGraph g(4, edges);
    const bool t = check_theorem1(g, 1, ScanOptions{1}).satisfied;
    if (t != oracle::theorem1(g, 1) || t != oracle::condition1(g, 1)) ++oracle_gaps;
  }
  XorShift64Star rng(1000);
  std::uint64_t random_gaps = 0;
  std::uint64_t random_satisfied = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<NodeId>(2 + rng.below(6));
    const int f = static_cast<int>(rng.below(3));
    const DiGraph g = random_digraph(n, 0.4 + 0.6 * rng.uniform(), rng.next());
    const bool t = check_theorem1(g, f).satisfied;
    if (t != check_condition1(g, f).satisfied) ++random_gaps;
    if (t) ++random_satisfied;
  }
  const double t = seconds_since(t0);
  const bool pass = ex.graphs_tested == 4096 && ex.disagreements == 0 && oracle_gaps == 0 && random_gaps == 0 &&
                    t < 300.0;
  return {pass, "n=4 exhaustive: " + std::to_string(ex.graphs_tested) + " graphs (" + std::to_string(ex.satisfied) +
                    " satisfied), " + std::to_string(ex.disagreements + oracle_gaps) +
                    " disagreements; 1000 random (" + std::to_string(random_satisfied) + " satisfied): " +
                    std::to_string(random_gaps) + " disagreements; " + fmt(t)};
}

struct FuzzTally {
  std::uint64_t runs = 0;
  std::uint64_t failed = 0;
  std::string first;
};

void tally(FuzzTally& t, const RunResult& r, const std::string& label) {
  ++t.runs;
  bool ok = r.ok() && r.decision.has_value();
  if (ok) return;
  ++t.failed;
  if (!t.first.empty()) return;
  t.first = label;
  for (const auto& m : r.monitors) {
    if (!m.pass) t.first += " [" + m.name + ": " + m.detail + "]";
  }
}

void fuzz_graph(const DiGraph& g, int f, int inputs_per_set, FuzzTally& t, std::uint64_t seed) {
  const ProtocolPlan plan = build_plan(g, f);
  const NodeId n = g.size();
  XorShift64Star rng(seed);
  const StrategyKind scripted[] = {StrategyKind::silent, StrategyKind::flip, StrategyKind::equivocate,
                                   StrategyKind::split_brain};
  for (NodeSet faulty : fault_sets(n, f)) {
    for (StrategyKind kind : scripted) {
      for (int k = 0; k < inputs_per_set; ++k) {
        RunConfig cfg;
        cfg.inputs = unpack(rng.next(), n);
        cfg.faulty = faulty;
        cfg.strategy.kind = kind;
        tally(t, run(plan, cfg), g.name(0) + " F=" + std::to_string(faulty.bits()) + " " + to_string(kind));
      }
    }
  }
  const auto sets = fault_sets(n, f);
  for (std::uint64_t s = 0; s < 200; ++s) {
    RunConfig cfg;
    cfg.inputs = unpack(rng.next(), n);
    // Random adversaries always get a full-size faulty set.
    do {
      cfg.faulty = sets[rng.below(sets.size())];
    } while (cfg.faulty.size() != f);
    cfg.strategy.kind = StrategyKind::random;
    cfg.strategy.seed = s;
    tally(t, run(plan, cfg), g.name(0) + " random seed " + std::to_string(s));
  }
}

Outcome protocol_fuzz() {
  FuzzTally sink4;
  FuzzTally tc;
  const auto [unused1, t1] = timed([&] {
    fuzz_graph(clique_sink(4), 1, 8, sink4, 61);
    return 0;
  });
  const auto [unused2, t2] = timed([&] {
    fuzz_graph(two_clique(2), 2, 1, tc, 62);
    return 0;
  });
  (void)unused1;
  (void)unused2;
  std::string detail = "clique-sink: " + std::to_string(sink4.runs) + " runs, " + std::to_string(sink4.failed) +
                       " failed (" + fmt(t1) + "); two-clique: " + std::to_string(tc.runs) + " runs, " +
                       std::to_string(tc.failed) + " failed (" + fmt(t2) + ")";
  if (!sink4.first.empty()) detail += "; first: " + sink4.first;
  if (!tc.first.empty()) detail += "; first: " + tc.first;
  return {sink4.failed == 0 && tc.failed == 0, detail};
}

// Re-checks every iteration with brute-force relations, independent of the
// library's own verifier.
Outcome plan_invariants() {
  std::vector<std::pair<DiGraph, int>> corpus = {
      {clique_sink(4), 1}, {clique_sink(5), 1},     {clique_sink(6), 1},       {clique_sink(7), 2},
      {clique_sink(2), 0}, {complete_digraph(4), 1}, {complete_digraph(5), 1}, {complete_digraph(6), 1},
      {complete_digraph(7), 2}, {DiGraph(3, {{0, 1}, {1, 2}, {2, 0}}, {"a", "b", "c"}), 0}};
  XorShift64Star rng(7);
  int drawn = 0;
  while (drawn < 60) {
    const auto n = static_cast<NodeId>(4 + rng.below(5));
    const int f = static_cast<int>(rng.below(2));
    const DiGraph g = random_digraph(n, 0.55 + 0.45 * rng.uniform(), rng.next());
    if (!check_theorem1(g, f).satisfied) continue;
    corpus.emplace_back(g, f);
    ++drawn;
  }
  std::uint64_t iterations = 0;
  std::uint64_t failures = 0;
  std::string first;
  for (const auto& [g, f] : corpus) {
    const ProtocolPlan plan = build_plan(g, f);
    std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>, bool> memo;
    auto prop = [&](NodeSet a, NodeSet b, NodeSet faulty) {
      const auto key = std::make_tuple(a.bits(), b.bits(), faulty.bits());
      auto it = memo.find(key);
      if (it == memo.end()) it = memo.emplace(key, oracle::propagates(g, a, b, faulty, f)).first;
      return it->second;
    };
    for (const auto& it : plan.iterations) {
      ++iterations;
      const NodeSet rest = g.nodes() - it.faulty;
      const auto reach = oracle::closure(g, rest);
      bool strong = !it.s.empty();
      for (NodeId i : it.s) strong = strong && it.s.subset_of(reach[i]);
      bool ok = strong && (it.a | it.b) == rest && !it.a.intersects(it.b);
      ok = ok && prop(it.s, rest - it.s, it.faulty);
      if (it.case_tag == 1) {
        ok = ok && it.s.subset_of(it.a);
      } else {
        ok = ok && prop(it.a, it.s - it.a, it.faulty);
      }
      const auto lib = verify_iteration_plan(g, f, it);
      if (!ok || lib) {
        ++failures;
        if (first.empty()) first = lib ? *lib : "oracle re-check failed";
      }
    }
  }
  std::string detail = std::to_string(corpus.size()) + " graphs, " + std::to_string(iterations) +
                       " iterations, " + std::to_string(failures) + " failures";
  if (!first.empty()) detail += "; first: " + first;
  return {failures == 0, detail};
}

Outcome f0_path() {
  std::uint64_t checked = 0;
  std::uint64_t wrong = 0;
  for (const DiGraph& g : {DiGraph(3, {{0, 1}, {1, 2}, {2, 0}}, {"a", "b", "c"}), clique_sink(4)}) {
    const auto comps = oracle::source_components(g, {}, {});
    if (comps.size() != 1) return {false, "oracle found more than one source component"};
    const NodeId rep = comps.front().front();
    if (f0_representative(g) != rep) ++wrong;
    const ProtocolPlan plan = build_plan(g, 0);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << g.size()); ++m) {
      const auto in = unpack(m, g.size());
      ++checked;
      const auto out = f0_consensus(g, in);
      const auto general = bc_consensus(plan, in);
      bool ok = true;
      for (NodeId i = 0; i < g.size(); ++i) ok = ok && out[i] == in[rep] && general[i] == out[0];
      if (!ok) ++wrong;
    }
  }
  return {wrong == 0 && checked == 40, std::to_string(checked) + " input vectors, " + std::to_string(wrong) + " wrong"};
}

Outcome multi_valued() {
  const ProtocolPlan sink4 = build_plan(clique_sink(4), 1);
  const ProtocolPlan tc = build_plan(two_clique(2), 2);
  std::string detail;
  bool pass = true;
  auto check = [&](const ProtocolPlan& plan, const std::vector<std::uint64_t>& words, NodeSet faulty,
                   StrategyKind kind, const std::string& name) {
    RunConfig base;
    base.faulty = faulty;
    base.strategy.kind = kind;
    base.strategy.seed = 90;
    const MultiRunResult r = run_multivalued(plan, words, 8, base);
    bool ok = r.ok() && r.decision.has_value();
    const NodeSet ff = plan.graph.nodes() - faulty;
    bool unanimous = true;
    for (NodeId i : ff) unanimous = unanimous && words[i] == words[ff.front()];
    if (ok && unanimous) ok = *r.decision == words[ff.front()];
    if (ok) {
      for (int b = 0; b < 8; ++b) {
        bool seen = false;
        for (NodeId i : ff) seen = seen || ((words[i] >> b) & 1U) == ((*r.decision >> b) & 1U);
        ok = ok && seen;
      }
      for (NodeId i : ff) ok = ok && r.final_words[i] == *r.decision;
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%02llX", static_cast<unsigned long long>(r.decision.value_or(0)));
    detail += (detail.empty() ? "" : "; ") + name + " -> " + (r.decision ? buf : "no agreement");
    pass = pass && ok;
  };
  check(sink4, std::vector<std::uint64_t>(5, 0xA5), NodeSet{4}, StrategyKind::flip, "unanimous 0xA5");
  check(sink4, {0x00, 0xFF, 0xFF, 0x00, 0x5A}, NodeSet{1}, StrategyKind::equivocate, "split 0x00/0xFF");
  std::vector<std::uint64_t> words(14, 0x0F);
  for (NodeId i = 7; i < 14; ++i) words[i] = 0xF0;
  check(tc, words, NodeSet{6, 13}, StrategyKind::split_brain, "two-clique split 0x0F/0xF0");
  return {pass, detail};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& cli) {
  std::uint64_t compared = 0;
  std::uint64_t differing = 0;
  const ProtocolPlan sink4 = build_plan(clique_sink(4), 1);
  const ProtocolPlan tc = build_plan(two_clique(2), 2);
  auto transcript = [](const ProtocolPlan& plan, std::vector<bool> in, NodeSet faulty, StrategyKind kind,
                       std::uint64_t seed, TranscriptLevel level) {
    std::ostringstream sink;
    RunConfig cfg;
    cfg.inputs = std::move(in);
    cfg.faulty = faulty;
    cfg.strategy.kind = kind;
    cfg.strategy.seed = seed;
    cfg.sink = &sink;
    cfg.level = level;
    run(plan, cfg);
    return sink.str();
  };
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto in = unpack(seed * 7 + 3, 5);
    ++compared;
    if (transcript(sink4, in, NodeSet::single(static_cast<NodeId>(seed % 5)), StrategyKind::random, seed, TranscriptLevel::messages) !=
        transcript(sink4, in, NodeSet::single(static_cast<NodeId>(seed % 5)), StrategyKind::random, seed, TranscriptLevel::messages)) {
      ++differing;
    }
  }
  const auto in = unpack(0x2A5B, 14);
  ++compared;
  if (transcript(tc, in, NodeSet{0, 10}, StrategyKind::random, 4, TranscriptLevel::iterations) !=
      transcript(tc, in, NodeSet{0, 10}, StrategyKind::random, 4, TranscriptLevel::iterations)) {
    ++differing;
  }

  // Same check through the command-line tool.
  std::string cli_note = "command line skipped";
  if (!cli.empty()) {
    const auto dir = std::filesystem::temp_directory_path() / "dgbc_acceptance";
    std::filesystem::create_directories(dir);
    save_text(dir / "sink4.json", to_json(clique_sink(4)));
    bool same = true;
    std::string first;
    for (int k = 0; k < 2; ++k) {
      const auto out = dir / ("t" + std::to_string(k) + ".jsonl");
      const std::string cmd = "\"" + cli + "\" run --graph \"" + (dir / "sink4.json").string() +
                              "\" --f 1 --faulty v3 --strategy random --seed 11 --inputs 1,0,1,0,1 "
                              "--transcript-level messages --transcript \"" + out.string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) same = false;
      const std::string text = read_file(out);
      if (text.empty()) same = false;
      if (k == 0) {
        first = text;
      } else if (text != first) {
        same = false;
      }
    }
    std::filesystem::remove_all(dir);
    ++compared;
    if (!same) ++differing;
    cli_note = std::string("command line ") + (same ? "identical" : "differs");
  }
  return {differing == 0, std::to_string(compared) + " repeated runs, " + std::to_string(differing) +
                              " differing; " + cli_note};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
#ifdef DGBC_CLI_PATH
  cli = DGBC_CLI_PATH;
#endif
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"clique with sink: f=1 satisfied, f=2 violated, under 1 s", clique_with_sink},
      {"two-clique network satisfies the condition for f=2", two_clique_network},
      {"worked propagation example on the two-clique network", worked_example},
      {"disjoint-path counts match brute force", menger_oracle},
      {"both condition forms agree", form_equivalence},
      {"consensus survives scripted and random adversaries", protocol_fuzz},
      {"every iteration plan re-verifies", plan_invariants},
      {"f=0 consensus decides the representative's input", f0_path},
      {"multi-valued consensus", multi_valued},
      {"repeated runs give byte-identical transcripts", [&cli] { return determinism(cli); }},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << criteria[i].first << " -- "
              << o.detail << " [" << fmt(seconds_since(t0)) << "]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

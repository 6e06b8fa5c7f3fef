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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dgbc/condition.hpp"
#include "dgbc/generators.hpp"
#include "dgbc/graph_io.hpp"
#include "dgbc/protocol.hpp"
#include "dgbc/simulator.hpp"
#include "json.hpp"

namespace {

using dgbc::DiGraph;
using dgbc::NodeSet;
using json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

DiGraph read_graph(const std::string& path) {
  if (!std::filesystem::exists(path)) throw UsageError("graph file not found: " + path);
  try {
    return dgbc::load_graph(path);
  } catch (const std::exception& e) {
    throw UsageError(std::string("cannot read graph: ") + e.what());
  }
}

std::string braces(const DiGraph& g, NodeSet s) {
  std::string out = "{";
  bool first = true;
  for (const auto& name : g.names_of(s)) {
    out += (first ? "" : ", ") + name;
    first = false;
  }
  return out + "}";
}

json witness_json(const DiGraph& g, dgbc::ConditionForm form, const dgbc::PartitionWitness& w) {
  if (form == dgbc::ConditionForm::propagate) {
    return {{"A", g.names_of(w.a)}, {"B", g.names_of(w.b)}, {"F", g.names_of(w.faulty)}};
  }
  return {{"L", g.names_of(w.a)}, {"C", g.names_of(w.c)}, {"R", g.names_of(w.b)}, {"F", g.names_of(w.faulty)}};
}

std::string witness_text(const DiGraph& g, dgbc::ConditionForm form, const dgbc::PartitionWitness& w) {
  if (form == dgbc::ConditionForm::propagate) {
    return "A = " + braces(g, w.a) + ", B = " + braces(g, w.b) + ", F = " + braces(g, w.faulty);
  }
  return "L = " + braces(g, w.a) + ", C = " + braces(g, w.c) + ", R = " + braces(g, w.b) +
         ", F = " + braces(g, w.faulty);
}

// gen

struct GenArgs {
  std::string family;
  int f = 0;
  int k = 0;
  unsigned n = 0;
  double p = 0.5;
  std::uint64_t seed = 0;
  std::string out;
  bool dot = false;
};

int cmd_gen(const GenArgs& a) {
  dgbc::FamilySpec spec;
  try {
    spec.family = dgbc::parse_family(a.family);
  } catch (const dgbc::GraphError& e) {
    throw UsageError(e.what());
  }
  spec.f = a.f;
  spec.k = a.k;
  spec.n = a.n;
  spec.p = a.p;
  spec.seed = a.seed;
  DiGraph g;
  try {
    g = dgbc::generate(spec);
  } catch (const dgbc::GraphError& e) {
    throw UsageError(e.what());
  }
  if (a.out.empty()) {
    std::cout << (a.dot ? dgbc::to_dot(g) : dgbc::to_json(g));
    return kOk;
  }
  dgbc::save_text(a.out, dgbc::to_json(g));
  if (a.dot) {
    std::filesystem::path dot_path(a.out);
    dot_path.replace_extension(".dot");
    dgbc::save_text(dot_path, dgbc::to_dot(g));
  }
  std::cout << "wrote " << a.out << " (" << g.size() << " nodes, " << g.edge_count() << " edges)\n";
  return kOk;
}

// check

struct CheckArgs {
  std::string graph;
  int f = 0;
  std::string method = "auto";
  bool witness = false;
  bool json_out = false;
  unsigned threads = 0;
};

int cmd_check(const CheckArgs& a) {
  const DiGraph g = read_graph(a.graph);
  if (g.size() < 2) throw UsageError("graph needs at least two nodes");
  json out{{"graph", a.graph}, {"f", a.f}, {"method", a.method}};
  std::optional<dgbc::ConditionVerdict> verdict;
  std::string note;

  if (a.method == "degree" || a.method == "auto") {
    const dgbc::DegreeCheck d = dgbc::check_degree_bounds(g, a.f);
    if (!d.pass) {
      dgbc::ConditionVerdict v;
      v.form = dgbc::ConditionForm::propagate;
      v.f = a.f;
      v.witness = dgbc::witness_from_degree_failure(g, a.f, d);
      verdict = v;
      note = d.reason;
    } else if (a.method == "degree") {
      out["verdict"] = "screen-passed";
      out["note"] = "degree screen is necessary, not sufficient";
      if (a.json_out) {
        std::cout << out.dump(2) << '\n';
      } else {
        std::cout << "screen-passed (degree bounds hold; necessary condition only)\n";
      }
      return kOk;
    }
  }
  if (!verdict) {
    const dgbc::ScanOptions opts{a.threads};
    if (a.method == "absorb" || a.method == "condition1") {
      verdict = dgbc::check_condition1(g, a.f, opts);
    } else {
      verdict = dgbc::check_theorem1(g, a.f, opts);
    }
  }
  const bool ok = verdict->satisfied;
  out["verdict"] = ok ? "satisfied" : "violated";
  out["fault_sets_examined"] = verdict->fault_sets_examined;
  out["partitions_examined"] = verdict->partitions_examined;
  if (!note.empty()) out["reason"] = note;
  if (verdict->witness && a.witness) out["witness"] = witness_json(g, verdict->form, *verdict->witness);
  if (a.json_out) {
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << (ok ? "satisfied" : "violated") << '\n';
    if (!note.empty()) std::cout << "reason: " << note << '\n';
    std::cout << "fault sets examined: " << verdict->fault_sets_examined << '\n';
    std::cout << "partitions examined: " << verdict->partitions_examined << '\n';
    if (verdict->witness && a.witness) {
      std::cout << "witness: " << witness_text(g, verdict->form, *verdict->witness) << '\n';
    }
  }
  return ok ? kOk : kNegative;
}

// run

struct RunArgs {
  std::string graph;
  int f = 0;
  std::string faulty;
  std::string strategy = "honest";
  std::string inputs;
  std::uint64_t seed = 0;
  std::string transcript;
  std::string level = "iterations";
  int bits = 1;
  bool json_out = false;
};

int cmd_run(const RunArgs& a) {
  const DiGraph g = read_graph(a.graph);
  NodeSet faulty;
  try {
    faulty = g.set_of(split(a.faulty, ','));
  } catch (const dgbc::GraphError& e) {
    throw UsageError(e.what());
  }
  if (faulty.size() > a.f) throw UsageError("more faulty nodes than f");
  dgbc::StrategySpec strat;
  try {
    strat.kind = dgbc::parse_strategy(a.strategy);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  strat.seed = a.seed;
  if (a.bits < 1 || a.bits > 64) throw UsageError("--bits must be in 1..64");
  const auto fields = split(a.inputs, ',');
  if (fields.size() != g.size()) {
    throw UsageError("--inputs needs " + std::to_string(g.size()) + " values, got " + std::to_string(fields.size()));
  }
  std::vector<std::uint64_t> words;
  for (const auto& s : fields) {
    std::size_t used = 0;
    std::uint64_t w = 0;
    try {
      w = std::stoull(s, &used, 0);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || (a.bits < 64 && w >> a.bits != 0)) throw UsageError("bad input value '" + s + "'");
    words.push_back(w);
  }

  dgbc::ProtocolPlan plan;
  try {
    plan = dgbc::build_plan(g, a.f);
  } catch (const dgbc::ConditionViolated& e) {
    if (a.json_out) {
      json out{{"refused", true}, {"reason", e.what()},
               {"witness", witness_json(g, dgbc::ConditionForm::propagate, e.witness)}};
      std::cout << out.dump(2) << '\n';
    } else {
      std::cout << "refused: condition violated for f = " << a.f << " (" << e.what() << ")\n";
      std::cout << "witness: " << witness_text(g, dgbc::ConditionForm::propagate, e.witness) << '\n';
    }
    return kNegative;
  }

  std::ofstream file;
  dgbc::RunConfig cfg;
  cfg.faulty = faulty;
  cfg.strategy = strat;
  cfg.level = a.level == "messages" ? dgbc::TranscriptLevel::messages : dgbc::TranscriptLevel::iterations;
  if (!a.transcript.empty()) {
    file.open(a.transcript, std::ios::binary | std::ios::trunc);
    if (!file) throw UsageError("cannot write transcript: " + a.transcript);
    cfg.sink = &file;
  }

  std::vector<std::uint64_t> final_words;
  std::vector<dgbc::MonitorVerdict> monitors;
  bool ok = true;
  std::optional<std::uint64_t> decision;
  if (a.bits == 1) {
    cfg.inputs.resize(g.size());
    for (std::size_t i = 0; i < words.size(); ++i) cfg.inputs[i] = words[i] != 0;
    const dgbc::RunResult r = dgbc::run(plan, cfg);
    for (bool b : r.final_v) final_words.push_back(b ? 1 : 0);
    monitors = r.monitors;
    ok = r.ok();
    if (r.decision) decision = *r.decision ? 1 : 0;
  } else {
    const dgbc::MultiRunResult r = dgbc::run_multivalued(plan, words, a.bits, cfg);
    final_words = r.final_words;
    for (std::size_t b = 0; b < r.bits.size(); ++b) {
      for (auto m : r.bits[b].monitors) {
        m.name = "bit" + std::to_string(b) + "/" + m.name;
        monitors.push_back(m);
      }
    }
    ok = r.ok();
    decision = r.decision;
  }

  const NodeSet ff = g.nodes() - faulty;
  if (a.json_out) {
    json dec = json::object();
    for (dgbc::NodeId i : ff) dec[g.name(i)] = final_words[i];
    json mons = json::array();
    for (const auto& m : monitors) mons.push_back({{"name", m.name}, {"pass", m.pass}, {"detail", m.detail}});
    json out{{"decisions", dec}, {"monitors", mons}, {"ok", ok}, {"rounds", plan.total_rounds}};
    if (decision) out["decision"] = *decision;
    std::cout << out.dump(2) << '\n';
  } else {
    for (dgbc::NodeId i : ff) std::cout << g.name(i) << ": " << final_words[i] << '\n';
    for (const auto& m : monitors) {
      std::cout << "monitor " << m.name << ": " << (m.pass ? "pass" : "FAIL") << " (" << m.detail << ")\n";
    }
    std::cout << "rounds: " << plan.total_rounds << '\n';
  }
  return ok ? kOk : kNegative;
}

// equiv

struct EquivArgs {
  unsigned n = 0;
  int f = 1;
  bool exhaustive = false;
  bool random = false;
  std::uint64_t trials = 100;
  std::uint64_t seed = 0;
  bool json_out = false;
};

int cmd_equiv(const EquivArgs& a) {
  if (a.exhaustive == a.random) throw UsageError("choose exactly one of --exhaustive or --random");
  if (a.exhaustive && a.n > 4) throw UsageError("--exhaustive is limited to n <= 4");
  if (a.n < 2 || a.n > 24) throw UsageError("--n must be in 2..24");
  const auto rep = dgbc::equivalence_fuzz(a.n, a.f, a.exhaustive ? dgbc::FuzzMode::exhaustive : dgbc::FuzzMode::random,
                                          a.trials, a.seed);
  if (a.json_out) {
    json out{{"n", rep.n},
             {"f", rep.f},
             {"graphs_tested", rep.graphs_tested},
             {"satisfied", rep.satisfied},
             {"disagreements", rep.disagreements}};
    if (rep.first_disagreement) out["first_disagreement"] = json::parse(*rep.first_disagreement);
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "graphs tested: " << rep.graphs_tested << '\n';
    std::cout << "satisfying: " << rep.satisfied << '\n';
    std::cout << "disagreements: " << rep.disagreements << '\n';
    if (rep.first_disagreement) std::cout << "first disagreement:\n" << *rep.first_disagreement;
  }
  return rep.disagreements == 0 ? kOk : kNegative;
}

// export

int cmd_export(const std::string& graph, const std::string& format, const std::string& out) {
  const DiGraph g = read_graph(graph);
  const std::string text = format == "dot" ? dgbc::to_dot(g) : dgbc::to_json(g);
  if (out.empty()) {
    std::cout << text;
  } else {
    dgbc::save_text(out, text);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Byzantine consensus in directed graphs: feasibility checks and protocol simulation", "dgbc"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a graph family");
  g->add_option("--family", gen.family, "two-clique | clique-sink | random | complete")->required();
  g->add_option("--f", gen.f, "fault bound (two-clique)");
  g->add_option("--k", gen.k, "clique size (clique-sink)");
  g->add_option("--n", gen.n, "node count (random, complete)");
  g->add_option("--p", gen.p, "edge probability (random)");
  g->add_option("--seed", gen.seed, "seed (random)");
  g->add_option("--out", gen.out, "output JSON path");
  g->add_flag("--dot", gen.dot, "also write DOT (stdout: DOT only)");

  CheckArgs chk;
  auto* c = app.add_subcommand("check", "Decide whether a graph tolerates f Byzantine faults");
  c->add_option("--graph", chk.graph, "graph file (.json or .dot)")->required();
  c->add_option("--f", chk.f, "fault bound")->required()->check(CLI::NonNegativeNumber);
  // theorem1 and condition1 are older names for propagate and absorb.
  c->add_option("--method", chk.method, "auto | propagate | absorb | degree")
      ->check(CLI::IsMember({"auto", "propagate", "absorb", "degree", "theorem1", "condition1"}));
  c->add_flag("--witness", chk.witness, "print a violating partition");
  c->add_flag("--json", chk.json_out, "JSON output");
  c->add_option("--threads", chk.threads, "scan threads (default: DGBC_THREADS or hardware)");

  RunArgs run;
  auto* r = app.add_subcommand("run", "Simulate consensus under a Byzantine adversary");
  r->add_option("--graph", run.graph, "graph file")->required();
  r->add_option("--f", run.f, "fault bound")->required()->check(CLI::NonNegativeNumber);
  r->add_option("--faulty", run.faulty, "comma-separated faulty node names");
  r->add_option("--strategy", run.strategy, "honest | silent | flip | equivocate | split-brain | random");
  r->add_option("--inputs", run.inputs, "comma-separated inputs in node order")->required();
  r->add_option("--seed", run.seed, "adversary seed");
  r->add_option("--transcript", run.transcript, "JSON-lines transcript path");
  r->add_option("--transcript-level", run.level, "iterations | messages")
      ->check(CLI::IsMember({"iterations", "messages"}));
  r->add_option("--bits", run.bits, "input width; one instance per bit");
  r->add_flag("--json", run.json_out, "JSON output");

  EquivArgs eq;
  auto* e = app.add_subcommand("equiv", "Compare the two forms of the feasibility condition");
  e->add_option("--n", eq.n, "node count")->required();
  e->add_option("--f", eq.f, "fault bound")->check(CLI::NonNegativeNumber);
  e->add_flag("--exhaustive", eq.exhaustive, "all digraphs on n nodes (n <= 4)");
  e->add_flag("--random", eq.random, "seeded random digraphs");
  e->add_option("--trials", eq.trials, "random graphs to test");
  e->add_option("--seed", eq.seed, "seed");
  e->add_flag("--json", eq.json_out, "JSON output");

  std::string ex_graph;
  std::string ex_format = "json";
  std::string ex_out;
  auto* x = app.add_subcommand("export", "Convert a graph between JSON and DOT");
  x->add_option("--graph", ex_graph, "graph file")->required();
  x->add_option("--format", ex_format, "dot | json")->check(CLI::IsMember({"dot", "json"}));
  x->add_option("--out", ex_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*c) return cmd_check(chk);
    if (*r) return cmd_run(run);
    if (*e) return cmd_equiv(eq);
    if (*x) return cmd_export(ex_graph, ex_format, ex_out);
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

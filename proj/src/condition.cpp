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

#include "dgbc/condition.hpp"

#include <atomic>
#include <bit>
#include <cstdlib>
#include <functional>
#include <thread>

#include "dgbc/generators.hpp"
#include "dgbc/graph_io.hpp"
#include "dgbc/relations.hpp"

namespace dgbc {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DGBC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::vector<NodeSet> fault_sets(NodeId n, int f) {
  std::vector<NodeSet> out;
  const int top = std::min<int>(f, static_cast<int>(n) - 1);
  for (int size = 0; size <= top; ++size) {
    // Lexicographic combinations of `size` indices out of n.
    std::vector<NodeId> idx(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = static_cast<NodeId>(i);
    while (true) {
      out.push_back(NodeSet::from(idx));
      int pos = size - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - static_cast<NodeId>(size - pos)) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int i = pos + 1; i < size; ++i) {
        idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
      }
    }
  }
  return out;
}

namespace {

struct FaultSetHit {
  PartitionWitness witness;
  std::uint64_t position = 0;  // 1-based rank of the witness within its fault set
};

/// Evaluates scan(i) for i in [0, count) on `threads` workers and returns
/// the hit with the smallest index. Workers skip indices past the best hit.
std::pair<std::size_t, std::optional<FaultSetHit>> first_hit(
    std::size_t count, unsigned threads, const std::function<std::optional<FaultSetHit>(std::size_t)>& scan) {
  std::vector<std::optional<FaultSetHit>> hits(count);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{count};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || i > best.load()) return;
      hits[i] = scan(i);
      if (hits[i]) {
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(count == 0 ? 1 : count)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  const std::size_t b = best.load();
  if (b == count) return {count, std::nullopt};
  return {b, hits[b]};
}

void check_scan_args(const DiGraph& g, int f) {
  if (g.size() < 2) throw GraphError("condition checks need n >= 2");
  if (f < 0) throw GraphError("fault bound must be non-negative");
}

std::uint64_t two_way_splits(NodeId m) { return m < 2 ? 0 : (std::uint64_t{1} << (m - 1)) - 1; }

}  // namespace

ConditionVerdict check_theorem1(const DiGraph& g, int f, ScanOptions opts) {
  check_scan_args(g, f);
  const auto sets = fault_sets(g.size(), f);
  auto scan = [&](std::size_t idx) -> std::optional<FaultSetHit> {
    const NodeSet faulty = sets[idx];
    const NodeSet rest = g.nodes() - faulty;
    const auto members = rest.to_vector();
    const auto m = static_cast<NodeId>(members.size());
    if (m < 2) return std::nullopt;
    const std::uint64_t count = two_way_splits(m);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      NodeSet x = NodeSet::single(members[0]);
      for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
        x.insert(members[static_cast<std::size_t>(std::countr_zero(bits)) + 1]);
      }
      const NodeSet y = rest - x;
      // Try the larger side as the source first; it is the likelier winner.
      const bool x_first = x.size() >= y.size();
      const NodeSet p = x_first ? x : y;
      const NodeSet q = x_first ? y : x;
      if (propagates_fast(g, p, q, faulty, f) || propagates_fast(g, q, p, faulty, f)) continue;
      return FaultSetHit{{x, y, {}, faulty}, mask + 1};
    }
    return std::nullopt;
  };
  auto [at, hit] = first_hit(sets.size(), resolve_threads(opts.threads), scan);

  ConditionVerdict v;
  v.form = ConditionForm::propagate;
  v.f = f;
  for (std::size_t i = 0; i < std::min(at, sets.size()); ++i) {
    v.partitions_examined += two_way_splits(static_cast<NodeId>((g.nodes() - sets[i]).size()));
  }
  if (hit) {
    v.satisfied = false;
    v.witness = hit->witness;
    v.fault_sets_examined = at + 1;
    v.partitions_examined += hit->position;
  } else {
    v.satisfied = true;
    v.fault_sets_examined = sets.size();
  }
  return v;
}

namespace {

/// Canonical (L,R) pairs for a fixed nonempty R: L nonempty inside
/// comp = rest - R with min(L u R) in L. Masks are relative to rest.
std::uint64_t canonical_left_count(std::uint64_t r, std::uint64_t comp) {
  const std::uint64_t below_r = comp & ((r & (~r + 1)) - 1);
  const int k = std::popcount(below_r);
  const int c = std::popcount(comp);
  return ((std::uint64_t{1} << k) - 1) << (c - k);
}

}  // namespace

ConditionVerdict check_condition1(const DiGraph& g, int f, ScanOptions opts) {
  check_scan_args(g, f);
  if (g.size() > 24) throw GraphError("absorb-form scan is limited to 24 nodes");
  const auto sets = fault_sets(g.size(), f);
  std::vector<std::uint64_t> per_set_total(sets.size(), 0);

  auto scan = [&](std::size_t idx) -> std::optional<FaultSetHit> {
    const NodeSet faulty = sets[idx];
    const NodeSet rest = g.nodes() - faulty;
    const auto members = rest.to_vector();
    const auto m = static_cast<std::size_t>(members.size());
    if (m < 2) return std::nullopt;
    // in_local[i]: in-neighbours of members[i] inside rest, as a rest-mask.
    std::vector<std::uint64_t> in_local(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (g.has_edge(members[j], members[i])) in_local[i] |= std::uint64_t{1} << j;
      }
    }
    const std::uint64_t full = (std::uint64_t{1} << m) - 1;
    std::vector<std::uint64_t> in_of(std::size_t{1} << m, 0);
    for (std::uint64_t s = 1; s <= full; ++s) {
      const auto low = static_cast<std::size_t>(std::countr_zero(s));
      in_of[s] = in_of[s & (s - 1)] | in_local[low];
    }
    auto absorbed = [&](std::uint64_t target) {  // rest - target -> target
      return std::popcount(in_of[target] & ~target) > f;
    };
    auto to_set = [&](std::uint64_t mask) {
      NodeSet s;
      for (std::uint64_t b = mask; b != 0; b &= b - 1) s.insert(members[static_cast<std::size_t>(std::countr_zero(b))]);
      return s;
    };
    std::uint64_t position = 0;
    for (std::uint64_t r = 1; r < full; ++r) {
      const std::uint64_t comp = full & ~r;
      if (absorbed(r)) {
        position += canonical_left_count(r, comp);
        continue;
      }
      const std::uint64_t r_low = r & (~r + 1);
      // Ascending nonempty submasks of comp.
      for (std::uint64_t l = (0 - comp) & comp; l != 0; l = (l - comp) & comp) {
        if ((l & (~l + 1)) > r_low) continue;  // not canonical
        ++position;
        if (!absorbed(l)) {
          return FaultSetHit{{to_set(l), to_set(r), to_set(comp & ~l), faulty}, position};
        }
      }
    }
    per_set_total[idx] = position;
    return std::nullopt;
  };
  auto [at, hit] = first_hit(sets.size(), resolve_threads(opts.threads), scan);

  ConditionVerdict v;
  v.form = ConditionForm::absorb;
  v.f = f;
  for (std::size_t i = 0; i < std::min(at, sets.size()); ++i) v.partitions_examined += per_set_total[i];
  if (hit) {
    v.witness = hit->witness;
    v.fault_sets_examined = at + 1;
    v.partitions_examined += hit->position;
  } else {
    v.satisfied = true;
    v.fault_sets_examined = sets.size();
  }
  return v;
}

DegreeCheck check_degree_bounds(const DiGraph& g, int f) {
  DegreeCheck d;
  if (static_cast<long>(g.size()) < 3L * f + 1) {
    d.pass = false;
    d.too_few_nodes = true;
    d.reason = "n = " + std::to_string(g.size()) + " < 3f+1 = " + std::to_string(3 * f + 1);
    return d;
  }
  if (f == 0) return d;
  for (NodeId i = 0; i < g.size(); ++i) {
    if (g.in(i).size() < 2 * f + 1) {
      d.pass = false;
      d.offending = i;
      d.reason = "node " + g.name(i) + " has " + std::to_string(g.in(i).size()) +
                 " incoming neighbours, fewer than 2f+1 = " + std::to_string(2 * f + 1);
      return d;
    }
  }
  return d;
}

PartitionWitness witness_from_degree_failure(const DiGraph& g, int f, const DegreeCheck& check) {
  if (check.pass) throw std::invalid_argument("degree screen passed; no witness to build");
  const auto all = g.nodes().to_vector();
  PartitionWitness w;
  if (check.too_few_nodes) {
    // n <= 3f: |A|, |B| <= f, remainder (at most f nodes) becomes F.
    const std::size_t n = all.size();
    const std::size_t a = std::min<std::size_t>(static_cast<std::size_t>(f), n - 1);
    const std::size_t b = std::min<std::size_t>(static_cast<std::size_t>(f), n - a);
    for (std::size_t i = 0; i < n; ++i) {
      if (i < a) {
        w.a.insert(all[i]);
      } else if (i < a + b) {
        w.b.insert(all[i]);
      } else {
        w.faulty.insert(all[i]);
      }
    }
    return w;
  }
  // Node i with at most 2f in-neighbours: F takes up to f of them, B is
  // the rest of V - {i} and holds at most f in-neighbours of i.
  const NodeId i = *check.offending;
  int taken = 0;
  for (NodeId j : g.in(i)) {
    if (taken == f) break;
    w.faulty.insert(j);
    ++taken;
  }
  w.a = NodeSet::single(i);
  w.b = g.nodes() - w.a - w.faulty;
  return w;
}

bool witness_holds(const DiGraph& g, int f, ConditionForm form, const PartitionWitness& w) {
  const NodeSet all = w.a | w.b | w.c | w.faulty;
  if (all != g.nodes()) return false;
  if (w.a.intersects(w.b) || w.a.intersects(w.c) || w.b.intersects(w.c)) return false;
  if ((w.a | w.b | w.c).intersects(w.faulty)) return false;
  if (w.a.empty() || w.b.empty() || w.faulty.size() > f) return false;
  if (form == ConditionForm::propagate) {
    if (!w.c.empty()) return false;
    return !propagates(g, w.a, w.b, w.faulty, f).verdict && !propagates(g, w.b, w.a, w.faulty, f).verdict;
  }
  return !arrow(g, w.a | w.c, w.b, f) && !arrow(g, w.b | w.c, w.a, f);
}

EquivalenceReport equivalence_fuzz(NodeId n, int f, FuzzMode mode, std::uint64_t trials, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("equivalence fuzz needs n >= 2");
  if (f < 0) throw std::invalid_argument("fault bound must be non-negative");
  EquivalenceReport rep;
  rep.n = n;
  rep.f = f;
  ScanOptions single{1};
  auto test_one = [&](const DiGraph& g) {
    const bool t1 = check_theorem1(g, f, single).satisfied;
    const bool c1 = check_condition1(g, f, single).satisfied;
    ++rep.graphs_tested;
    if (t1) ++rep.satisfied;
    if (t1 != c1) {
      ++rep.disagreements;
      if (!rep.first_disagreement) rep.first_disagreement = to_json(g);
    }
  };
  if (mode == FuzzMode::exhaustive) {
    if (n > 4) throw std::invalid_argument("exhaustive equivalence scan is limited to n <= 4");
    std::vector<Edge> pairs;
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) {
        if (i != j) pairs.emplace_back(i, j);
      }
    }
    const std::uint64_t total = std::uint64_t{1} << pairs.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      std::vector<Edge> edges;
      for (std::size_t e = 0; e < pairs.size(); ++e) {
        if ((mask >> e) & 1U) edges.push_back(pairs[e]);
      }
      test_one(DiGraph(n, edges));
    }
    return rep;
  }
  XorShift64Star rng(seed);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const double p = 0.4 + 0.6 * rng.uniform();
    test_one(random_digraph(n, p, rng.next()));
  }
  return rep;
}

}  // namespace dgbc

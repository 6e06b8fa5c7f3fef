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

#include "dgbc/generators.hpp"

namespace dgbc {

XorShift64Star::XorShift64Star(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  state_ = z == 0 ? 0x9E3779B97F4A7C15ULL : z;
}

std::uint64_t XorShift64Star::next() {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1DULL;
}

double XorShift64Star::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t XorShift64Star::below(std::uint64_t bound) { return next() % bound; }

DiGraph two_clique(int f) {
  if (f <= 0 || f % 2 != 0) throw GraphError("two-clique needs a positive even f");
  const NodeId half = static_cast<NodeId>(3 * f + 1);
  std::vector<std::string> names;
  for (NodeId i = 1; i <= half; ++i) names.push_back("u" + std::to_string(i));
  for (NodeId i = 1; i <= half; ++i) names.push_back("w" + std::to_string(i));
  auto u = [](NodeId i) { return i - 1; };
  auto w = [half](NodeId i) { return half + i - 1; };
  std::vector<Edge> edges;
  for (NodeId i = 1; i <= half; ++i) {
    for (NodeId j = 1; j <= half; ++j) {
      if (i == j) continue;
      edges.emplace_back(u(i), u(j));
      edges.emplace_back(w(i), w(j));
    }
  }
  const auto third = static_cast<NodeId>(3 * f / 2);
  for (NodeId i = 1; i <= third; ++i) edges.emplace_back(u(i), w(i));
  for (NodeId i = third + 1; i <= static_cast<NodeId>(3 * f); ++i) edges.emplace_back(w(i), u(i));
  edges.emplace_back(u(half), w(half));
  edges.emplace_back(w(half), u(half));
  return DiGraph(2 * half, edges, std::move(names));
}

DiGraph clique_sink(int k) {
  if (k < 2) throw GraphError("clique-sink needs k >= 2");
  const auto kk = static_cast<NodeId>(k);
  if (kk + 1 > kMaxNodes) throw GraphError("clique-sink too large");
  std::vector<std::string> names;
  for (NodeId i = 1; i <= kk; ++i) names.push_back("v" + std::to_string(i));
  names.push_back("x");
  std::vector<Edge> edges;
  for (NodeId i = 0; i < kk; ++i) {
    for (NodeId j = 0; j < kk; ++j) {
      if (i != j) edges.emplace_back(i, j);
    }
    edges.emplace_back(i, kk);
  }
  return DiGraph(kk + 1, edges, std::move(names));
}

DiGraph complete_digraph(NodeId n) {
  std::vector<std::string> names;
  for (NodeId i = 1; i <= n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i != j) edges.emplace_back(i, j);
    }
  }
  return DiGraph(n, edges, std::move(names));
}

DiGraph random_digraph(NodeId n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw GraphError("edge probability must lie in [0, 1]");
  XorShift64Star rng(seed);
  std::vector<std::string> names;
  for (NodeId i = 0; i < n; ++i) names.push_back("n" + std::to_string(i));
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  }
  return DiGraph(n, edges, std::move(names));
}

DiGraph generate(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::two_clique:
      return two_clique(spec.f);
    case Family::clique_sink:
      return clique_sink(spec.k);
    case Family::random:
      return random_digraph(spec.n, spec.p, spec.seed);
    case Family::complete:
      return complete_digraph(spec.n);
  }
  throw GraphError("unknown family");
}

Family parse_family(const std::string& tag) {
  if (tag == "two-clique") return Family::two_clique;
  if (tag == "clique-sink") return Family::clique_sink;
  if (tag == "random") return Family::random;
  if (tag == "complete") return Family::complete;
  throw GraphError("unknown family '" + tag + "'");
}

}  // namespace dgbc

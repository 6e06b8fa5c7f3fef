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
#include <string>

#include "dgbc/digraph.hpp"

namespace dgbc {

/// Portable seeded generator: splitmix64 seeding followed by xorshift64*.
/// Reimplementations in other languages reproduce the same stream.
class XorShift64Star {
 public:
  explicit XorShift64Star(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform in [0, 1) from the top 53 bits.
  double uniform();
  /// Uniform in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

enum class Family { two_clique, clique_sink, random, complete };

struct FamilySpec {
  Family family = Family::complete;
  int f = 0;
  int k = 0;
  NodeId n = 0;
  double p = 0.5;
  std::uint64_t seed = 0;
};

/// 2-clique network on 6f+2 nodes u1..u_{3f+1}, w1..w_{3f+1}; f must be
/// positive and even.
DiGraph two_clique(int f);

/// Complete digraph on v1..vk plus a sink x fed by every v_i; k >= 2.
DiGraph clique_sink(int k);

/// Complete digraph on v1..vn.
DiGraph complete_digraph(NodeId n);

/// Includes each ordered pair (i,j), i != j, in ascending (i,j) order when
/// uniform() < p. Names are n0..n{n-1}.
DiGraph random_digraph(NodeId n, double p, std::uint64_t seed);

DiGraph generate(const FamilySpec& spec);
Family parse_family(const std::string& tag);

}  // namespace dgbc

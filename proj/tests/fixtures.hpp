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

#include <string>
#include <vector>

#include "dgbc/generators.hpp"

namespace fixtures {

/// Four-clique v1..v4 feeding a sink x.
inline dgbc::DiGraph sink4() { return dgbc::clique_sink(4); }

/// u1..u7 are indices 0..6, w1..w7 are 7..13.
inline dgbc::DiGraph two_clique_2() { return dgbc::two_clique(2); }

/// a -> b -> c -> a.
inline dgbc::DiGraph c3() { return dgbc::DiGraph(3, {{0, 1}, {1, 2}, {2, 0}}, {"a", "b", "c"}); }

inline dgbc::DiGraph k4() { return dgbc::complete_digraph(4); }

inline dgbc::NodeSet names(const dgbc::DiGraph& g, const std::vector<std::string>& list) { return g.set_of(list); }

inline std::vector<bool> bits(std::initializer_list<int> v) {
  std::vector<bool> out;
  for (int b : v) out.push_back(b != 0);
  return out;
}

}  // namespace fixtures

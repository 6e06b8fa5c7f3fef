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

#include <filesystem>
#include <string>

#include "dgbc/digraph.hpp"

namespace dgbc {

/// Graph JSON: {"nodes": [name, ...], "edges": [[tail, head], ...]} with
/// edges sorted by (tail, head) index. Output is canonical, so
/// to_json(from_json(to_json(g))) == to_json(g) byte for byte.
std::string to_json(const DiGraph& g);
DiGraph graph_from_json(const std::string& text);

/// DOT rendering with every node declared, then edges in (tail, head) order.
std::string to_dot(const DiGraph& g);
/// Parses the DOT subset written by to_dot (quoted ids, node and edge
/// statements).
DiGraph graph_from_dot(const std::string& text);

/// Reads a graph file, choosing the format by extension (.dot/.gv or JSON).
DiGraph load_graph(const std::filesystem::path& path);
void save_text(const std::filesystem::path& path, const std::string& text);

}  // namespace dgbc

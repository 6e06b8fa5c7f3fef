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

#include "dgbc/graph_io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace dgbc {

using nlohmann::json;

std::string to_json(const DiGraph& g) {
  json doc;
  doc["nodes"] = g.names();
  json edges = json::array();
  for (auto [i, j] : g.edges()) edges.push_back({g.name(i), g.name(j)});
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

DiGraph graph_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GraphError(std::string("graph JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw GraphError("graph JSON: missing \"nodes\" array");
  }
  std::vector<std::string> names;
  for (const auto& v : doc["nodes"]) {
    if (!v.is_string()) throw GraphError("graph JSON: node names must be strings");
    names.push_back(v.get<std::string>());
  }
  std::map<std::string, NodeId> index;
  for (NodeId i = 0; i < names.size(); ++i) index.emplace(names[i], i);
  std::vector<Edge> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw GraphError("graph JSON: \"edges\" must be an array");
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        throw GraphError("graph JSON: each edge must be a [tail, head] name pair");
      }
      auto t = index.find(e[0].get<std::string>());
      auto h = index.find(e[1].get<std::string>());
      if (t == index.end() || h == index.end()) throw GraphError("graph JSON: edge names an unknown node");
      edges.emplace_back(t->second, h->second);
    }
  }
  const auto n = static_cast<NodeId>(names.size());
  return DiGraph(n, edges, std::move(names));
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

class DotLexer {
 public:
  explicit DotLexer(const std::string& text) : text_(text) {}

  // Returns the next token: a quoted id (unescaped), a bare word, or one of
  // "{", "}", ";", "->". Empty string at end of input.
  std::string next() {
    skip_space();
    if (pos_ >= text_.size()) return {};
    const char c = text_[pos_];
    if (c == '{' || c == '}' || c == ';') {
      ++pos_;
      return std::string(1, c);
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      pos_ += 2;
      return "->";
    }
    if (c == '"') {
      ++pos_;
      std::string out;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
        out += text_[pos_++];
      }
      if (pos_ >= text_.size()) throw GraphError("DOT: unterminated string");
      ++pos_;
      last_quoted_ = true;
      return out;
    }
    std::string out;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      out += text_[pos_++];
    }
    if (out.empty()) throw GraphError(std::string("DOT: unexpected character '") + c + "'");
    last_quoted_ = false;
    return out;
  }

  bool last_quoted() const { return last_quoted_; }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  bool last_quoted_ = false;
};

}  // namespace

std::string to_dot(const DiGraph& g) {
  std::ostringstream os;
  os << "digraph G {\n";
  for (const auto& nm : g.names()) os << "  " << quote(nm) << ";\n";
  for (auto [i, j] : g.edges()) os << "  " << quote(g.name(i)) << " -> " << quote(g.name(j)) << ";\n";
  os << "}\n";
  return os.str();
}

DiGraph graph_from_dot(const std::string& text) {
  DotLexer lex(text);
  if (lex.next() != "digraph") throw GraphError("DOT: expected 'digraph'");
  std::string tok = lex.next();
  if (tok != "{") tok = lex.next();
  if (tok != "{") throw GraphError("DOT: expected '{'");
  std::vector<std::string> names;
  std::map<std::string, NodeId> index;
  std::vector<std::pair<std::string, std::string>> raw_edges;
  auto declare = [&](const std::string& nm) {
    if (index.emplace(nm, static_cast<NodeId>(names.size())).second) names.push_back(nm);
  };
  while (true) {
    tok = lex.next();
    if (tok.empty()) throw GraphError("DOT: missing '}'");
    if (tok == "}") break;
    if (tok == ";") continue;
    const std::string first = tok;
    tok = lex.next();
    if (tok == "->") {
      const std::string second = lex.next();
      if (second.empty() || second == ";" || second == "}") throw GraphError("DOT: dangling edge");
      declare(first);
      declare(second);
      raw_edges.emplace_back(first, second);
      tok = lex.next();
    } else {
      declare(first);
    }
    if (tok == "}") break;
    if (tok != ";") throw GraphError("DOT: expected ';'");
  }
  std::vector<Edge> edges;
  for (const auto& [a, b] : raw_edges) edges.emplace_back(index.at(a), index.at(b));
  const auto n = static_cast<NodeId>(names.size());
  return DiGraph(n, edges, std::move(names));
}

DiGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto ext = path.extension().string();
  if (ext == ".dot" || ext == ".gv") return graph_from_dot(buf.str());
  return graph_from_json(buf.str());
}

void save_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace dgbc

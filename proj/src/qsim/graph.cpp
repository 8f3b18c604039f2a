// Copyright 2026 The ttscape Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "ttscape/error.h"
#include "ttscape/qsim.h"

namespace ttscape::qsim {

Graph::Graph(std::size_t n_vertices, std::vector<Edge> edges)
    : n_(n_vertices), edges_(std::move(edges)) {
  if (n_ < 1 || n_ > kMaxQubits) {
    throw InputError(fmt::format("graph must have 1..{} vertices, got {}", kMaxQubits, n_));
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (Edge& e : edges_) {
    if (e.u >= n_ || e.v >= n_) {
      throw InputError(fmt::format("edge ({}, {}) references a vertex >= {}", e.u, e.v, n_));
    }
    if (e.u == e.v) throw InputError(fmt::format("self-loop on vertex {}", e.u));
    if (!std::isfinite(e.weight)) throw InputError("edge weight must be finite");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!seen.emplace(e.u, e.v).second) {
      throw InputError(fmt::format("duplicate edge ({}, {})", e.u, e.v));
    }
  }
}

Graph Graph::complete(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  }
  return Graph(n, std::move(edges));
}

Graph parse_edge_list(std::istream& in, std::size_t n_vertices) {
  std::vector<Edge> edges;
  std::size_t max_vertex = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long u = 0;
    long long v = 0;
    if (!(fields >> u)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw InputError(fmt::format("edge list line {}: expected 'u v [w]'", line_no));
    }
    if (!(fields >> v) || u < 0 || v < 0) {
      throw InputError(fmt::format("edge list line {}: expected 'u v [w]'", line_no));
    }
    double w = 1.0;
    if (!(fields >> w)) {
      if (!fields.eof()) {
        throw InputError(fmt::format("edge list line {}: bad weight", line_no));
      }
      w = 1.0;
    }
    std::string extra;
    if (fields >> extra) {
      throw InputError(fmt::format("edge list line {}: trailing text '{}'", line_no, extra));
    }
    edges.push_back({static_cast<std::size_t>(u), static_cast<std::size_t>(v), w});
    max_vertex = std::max({max_vertex, static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
  }
  if (edges.empty() && n_vertices == 0) throw InputError("edge list is empty");
  return Graph(n_vertices != 0 ? n_vertices : max_vertex + 1, std::move(edges));
}

Graph load_edge_list(const std::filesystem::path& path, std::size_t n_vertices) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open graph file {}", path.string()));
  return parse_edge_list(in, n_vertices);
}

}  // namespace ttscape::qsim

// Copyright 2026 The stabkv Authors
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

#include "stabkv/graph/generators.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <set>

namespace stabkv::graph {

namespace {

using Edge = std::pair<NodeId, NodeId>;

Edge ordered(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// One pairing attempt. Stubs that would form a loop or a multi-edge are
// re-paired among themselves; the attempt fails once no leftover pair can
// still be joined.
bool try_pairing(std::size_t n, std::size_t d, std::mt19937_64& rng, std::set<Edge>& edges) {
  edges.clear();
  std::vector<NodeId> stubs;
  stubs.reserve(n * d);
  for (std::size_t r = 0; r < d; ++r)
    for (NodeId j = 0; j < n; ++j) stubs.push_back(j);

  while (!stubs.empty()) {
    std::map<NodeId, std::size_t> leftover;
    std::shuffle(stubs.begin(), stubs.end(), rng);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const NodeId a = stubs[i];
      const NodeId b = stubs[i + 1];
      if (a != b && !edges.contains(ordered(a, b))) {
        edges.insert(ordered(a, b));
      } else {
        ++leftover[a];
        ++leftover[b];
      }
    }
    if (leftover.empty()) return true;
    bool joinable = false;
    for (auto it = leftover.begin(); it != leftover.end() && !joinable; ++it)
      for (auto jt = std::next(it); jt != leftover.end(); ++jt)
        if (!edges.contains(ordered(it->first, jt->first))) {
          joinable = true;
          break;
        }
    if (!joinable) return false;
    stubs.clear();
    for (auto [node, count] : leftover)
      for (std::size_t c = 0; c < count; ++c) stubs.push_back(node);
  }
  return true;
}

}  // namespace

Graph generate_random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  if ((n * d) % 2 != 0) throw GraphError("random regular graph needs n*d even");
  if (d >= n) throw GraphError("random regular graph needs d < n");
  std::mt19937_64 rng(seed);
  std::set<Edge> edges;
  while (!try_pairing(n, d, rng, edges)) {
  }
  return Graph::from_edges(n, {edges.begin(), edges.end()});
}

Graph generate_social(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m >= n) throw GraphError("preferential attachment needs 1 <= m < n");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  // Each node appears once per incident edge, so a uniform pick from this
  // list is a degree-proportional pick.
  std::vector<NodeId> weighted;
  for (NodeId a = 0; a < m; ++a)
    for (NodeId b = a + 1; b < m; ++b) {
      edges.emplace_back(a, b);
      weighted.push_back(a);
      weighted.push_back(b);
    }

  for (NodeId v = static_cast<NodeId>(m); v < n; ++v) {
    std::set<NodeId> targets;
    if (v == m) {
      for (NodeId u = 0; u < m; ++u) targets.insert(u);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, weighted.size() - 1);
      while (targets.size() < m) targets.insert(weighted[pick(rng)]);
    }
    for (NodeId u : targets) {
      edges.emplace_back(u, v);
      weighted.push_back(u);
      weighted.push_back(v);
    }
  }
  return Graph::from_edges(n, edges);
}

Graph generate_planar_grid(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw GraphError("grid dimensions must be positive");
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * cols + c); };
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
      if (r + 1 < rows && c + 1 < cols) edges.emplace_back(id(r, c), id(r + 1, c + 1));
    }
  return Graph::from_edges(rows * cols, edges);
}

Graph generate_planar_triangulation(std::size_t n, std::uint64_t seed) {
  if (n < 3) throw GraphError("triangulation needs at least 3 nodes");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges{{0, 1}, {1, 2}, {0, 2}};
  // Both sides of the seed triangle are faces.
  std::vector<std::array<NodeId, 3>> faces{{0, 1, 2}, {0, 1, 2}};
  for (NodeId v = 3; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, faces.size() - 1);
    const std::size_t f = pick(rng);
    const auto [a, b, c] = faces[f];
    edges.emplace_back(a, v);
    edges.emplace_back(b, v);
    edges.emplace_back(c, v);
    faces[f] = {a, b, v};
    faces.push_back({b, c, v});
    faces.push_back({a, c, v});
  }
  return Graph::from_edges(n, edges);
}

}  // namespace stabkv::graph

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

#include "stabkv/graph/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace stabkv::graph {

Graph::Graph(std::vector<std::vector<NodeId>> adjacency) : adj_(std::move(adjacency)) {
  const auto n = adj_.size();
  std::size_t endpoints = 0;
  for (NodeId j = 0; j < n; ++j) {
    auto& list = adj_[j];
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end())
      throw GraphError("duplicate neighbor at node " + std::to_string(j));
    for (NodeId k : list) {
      if (k >= n) throw GraphError("neighbor id out of range at node " + std::to_string(j));
      if (k == j) throw GraphError("self-loop at node " + std::to_string(j));
    }
    endpoints += list.size();
    max_degree_ = std::max(max_degree_, list.size());
  }
  for (NodeId j = 0; j < n; ++j) {
    for (NodeId k : adj_[j]) {
      if (!std::binary_search(adj_[k].begin(), adj_[k].end(), j))
        throw GraphError("asymmetric edge " + std::to_string(j) + "->" + std::to_string(k));
    }
  }
  edges_ = endpoints / 2;
}

Graph Graph::from_edges(std::size_t node_count,
                        const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<std::vector<NodeId>> adj(node_count);
  for (auto [u, v] : edges) {
    if (u >= node_count || v >= node_count) throw GraphError("edge endpoint out of range");
    if (u == v) throw GraphError("self-loop at node " + std::to_string(u));
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return Graph(std::move(adj));
}

bool Graph::adjacent(NodeId a, NodeId b) const {
  const auto& list = adj_.at(a);
  return std::binary_search(list.begin(), list.end(), b);
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edges_);
  for (NodeId j = 0; j < adj_.size(); ++j)
    for (NodeId k : adj_[j])
      if (j < k) out.emplace_back(j, k);
  return out;
}

namespace {

bool parse_id(std::string_view tok, std::uint64_t& out) {
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

Graph load_graph(std::istream& in) {
  std::unordered_map<std::uint64_t, NodeId> ids;
  std::vector<std::pair<NodeId, NodeId>> edges;
  auto intern = [&](std::uint64_t raw) {
    auto [it, inserted] = ids.try_emplace(raw, static_cast<NodeId>(ids.size()));
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    std::uint64_t u = 0, v = 0;
    if (!(fields >> b) || (fields >> extra) || !parse_id(a, u) || !parse_id(b, v))
      throw GraphError("malformed edge at line " + std::to_string(lineno) + ": '" + line + "'");
    if (u == v) throw GraphError("self-loop at line " + std::to_string(lineno));
    const NodeId cu = intern(u);
    const NodeId cv = intern(v);
    edges.emplace_back(cu, cv);
  }
  return Graph::from_edges(ids.size(), edges);
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file " + path);
  return load_graph(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  auto edges = g.edges();
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.second, a.first) < std::tie(b.second, b.first);
  });
  for (auto [u, v] : edges) out << u << ' ' << v << '\n';
}

}  // namespace stabkv::graph

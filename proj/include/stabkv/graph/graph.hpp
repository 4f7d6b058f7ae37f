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

#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stabkv::graph {

using NodeId = std::uint32_t;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable simple undirected graph on nodes 0..n-1. Adjacency lists are
/// sorted, symmetric, and free of self-loops and duplicates; the reflexive
/// (j, j) edge of the program model is implicit and never stored.
class Graph {
 public:
  Graph() = default;
  /// Validates symmetry and simplicity; sorts each list. Throws GraphError.
  explicit Graph(std::vector<std::vector<NodeId>> adjacency);

  /// Builds from an undirected edge list; duplicate edges collapse.
  static Graph from_edges(std::size_t node_count,
                          const std::vector<std::pair<NodeId, NodeId>>& edges);

  std::size_t node_count() const noexcept { return adj_.size(); }
  std::size_t edge_count() const noexcept { return edges_; }
  std::span<const NodeId> neighbors(NodeId j) const { return adj_.at(j); }
  std::size_t degree(NodeId j) const { return adj_.at(j).size(); }
  std::size_t max_degree() const noexcept { return max_degree_; }
  bool adjacent(NodeId a, NodeId b) const;

  std::vector<std::pair<NodeId, NodeId>> edges() const;

 private:
  std::vector<std::vector<NodeId>> adj_;
  std::size_t edges_ = 0;
  std::size_t max_degree_ = 0;
};

/// Parses "u v" lines ('#' starts a comment). Ids are compacted to 0..n-1 in
/// order of first appearance. Throws GraphError on malformed lines and
/// self-loops.
Graph load_graph(std::istream& in);
Graph load_graph_file(const std::string& path);

/// Writes "u v" lines with u < v, ordered by the larger endpoint. Reloading
/// keeps ids unchanged whenever every node but 0 has a lower-id neighbor.
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace stabkv::graph

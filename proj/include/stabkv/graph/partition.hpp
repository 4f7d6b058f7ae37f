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
#include <string>
#include <vector>

#include "stabkv/graph/graph.hpp"

namespace stabkv::graph {

using ClientId = std::uint32_t;

/// Total assignment of nodes to clients 0..k-1.
class Partition {
 public:
  Partition() = default;
  /// Throws GraphError unless every client id in 0..k-1 is used and ids are
  /// in range.
  Partition(std::vector<ClientId> assignment, std::size_t clients);

  std::size_t clients() const noexcept { return clients_; }
  std::size_t node_count() const noexcept { return assignment_.size(); }
  ClientId owner(NodeId j) const { return assignment_.at(j); }
  const std::vector<NodeId>& nodes_of(ClientId c) const { return members_.at(c); }
  const std::vector<ClientId>& assignment() const noexcept { return assignment_; }

 private:
  std::vector<ClientId> assignment_;
  std::vector<std::vector<NodeId>> members_;
  std::size_t clients_ = 0;
};

/// Client i gets the i-th consecutive block; earlier blocks absorb the
/// remainder so sizes differ by at most one.
Partition partition_sequential(const Graph& g, std::size_t k);

/// Uniform random permutation cut into sequential blocks.
Partition partition_random(const Graph& g, std::size_t k, std::uint64_t seed);

/// Reads "node client" lines. Client labels are remapped to 0..k-1 in
/// ascending label order. Every node of the graph must appear exactly once.
Partition load_partition(std::istream& in, std::size_t node_count);
Partition load_partition_file(const std::string& path, std::size_t node_count);

struct ClientPartitionStats {
  ClientId client = 0;
  std::size_t max_degree = 0;
  std::size_t min_degree = 0;
  std::size_t total_degree = 0;
  std::size_t node_count = 0;
  double avg_degree = 0.0;
  /// Incident edges whose other endpoint belongs to another client.
  std::size_t external_edges = 0;
  /// Incident edges whose other endpoint belongs to this client, counted
  /// once per endpoint, so internal + external == total_degree.
  std::size_t internal_edges = 0;
};

struct PartitionStats {
  std::vector<ClientPartitionStats> per_client;
};

PartitionStats partition_stats(const Graph& g, const Partition& p);

}  // namespace stabkv::graph

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

#include "stabkv/graph/partition.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

namespace stabkv::graph {

Partition::Partition(std::vector<ClientId> assignment, std::size_t clients)
    : assignment_(std::move(assignment)), members_(clients), clients_(clients) {
  for (NodeId j = 0; j < assignment_.size(); ++j) {
    const ClientId c = assignment_[j];
    if (c >= clients_) throw GraphError("client id out of range for node " + std::to_string(j));
    members_[c].push_back(j);
  }
  for (ClientId c = 0; c < clients_; ++c)
    if (members_[c].empty()) throw GraphError("client " + std::to_string(c) + " has no nodes");
}

namespace {

void check_k(const Graph& g, std::size_t k) {
  if (k < 1 || k > g.node_count())
    throw GraphError("client count must be in 1..n (got " + std::to_string(k) + ")");
}

std::vector<ClientId> blocks(std::size_t n, std::size_t k) {
  std::vector<ClientId> block_of(n);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (ClientId c = 0; c < k; ++c) {
    const std::size_t size = base + (c < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) block_of[pos++] = c;
  }
  return block_of;
}

}  // namespace

Partition partition_sequential(const Graph& g, std::size_t k) {
  check_k(g, k);
  return Partition(blocks(g.node_count(), k), k);
}

Partition partition_random(const Graph& g, std::size_t k, std::uint64_t seed) {
  check_k(g, k);
  const auto n = g.node_count();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto block_of = blocks(n, k);
  std::vector<ClientId> assignment(n);
  for (std::size_t pos = 0; pos < n; ++pos) assignment[order[pos]] = block_of[pos];
  return Partition(std::move(assignment), k);
}

Partition load_partition(std::istream& in, std::size_t node_count) {
  std::vector<std::optional<std::int64_t>> label(node_count);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    std::uint64_t node = 0;
    std::int64_t client = 0;
    const bool ok_node = std::from_chars(a.data(), a.data() + a.size(), node).ptr == a.data() + a.size();
    const bool ok_client =
        (fields >> b) && std::from_chars(b.data(), b.data() + b.size(), client).ptr == b.data() + b.size();
    if (!ok_node || !ok_client || (fields >> extra))
      throw GraphError("malformed partition line " + std::to_string(lineno) + ": '" + line + "'");
    if (node >= node_count) throw GraphError("partition names unknown node " + std::to_string(node));
    if (label[node]) throw GraphError("node " + std::to_string(node) + " assigned twice");
    label[node] = client;
  }
  std::map<std::int64_t, ClientId> remap;
  for (NodeId j = 0; j < node_count; ++j) {
    if (!label[j]) throw GraphError("partition is missing node " + std::to_string(j));
    remap.emplace(*label[j], 0);
  }
  ClientId next = 0;
  for (auto& [raw, id] : remap) id = next++;
  std::vector<ClientId> assignment(node_count);
  for (NodeId j = 0; j < node_count; ++j) assignment[j] = remap.at(*label[j]);
  return Partition(std::move(assignment), remap.size());
}

Partition load_partition_file(const std::string& path, std::size_t node_count) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open partition file " + path);
  return load_partition(in, node_count);
}

PartitionStats partition_stats(const Graph& g, const Partition& p) {
  PartitionStats out;
  out.per_client.resize(p.clients());
  for (ClientId c = 0; c < p.clients(); ++c) {
    auto& s = out.per_client[c];
    s.client = c;
    const auto& nodes = p.nodes_of(c);
    s.node_count = nodes.size();
    s.min_degree = nodes.empty() ? 0 : g.degree(nodes.front());
    for (NodeId j : nodes) {
      const auto deg = g.degree(j);
      s.max_degree = std::max(s.max_degree, deg);
      s.min_degree = std::min(s.min_degree, deg);
      s.total_degree += deg;
      for (NodeId k : g.neighbors(j)) {
        if (p.owner(k) == c)
          ++s.internal_edges;
        else
          ++s.external_edges;
      }
    }
    s.avg_degree = s.node_count ? static_cast<double>(s.total_degree) / s.node_count : 0.0;
  }
  return out;
}

}  // namespace stabkv::graph

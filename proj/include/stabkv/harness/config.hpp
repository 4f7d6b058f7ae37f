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
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "stabkv/graph/graph.hpp"
#include "stabkv/graph/partition.hpp"
#include "stabkv/programs/programs.hpp"
#include "stabkv/runtime/mode.hpp"
#include "stabkv/store/store.hpp"

namespace stabkv::harness {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  /// Label used in outputs and as the suite variant tag.
  std::string name = "run";
  /// Edge-list file; takes precedence over `gen`.
  std::string graph;
  /// regular:n,d | social:n,m | grid:r,c | planar:n
  std::string gen = "social:500,3";
  /// Generator seed; the run seed when unset.
  std::optional<std::uint64_t> graph_seed;
  /// seq | random | file:PATH
  std::string partition = "seq";
  programs::Program program{programs::ProgramKind::Matching, false};
  runtime::ExecutionMode mode = runtime::ExecutionMode::SEQ;
  /// Replica quorum; the mode's default (R1W3 or R1W1) when unset.
  std::optional<store::StoreConfig> quorum;
  double store_timeout_ms = 500;
  std::size_t clients = 10;
  bool optimize = false;
  double lease_ms = 30000;
  double epsilon_ms = 0;
  double delay_ms = 20;
  double jitter_ms = 10;
  /// "client replica ms" overrides.
  std::string delay_file;
  double term_poll_ms = 200;
  double cap_s = 600;
  double bucket_s = 10;
  /// zero | random:SEED
  std::string init = "zero";
  bool wall_clock = false;
  /// Per-client clock offsets are drawn uniformly from [-skew, +skew].
  double clock_skew_ms = 0;
  std::uint64_t seed = 1;
  int reps = 1;
  std::string out;
  /// Optional NDJSON event-log path.
  std::string event_log;

  store::StoreConfig store_config() const;
  std::uint64_t effective_graph_seed() const { return graph_seed.value_or(seed); }
};

/// "N3R1W3".
store::StoreConfig parse_quorum(std::string_view s);
std::string quorum_string(const store::StoreConfig& cfg);

/// Throws ConfigError on contradictions such as SEQ over an eventual quorum.
void validate(const ExperimentConfig& cfg);

/// Unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
nlohmann::json config_to_json(const ExperimentConfig& cfg);

graph::Graph build_graph(const ExperimentConfig& cfg);
graph::Partition build_partition(const ExperimentConfig& cfg, const graph::Graph& g);
/// Short description of the graph source, e.g. "social:500,3".
std::string graph_label(const ExperimentConfig& cfg);

}  // namespace stabkv::harness

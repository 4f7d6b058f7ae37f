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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stabkv/harness/config.hpp"
#include "stabkv/monitor/monitor.hpp"
#include "stabkv/runtime/client.hpp"
#include "stabkv/runtime/cvf.hpp"
#include "stabkv/runtime/event_log.hpp"

namespace stabkv::harness {

struct ViolationRow {
  graph::NodeId j = 0, k = 0;
  store::ClientId first_client = 0, second_client = 0;
  std::uint64_t first_action = 0, second_action = 0;
  double detect_ms = 0;
  /// "confirmed", "false-positive" or "open".
  std::string status;
};

struct RunMetrics {
  ExperimentConfig config;
  /// Repetition index within a suite or --reps batch.
  int rep = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;

  bool terminated = false;
  /// Present iff terminated within the cap.
  std::optional<double> convergence_ms;
  double end_ms = 0;
  std::uint64_t rounds = 0;
  std::uint64_t restarts = 0;
  bool frozen_world_ok = false;
  bool legitimate = false;
  std::string legitimacy_note;

  runtime::ClientCounters totals;
  std::vector<runtime::ClientCounters> per_client;
  double lock_wait_ms = 0;
  /// Lock time over total client running time.
  double lock_share = 0;

  runtime::CvfStats cvf;

  std::size_t violations = 0;
  std::size_t confirmed = 0;
  std::size_t false_positives = 0;
  std::size_t notifications = 0;
  double detection_latency_ms = 0;
  std::vector<ViolationRow> violation_rows;

  std::uint64_t store_gets = 0;
  std::uint64_t store_puts = 0;
  std::uint64_t detector_gets = 0;
  std::uint64_t detector_puts = 0;
  std::uint64_t events = 0;

  double bucket_ms = 0;
  /// ops[client][bucket]; ops are guard evaluations.
  std::vector<std::vector<std::uint64_t>> throughput;
};

/// Raw run state for tests and offline analysis.
struct RunArtifacts {
  std::unique_ptr<graph::Graph> graph;
  runtime::EventLog log;
  std::vector<monitor::CriticalSectionInterval> intervals;
  std::vector<monitor::Violation> violations;
  std::vector<monitor::Notification> notifications;
  programs::GlobalState initial;
  programs::GlobalState final_state;
};

/// Throws ConfigError on invalid configs.
RunMetrics run_experiment(const ExperimentConfig& cfg, RunArtifacts* artifacts = nullptr);

/// ops per client per bucket of `bucket` over [0, end]; at least one bucket.
std::vector<std::vector<std::uint64_t>> bucket_throughput(
    const std::vector<std::vector<sim::TimePoint>>& times, sim::TimePoint end, sim::Duration bucket);

}  // namespace stabkv::harness

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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "stabkv/graph/graph.hpp"
#include "stabkv/programs/programs.hpp"
#include "stabkv/runtime/client.hpp"
#include "stabkv/store/store.hpp"

namespace stabkv::termination {

using graph::NodeId;

struct NodeSnapshot {
  std::string vars;
  /// Max wall_ts over the versions returned for the key.
  sim::TimePoint modified{};
};

struct TerminationOptions {
  sim::Duration poll = sim::from_ms(200);
  /// Program keys read concurrently per batch.
  std::size_t batch = 256;
};

struct TerminationReport {
  bool terminated = false;
  sim::TimePoint declared_at{};
  sim::Duration convergence{};
  std::uint64_t rounds = 0;
  std::uint64_t restarts = 0;
  std::uint64_t gets = 0;
  /// Every node disabled in the replicas' union at the declaration instant.
  bool frozen_world_ok = false;

  /// "convergence_time_ms,rounds_executed,restarts"
  std::string line() const;
};

/// Two-round fixpoint detector. Reads program keys with R = N and never
/// writes.
class TerminationDetector {
 public:
  TerminationDetector(store::Store& st, const graph::Graph& g, programs::Program prog, runtime::StopFlag& stop,
                      store::ClientId endpoint, TerminationOptions opts = {});

  /// Runs until termination is declared or the stop flag is set elsewhere.
  sim::Task<void> run(sim::TimePoint start);
  const TerminationReport& report() const noexcept { return report_; }

 private:
  /// Reads every program key. With `stop_if_enabled`, returns early once a
  /// fully read neighborhood is enabled. Empty on read failure or early exit.
  sim::Task<std::optional<std::vector<NodeSnapshot>>> snapshot(bool stop_if_enabled);
  bool frozen_world_disabled() const;

  store::Store* st_;
  const graph::Graph* g_;
  programs::Program prog_;
  runtime::StopFlag* stop_;
  store::ClientId endpoint_;
  TerminationOptions opts_;
  TerminationReport report_;
  NodeId hint_ = std::numeric_limits<NodeId>::max();
};

}  // namespace stabkv::termination

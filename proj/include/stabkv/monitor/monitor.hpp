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
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "stabkv/graph/graph.hpp"
#include "stabkv/graph/partition.hpp"
#include "stabkv/sim/scheduler.hpp"
#include "stabkv/store/vector_clock.hpp"

namespace stabkv::monitor {

using graph::ClientId;
using graph::NodeId;
using store::VectorClock;

struct CriticalSectionInterval {
  ClientId client = 0;
  NodeId node = 0;
  std::uint64_t action = 0;
  VectorClock entry_clock;
  /// Meaningful only when closed.
  VectorClock exit_clock;
  bool closed = false;
  sim::TimePoint entry_ts{};
  sim::TimePoint exit_ts{};
};

/// a happened strictly before b: a is closed and a.exit < b.entry. An open
/// interval never precedes anything.
bool precedes(const CriticalSectionInterval& a, const CriticalSectionInterval& b) noexcept;
bool concurrent(const CriticalSectionInterval& a, const CriticalSectionInterval& b) noexcept;

struct Violation {
  NodeId j = 0;
  NodeId k = 0;
  /// Indexes into Monitor::intervals(); `first` entered earlier.
  std::size_t first = 0;
  std::size_t second = 0;
  sim::TimePoint detect_ts{};
  /// Set once both intervals are closed: confirmed (still concurrent) or
  /// a false positive of the open-interval rule.
  std::optional<bool> confirmed;
};

class MonitorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Detects pairs of causally concurrent critical sections on adjacent nodes
/// owned by different clients.
class Monitor {
 public:
  Monitor(const graph::Graph& g, const graph::Partition& p);

  /// Registers an interval entry and returns the indexes of the violations
  /// it creates. A repeated (client, entry clock) is ignored.
  std::vector<std::size_t> report_entry(ClientId client, NodeId node, std::uint64_t action,
                                        const VectorClock& entry, sim::TimePoint ts);
  void report_exit(ClientId client, std::uint64_t action, const VectorClock& exit, sim::TimePoint ts);

  const std::vector<CriticalSectionInterval>& intervals() const noexcept { return intervals_; }
  const std::vector<Violation>& violations() const noexcept { return violations_; }
  std::size_t confirmed() const noexcept;
  std::size_t false_positives() const noexcept;
  std::uint64_t comparisons() const noexcept { return comparisons_; }

 private:
  void classify(std::size_t interval);

  const graph::Graph* g_;
  const graph::Partition* p_;
  std::vector<CriticalSectionInterval> intervals_;
  std::vector<Violation> violations_;
  std::vector<std::vector<std::size_t>> by_node_;
  // Per directed edge (j <- k), stored at adjacency position of k in adj(j):
  // prefix of k's intervals known to precede every later interval on j.
  std::vector<std::vector<std::size_t>> skip_;
  std::vector<std::optional<std::size_t>> open_of_client_;
  std::unordered_map<std::size_t, std::vector<std::size_t>> pending_;  // interval -> violations
  std::set<std::pair<ClientId, std::string>> seen_;
  std::uint64_t comparisons_ = 0;
};

/// Phase of a client's current action as seen by an abort notification.
enum class Phase { None, Read, Write };
const char* to_string(Phase p) noexcept;

class AbortTarget {
 public:
  virtual ~AbortTarget() = default;
  /// Raises the abort flag for `action` if it is the client's current action
  /// and returns the phase it was in.
  virtual Phase notify_abort(std::uint64_t action) = 0;
};

struct Notification {
  std::size_t violation = 0;
  ClientId client = 0;
  std::uint64_t action = 0;
  sim::TimePoint ts{};
  Phase phase = Phase::None;
};

/// Monitor behind a simulated channel: reports and notifications each take
/// a fixed delay. Per-sender order is preserved.
class MonitorService {
 public:
  MonitorService(sim::Scheduler& sched, const graph::Graph& g, const graph::Partition& p,
                 sim::Duration channel_delay = sim::from_ms(1),
                 sim::Duration notify_delay = sim::from_ms(1));

  void attach(ClientId client, AbortTarget* target);

  void submit_entry(ClientId client, NodeId node, std::uint64_t action, VectorClock entry);
  void submit_exit(ClientId client, std::uint64_t action, VectorClock exit);

  const Monitor& monitor() const noexcept { return monitor_; }
  const std::vector<Notification>& notifications() const noexcept { return notifications_; }
  /// Mean time from the later interval's entry to the last notification.
  double mean_detection_latency_ms() const noexcept;

 private:
  void notify(std::size_t violation);

  sim::Scheduler* sched_;
  Monitor monitor_;
  sim::Duration channel_delay_;
  sim::Duration notify_delay_;
  std::vector<AbortTarget*> targets_;
  std::vector<Notification> notifications_;
  double latency_sum_ms_ = 0;
  std::size_t latency_count_ = 0;
};

}  // namespace stabkv::monitor

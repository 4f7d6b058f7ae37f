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
#include <random>
#include <set>
#include <vector>

#include "stabkv/graph/partition.hpp"
#include "stabkv/monitor/monitor.hpp"
#include "stabkv/programs/programs.hpp"
#include "stabkv/runtime/event_log.hpp"
#include "stabkv/runtime/mode.hpp"
#include "stabkv/store/client.hpp"

namespace stabkv::runtime {

/// Set once by the termination detector or the harness cap; every client
/// checks it before each store operation and stops on the spot.
struct StopFlag {
  bool stopped = false;
  sim::TimePoint at{};
  void set(sim::TimePoint now) {
    if (!stopped) {
      stopped = true;
      at = now;
    }
  }
};

struct ClientOptions {
  ExecutionMode mode = ExecutionMode::SEQ;
  programs::Program program;
  bool optimize = false;
  sim::Duration lease = sim::from_ms(30000);
  sim::Duration epsilon = sim::Duration::zero();
  int lock_attempts = 50;
  sim::Duration backoff_min = sim::from_ms(1);
  sim::Duration backoff_max = sim::from_ms(16);
  /// Rollback restarts of one action before it is given up.
  int max_restarts = 8;
  sim::Duration clock_skew = sim::Duration::zero();
  std::uint64_t seed = 1;
};

struct ClientCounters {
  std::uint64_t evaluations = 0;
  std::uint64_t executed = 0;
  std::uint64_t disabled = 0;
  std::uint64_t skips = 0;
  std::uint64_t aborts = 0;
  std::uint64_t abandoned = 0;
  std::uint64_t lock_failures = 0;
  std::uint64_t store_failures = 0;
  std::uint64_t gets = 0;
  std::uint64_t puts = 0;
  /// GETs of neighbor program keys.
  std::uint64_t nbr_gets = 0;
  std::uint64_t lock_gets = 0;
  std::uint64_t lock_puts = 0;
  /// Lock reads that found a live claim by another client.
  std::uint64_t lock_busy = 0;
  /// Claims withdrawn after the confirming read saw a rival.
  std::uint64_t lock_retracts = 0;
  sim::Duration lock_time{};
  sim::Duration active_time{};
  /// Round-robin passes over the assigned nodes.
  std::uint64_t passes = 0;
};

/// Executes the actions of the nodes assigned to one client, round-robin,
/// until the stop flag is set.
class Client : public monitor::AbortTarget {
 public:
  Client(ClientId id, const graph::Graph& g, const graph::Partition& p, store::Store& st, EventLog& log,
         StopFlag& stop, ClientOptions opts, monitor::MonitorService* monitor = nullptr);

  ClientId id() const noexcept { return id_; }
  const ClientCounters& counters() const noexcept { return counters_; }
  /// Simulation times at which evaluations completed.
  const std::vector<sim::TimePoint>& evaluation_times() const noexcept { return eval_times_; }
  /// Order in which nodes were visited.
  const std::vector<NodeId>& visits() const noexcept { return visits_; }
  store::StoreClient& store_client() noexcept { return sc_; }
  /// Id of the action being executed; 0 between actions.
  std::uint64_t current_action() const noexcept { return current_action_; }
  monitor::Phase phase() const noexcept { return phase_; }

  sim::Task<void> run();
  sim::Task<Outcome> execute_action(NodeId j);
  /// Acquires the locks of `nodes` in the given (ascending) order; on
  /// failure releases what it holds.
  sim::Task<bool> acquire_locks(std::vector<NodeId> nodes);
  sim::Task<void> release_locks(std::vector<NodeId> nodes);

  monitor::Phase notify_abort(std::uint64_t action) override;

 private:
  enum class LockTry { Acquired, Busy, Failed };
  sim::Task<LockTry> try_lock(NodeId n);
  sim::Task<Outcome> attempt(NodeId j, std::uint64_t action);
  sim::Task<bool> skip_check(NodeId j);
  sim::Task<std::vector<store::GetResult>> read_neighborhood(NodeId j, std::uint64_t action);
  sim::Duration backoff(int attempt);
  void enter_cs(NodeId j, std::uint64_t action);
  void exit_cs(std::uint64_t action);
  bool live_claim_by_other(const std::vector<store::Version>& vs) const;

  ClientId id_;
  const graph::Graph* g_;
  const graph::Partition* p_;
  store::StoreClient sc_;
  EventLog* log_;
  StopFlag* stop_;
  ClientOptions opts_;
  monitor::MonitorService* monitor_;
  std::mt19937_64 rng_;
  ClientCounters counters_;
  std::vector<sim::TimePoint> eval_times_;
  std::vector<NodeId> visits_;

  std::uint64_t current_action_ = 0;
  monitor::Phase phase_ = monitor::Phase::None;
  bool cs_open_ = false;
  std::set<std::uint64_t> abort_flags_;
};

/// Runs every task of `tasks` concurrently and waits for all of them.
sim::Task<void> join_all(sim::Scheduler& sched, std::vector<sim::Task<void>> tasks);

}  // namespace stabkv::runtime

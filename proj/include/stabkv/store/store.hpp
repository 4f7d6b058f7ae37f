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
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "stabkv/sim/scheduler.hpp"
#include "stabkv/store/version.hpp"

namespace stabkv::store {

using ReplicaId = std::uint32_t;

struct StoreConfig {
  std::size_t n_replicas = 3;
  std::size_t read_quorum = 1;
  std::size_t write_quorum = 3;
  sim::Duration timeout = sim::from_ms(500);
};

enum class Consistency { Sequential, Eventual };

/// Sequential iff W + R > N and W > N/2.
Consistency classify_consistency(const StoreConfig& cfg) noexcept;
/// Throws std::invalid_argument unless 1 <= R, W <= N.
void validate(const StoreConfig& cfg);
const char* to_string(Consistency c) noexcept;

/// Per-link one-way latency: a base delay plus an exponential jitter draw.
/// Messages on one directed link never overtake each other.
struct LinkModel {
  sim::Duration base = sim::Duration::zero();
  sim::Duration jitter_mean = sim::Duration::zero();
  std::uint64_t seed = 1;
};

struct GetResult {
  std::vector<Version> versions;
  bool ok = false;
  std::size_t replicas_heard = 0;
};

struct PutResult {
  bool ok = false;
  std::size_t acks = 0;
  Version version;
};

/// One storage node. Operations run atomically at message delivery.
class Replica {
 public:
  std::vector<Version> read(const Key& k) const;
  /// Stores `v` unless an equal-or-later version is already present.
  void write(const Key& k, const Version& v);
  const std::unordered_map<Key, std::vector<Version>, KeyHash>& data() const noexcept {
    return data_;
  }
  std::uint64_t reads() const noexcept { return reads_; }
  std::uint64_t writes() const noexcept { return writes_; }

 private:
  std::unordered_map<Key, std::vector<Version>, KeyHash> data_;
  mutable std::uint64_t reads_ = 0;
  std::uint64_t writes_ = 0;
};

/// Quorum-replicated store. Requests go to every replica; if the quorum is
/// not met within the timeout a second round goes to the replicas that have
/// not answered, and round-one stragglers still count.
class Store {
 public:
  Store(sim::Scheduler& sched, StoreConfig cfg, LinkModel links = {});

  const StoreConfig& config() const noexcept { return cfg_; }
  sim::Scheduler& scheduler() noexcept { return *sched_; }

  /// `quorum` overrides R for this read (the termination detector reads
  /// with R = N).
  sim::Task<GetResult> get(ClientId client, Key key, std::optional<std::size_t> quorum = {});

  /// New clock = context with `client` incremented, stamped `wall_ts`.
  sim::Task<PutResult> put(ClientId client, Key key, std::string value, VectorClock context,
                           VectorClock causal, sim::TimePoint wall_ts);

  /// Installs `v` on every replica immediately (initial state).
  void seed(const Key& key, const Version& v);

  /// Antichain union of all replicas' versions of `key`.
  std::vector<Version> union_versions(const Key& key) const;

  void set_link_delay(ClientId client, ReplicaId replica, sim::Duration each_way);
  /// Directed override; used by scripted schedules.
  void set_link_delay(ClientId client, ReplicaId replica, sim::Duration to_replica,
                      sim::Duration from_replica);
  /// Reads "client replica ms" lines.
  void load_link_delays(std::istream& in);

  const Replica& replica(ReplicaId r) const { return replicas_.at(r); }

  std::uint64_t get_count() const noexcept { return gets_; }
  std::uint64_t put_count() const noexcept { return puts_; }
  std::uint64_t failed_gets() const noexcept { return failed_gets_; }
  std::uint64_t failed_puts() const noexcept { return failed_puts_; }

 private:
  struct Link {
    std::optional<sim::Duration> override_delay;
    sim::TimePoint last_arrival{};
    std::optional<std::mt19937_64> rng;
  };

  /// Returns the delivery time of a message sent now on the directed link.
  sim::TimePoint schedule_on(ClientId client, ReplicaId replica, bool to_replica);
  Link& link(ClientId client, ReplicaId replica, bool to_replica);

  sim::Scheduler* sched_;
  StoreConfig cfg_;
  LinkModel model_;
  std::vector<Replica> replicas_;
  // Index: (client * N + replica) * 2 + direction.
  std::vector<Link> links_;
  std::uint64_t gets_ = 0;
  std::uint64_t puts_ = 0;
  std::uint64_t failed_gets_ = 0;
  std::uint64_t failed_puts_ = 0;
};

}  // namespace stabkv::store

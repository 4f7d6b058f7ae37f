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
#include <ostream>
#include <string>
#include <vector>

#include "stabkv/graph/graph.hpp"
#include "stabkv/sim/clock.hpp"
#include "stabkv/store/vector_clock.hpp"

namespace stabkv::runtime {

using store::ClientId;
using graph::NodeId;

enum class Outcome { Executed, Disabled, Skipped, Aborted, LockFailed, StoreFailed, Stopped };
const char* to_string(Outcome o) noexcept;
Outcome parse_outcome(std::string_view s);

/// Initial value of a program key.
struct SeedRecord {
  NodeId node = 0;
  std::string value;
};

/// GET of a program key issued by an action. `hash` fingerprints the
/// resolved value.
struct GetRecord {
  std::uint64_t action = 0;
  ClientId client = 0;
  NodeId node = 0;
  std::uint64_t start_tick = 0;
  std::uint64_t end_tick = 0;
  sim::TimePoint start_ts{};
  sim::TimePoint end_ts{};
  bool ok = false;
  std::uint64_t hash = 0;
};

struct PutRecord {
  std::uint64_t action = 0;
  ClientId client = 0;
  NodeId node = 0;
  std::uint64_t start_tick = 0;
  std::uint64_t end_tick = 0;
  sim::TimePoint start_ts{};
  sim::TimePoint end_ts{};
  bool ok = false;
  std::string value;
  store::VectorClock clock;
  sim::TimePoint wall_ts{};
};

struct ActionRecord {
  std::uint64_t action = 0;
  ClientId client = 0;
  NodeId node = 0;
  Outcome outcome = Outcome::Disabled;
  std::uint64_t start_tick = 0;
  /// Tick at which the write phase began; 0 when there was none.
  std::uint64_t write_tick = 0;
  std::uint64_t end_tick = 0;
  sim::TimePoint start_ts{};
  sim::TimePoint end_ts{};
};

/// Append-only record of program-key traffic and action outcomes. Ticks are
/// a global sequence number giving a total order consistent with
/// simulation time.
class EventLog {
 public:
  std::uint64_t tick() noexcept { return ++tick_; }
  std::uint64_t next_action() noexcept { return ++action_; }

  void seed(NodeId node, std::string value) { seeds_.push_back({node, std::move(value)}); }
  void add(GetRecord r) { gets_.push_back(std::move(r)); }
  void add(PutRecord r) { puts_.push_back(std::move(r)); }
  void add(ActionRecord r) { actions_.push_back(std::move(r)); }

  const std::vector<SeedRecord>& seeds() const noexcept { return seeds_; }
  const std::vector<GetRecord>& gets() const noexcept { return gets_; }
  const std::vector<PutRecord>& puts() const noexcept { return puts_; }
  const std::vector<ActionRecord>& actions() const noexcept { return actions_; }

  /// One JSON object per line, tagged by "t": seed, get, put, action.
  void write_ndjson(std::ostream& out) const;
  /// Throws std::runtime_error on malformed lines.
  static EventLog read_ndjson(std::istream& in);

 private:
  std::uint64_t tick_ = 0;
  std::uint64_t action_ = 0;
  std::vector<SeedRecord> seeds_;
  std::vector<GetRecord> gets_;
  std::vector<PutRecord> puts_;
  std::vector<ActionRecord> actions_;
};

}  // namespace stabkv::runtime

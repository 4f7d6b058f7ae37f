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

#include <string_view>

#include "stabkv/store/store.hpp"

namespace stabkv::runtime {

enum class ExecutionMode { SEQ, EVE_S, EVE_AS, ROLLBACK };

const char* to_string(ExecutionMode m) noexcept;
/// Accepts seq, eve-s, eve-as, rollback (case-insensitive).
ExecutionMode parse_mode(std::string_view name);

inline bool uses_locks(ExecutionMode m) noexcept { return m != ExecutionMode::EVE_AS; }
inline bool uses_monitor(ExecutionMode m) noexcept { return m == ExecutionMode::ROLLBACK; }
inline store::Consistency required_consistency(ExecutionMode m) noexcept {
  return m == ExecutionMode::SEQ ? store::Consistency::Sequential : store::Consistency::Eventual;
}

/// Lock record stored under Key::lock(j).
struct LockEntry {
  static constexpr store::ClientId kFree = 0xffffffffu;
  store::ClientId owner = kFree;
  sim::TimePoint lease_expiry{};

  bool free() const noexcept { return owner == kFree; }
  /// Held by someone and not yet expired at `now`.
  bool live(sim::TimePoint now) const noexcept { return !free() && lease_expiry > now; }
  friend bool operator==(const LockEntry&, const LockEntry&) = default;
};

std::string encode(const LockEntry& e);
LockEntry decode_lock(std::string_view bytes);

/// Skip-optimization records: Key::meta(j) and Key::nbr(j).
struct MetaVars {
  /// When j was last evaluated disabled.
  sim::TimePoint nd_change{};
  /// Duration of that evaluation.
  sim::Duration last_len{};
};

std::string encode(const MetaVars& m);
MetaVars decode_meta(std::string_view bytes);
std::string encode_time(sim::TimePoint t);
sim::TimePoint decode_time(std::string_view bytes);

/// nd_change > nbr_change + last_len + epsilon.
bool should_skip(sim::TimePoint nd_change, sim::TimePoint nbr_change, sim::Duration last_len,
                 sim::Duration epsilon) noexcept;

}  // namespace stabkv::runtime

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

#include <chrono>
#include <cmath>
#include <cstdint>

namespace stabkv::sim {

/// Simulated clock with microsecond resolution. Time zero is the start of
/// an experiment; nothing here is tied to the host clock.
struct SimClock {
  using rep = std::int64_t;
  using period = std::micro;
  using duration = std::chrono::duration<rep, period>;
  using time_point = std::chrono::time_point<SimClock>;
  static constexpr bool is_steady = true;
};

using Duration = SimClock::duration;
using TimePoint = SimClock::time_point;

inline Duration from_ms(double ms) {
  return Duration{static_cast<SimClock::rep>(std::llround(ms * 1000.0))};
}

inline double to_ms(Duration d) { return static_cast<double>(d.count()) / 1000.0; }
inline double to_ms(TimePoint t) { return to_ms(t.time_since_epoch()); }

inline TimePoint at_ms(double ms) { return TimePoint{from_ms(ms)}; }

}  // namespace stabkv::sim

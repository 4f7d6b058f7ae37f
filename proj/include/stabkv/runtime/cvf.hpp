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
#include <stdexcept>
#include <string>
#include <vector>

#include "stabkv/runtime/event_log.hpp"

namespace stabkv::runtime {

struct CvfCounts {
  /// Actions that completed a write.
  std::uint64_t executed = 0;
  /// Executed actions that read a value other than the abstract one.
  std::uint64_t cvf = 0;
  /// cvf actions with a read that matched no abstract value during the GET.
  std::uint64_t stale = 0;
  /// cvf actions whose neighborhood changed between read and write.
  std::uint64_t interleaved = 0;
  /// Disabled evaluations that saw such a read.
  std::uint64_t stutter = 0;
};

struct CvfStats {
  CvfCounts total;
  /// Indexed by client id.
  std::vector<CvfCounts> per_client;
  /// Aborted actions that still issued a program PUT. Always 0 unless the
  /// rollback path is broken.
  std::uint64_t abort_writes = 0;
  /// Write phases of adjacent nodes by different clients that overlap.
  std::uint64_t write_overlaps = 0;
};

class IncompleteLogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Replays the log. The abstract value of a key at tick t resolves the
/// seed and every successful PUT that completed before t. Throws
/// IncompleteLogError when records reference an action that is not logged.
CvfStats count_cvf_posthoc(const EventLog& log);

}  // namespace stabkv::runtime

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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stabkv::store {

using ClientId = std::uint32_t;

enum class Order { Before, After, Equal, Concurrent };

/// Map client -> counter, kept as a vector sorted by client id. Zero
/// counters are never stored, so equal clocks have equal representations.
class VectorClock {
 public:
  using Entry = std::pair<ClientId, std::uint64_t>;

  VectorClock() = default;
  VectorClock(std::initializer_list<Entry> entries);

  std::uint64_t get(ClientId c) const noexcept;
  void set(ClientId c, std::uint64_t value);
  void increment(ClientId c);
  /// Componentwise max.
  void merge(const VectorClock& other);

  Order compare(const VectorClock& other) const noexcept;
  /// Strictly earlier in the componentwise partial order.
  bool before(const VectorClock& other) const noexcept {
    return compare(other) == Order::Before;
  }
  /// -1, 0 or 1 comparing counters over the union of ids in ascending id
  /// order, absent entries reading as 0. A total order used for tie-breaks.
  static int lex_compare(const VectorClock& a, const VectorClock& b) noexcept;

  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::uint64_t sum() const noexcept;

  /// "{c:n,c:n}" with ascending ids.
  std::string to_string() const;
  /// Inverse of to_string. Throws std::invalid_argument on malformed text.
  static VectorClock parse(std::string_view text);

  friend bool operator==(const VectorClock&, const VectorClock&) = default;

 private:
  std::vector<Entry> entries_;
};

VectorClock merged(const VectorClock& a, const VectorClock& b);

}  // namespace stabkv::store

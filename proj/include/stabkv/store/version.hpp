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
#include <span>
#include <string>
#include <vector>

#include "stabkv/graph/graph.hpp"
#include "stabkv/sim/clock.hpp"
#include "stabkv/store/vector_clock.hpp"

namespace stabkv::store {

using graph::NodeId;

/// Every key belongs to one graph node. Program keys hold the node's
/// program variables; the others hold lock and skip-optimization records.
enum class KeyKind : std::uint8_t { Program = 0, Lock = 1, Meta = 2, Nbr = 3 };

struct Key {
  KeyKind kind = KeyKind::Program;
  NodeId node = 0;

  static Key program(NodeId j) { return {KeyKind::Program, j}; }
  static Key lock(NodeId j) { return {KeyKind::Lock, j}; }
  static Key meta(NodeId j) { return {KeyKind::Meta, j}; }
  static Key nbr(NodeId j) { return {KeyKind::Nbr, j}; }

  std::string to_string() const;
  friend bool operator==(const Key&, const Key&) = default;
  friend auto operator<=>(const Key&, const Key&) = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(k.node) << 8) |
                                      static_cast<std::uint64_t>(k.kind));
  }
};

struct Version {
  std::string value;
  VectorClock clock;
  sim::TimePoint wall_ts{};
  /// Writer's process clock at the time of the write; readers merge it so
  /// happened-before flows through the store.
  VectorClock causal;

  friend bool operator==(const Version&, const Version&) = default;
};

/// Keeps `set` an antichain: adds `v` unless an equal or later clock is
/// present and drops entries `v` dominates. Returns true if `v` was added.
bool insert_pruned(std::vector<Version>& set, const Version& v);

/// Deterministic choice of one version: max by (wall_ts, clock in
/// VectorClock::lex_compare order, value bytes). Throws on empty input.
const Version& resolve(std::span<const Version> versions);

/// FNV-1a, stable across platforms; used for value fingerprints in logs.
std::uint64_t value_hash(std::string_view bytes) noexcept;

}  // namespace stabkv::store

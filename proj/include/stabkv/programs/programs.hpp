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
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "stabkv/graph/graph.hpp"

namespace stabkv::programs {

using graph::Graph;
using graph::NodeId;

inline constexpr NodeId kNull = std::numeric_limits<NodeId>::max();

enum class ProgramKind { ArbitraryColoring, PlanarColoring, Matching };

struct Program {
  ProgramKind kind = ProgramKind::ArbitraryColoring;
  /// Arbitrary coloring only: pick uniformly among free colors.
  bool random_color = false;
};

const char* to_string(ProgramKind k) noexcept;
/// Accepts color-arbitrary, color-planar, matching.
ProgramKind parse_program(std::string_view name);

/// Program variables of one node. Each program uses a subset: coloring uses
/// color; planar uses x and color; matching uses p and m.
struct NodeVars {
  std::int64_t color = 0;
  std::uint64_t x = 0;
  NodeId p = kNull;
  bool m = false;

  friend bool operator==(const NodeVars&, const NodeVars&) = default;
};

std::string encode(const NodeVars& v);
/// Throws std::invalid_argument on malformed input.
NodeVars decode(std::string_view bytes);

/// Values of a node and its neighbors as read by one action.
struct Neighborhood {
  NodeId center = 0;
  NodeVars self;
  /// Sorted by node id; exactly adj(center).
  std::vector<std::pair<NodeId, NodeVars>> nbrs;
};

struct ActionResult {
  bool enabled = false;
  /// New value of the center's variables when enabled.
  std::optional<NodeVars> write;
  /// Index of the rule that fired, for diagnostics.
  int rule = -1;
};

ActionResult eval_arbitrary_coloring(const Neighborhood& s, bool random_variant, std::mt19937_64* rng);
ActionResult eval_planar_coloring(const Neighborhood& s);
ActionResult eval_matching(const Neighborhood& s);

/// Dispatches on the program. `rng` may be null unless the random color
/// variant is selected.
ActionResult evaluate(const Program& prog, const Neighborhood& s, std::mt19937_64* rng = nullptr);

using GlobalState = std::vector<NodeVars>;

Neighborhood neighborhood(const Graph& g, const GlobalState& state, NodeId j);
bool is_enabled(const Program& prog, const Graph& g, const GlobalState& state, NodeId j);

/// Structural legitimacy plus the absence of any enabled node. `why`, when
/// given, receives the first failing condition.
bool is_legitimate(const Graph& g, const GlobalState& state, const Program& prog,
                   std::string* why = nullptr);

GlobalState zero_state(const Graph& g);
/// Arbitrary (possibly illegitimate) state: colors outside the final range,
/// random ranks, random pointers into adj(j) or NULL, random married flags.
GlobalState random_state(const Graph& g, const Program& prog, std::uint64_t seed);

/// Step budget for the serialized oracle: 50 * n * max degree.
std::size_t serialized_budget(const Graph& g);

/// Round-robin serialized execution: visit nodes 0..n-1 repeatedly, firing
/// every enabled action, until a full pass fires none. Returns the number of
/// actions executed, or nullopt if the budget ran out.
std::optional<std::size_t> run_serialized(const Program& prog, const Graph& g, GlobalState& state,
                                          std::size_t budget, std::uint64_t seed = 1);

}  // namespace stabkv::programs

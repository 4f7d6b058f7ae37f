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
#include <string>
#include <vector>

#include "stabkv/graph/generators.hpp"
#include "stabkv/programs/programs.hpp"

namespace stabkv::testing {

struct StabilizationReport {
  std::size_t runs = 0;
  std::size_t converged = 0;
  std::size_t perturbed_runs = 0;
  std::size_t reconverged = 0;
  std::string first_failure;
};

/// Small graphs (at most 50 nodes) on which a program must stabilize.
inline std::vector<graph::Graph> stabilization_graphs(programs::ProgramKind kind) {
  using namespace graph;
  std::vector<Graph> gs;
  gs.push_back(generate_planar_grid(7, 7));
  gs.push_back(generate_planar_triangulation(50, 3));
  gs.push_back(generate_planar_grid(1, 12));
  if (kind != programs::ProgramKind::PlanarColoring) {
    gs.push_back(generate_random_regular(40, 4, 5));
    gs.push_back(generate_social(50, 3, 9));
  } else {
    gs.push_back(generate_social(50, 2, 9));
  }
  return gs;
}

/// Replaces the vars of up to `k` random nodes with arbitrary values.
inline void perturb(const graph::Graph& g, const programs::Program& prog, programs::GlobalState& state,
                    std::size_t k, std::mt19937_64& rng) {
  const auto noise = programs::random_state(g, prog, rng());
  std::uniform_int_distribution<graph::NodeId> pick(0, static_cast<graph::NodeId>(g.node_count() - 1));
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = pick(rng);
    state[j] = noise[j];
  }
}

/// Convergence of the serialized oracle from `per_graph` random initial
/// states on each small graph, then re-convergence after perturbing up to
/// five nodes of the reached legitimate state.
inline StabilizationReport check_stabilization(const programs::Program& prog, std::size_t per_graph,
                                               std::uint64_t seed) {
  StabilizationReport rep;
  std::mt19937_64 rng(seed);
  auto note = [&](const std::string& what) {
    if (rep.first_failure.empty()) rep.first_failure = what;
  };
  for (const auto& g : stabilization_graphs(prog.kind)) {
    const auto budget = programs::serialized_budget(g);
    for (std::size_t i = 0; i < per_graph; ++i) {
      auto state = programs::random_state(g, prog, rng());
      ++rep.runs;
      std::string why;
      if (!programs::run_serialized(prog, g, state, budget, rng())) {
        note("budget exhausted from a random state");
        continue;
      }
      if (!programs::is_legitimate(g, state, prog, &why)) {
        note("silent but not legitimate: " + why);
        continue;
      }
      ++rep.converged;
      const std::size_t k = 1 + rng() % 5;
      perturb(g, prog, state, k, rng);
      ++rep.perturbed_runs;
      if (programs::run_serialized(prog, g, state, budget, rng()) &&
          programs::is_legitimate(g, state, prog, &why))
        ++rep.reconverged;
      else
        note("no re-convergence after perturbation: " + why);
    }
  }
  return rep;
}

}  // namespace stabkv::testing

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

#include "stabkv/graph/graph.hpp"

namespace stabkv::graph {

/// Random d-regular graph via stub pairing. Requires n*d even and d < n.
Graph generate_random_regular(std::size_t n, std::size_t d, std::uint64_t seed);

/// Preferential attachment: starts from a clique on m nodes, then every new
/// node links to m distinct existing nodes chosen proportionally to degree.
/// Requires 1 <= m < n.
Graph generate_social(std::size_t n, std::size_t m, std::uint64_t seed);

/// rows x cols lattice with one diagonal per cell. Planar by construction.
Graph generate_planar_grid(std::size_t rows, std::size_t cols);

/// Stacked triangulation: starts from a triangle and repeatedly inserts a
/// node into a uniformly chosen face, linking it to the face's corners.
/// Maximal planar (|E| = 3n - 6 for n >= 3); early ids collect high degree.
Graph generate_planar_triangulation(std::size_t n, std::uint64_t seed);

}  // namespace stabkv::graph

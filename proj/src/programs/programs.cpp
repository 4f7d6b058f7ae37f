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


#include "stabkv/programs/programs.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace stabkv::programs {

const char* to_string(ProgramKind k) noexcept {
  switch (k) {
    case ProgramKind::ArbitraryColoring: return "color-arbitrary";
    case ProgramKind::PlanarColoring: return "color-planar";
    case ProgramKind::Matching: return "matching";
  }
  return "?";
}

ProgramKind parse_program(std::string_view name) {
  if (name == "color-arbitrary") return ProgramKind::ArbitraryColoring;
  if (name == "color-planar") return ProgramKind::PlanarColoring;
  if (name == "matching") return ProgramKind::Matching;
  throw std::invalid_argument("unknown program '" + std::string(name) + "'");
}

std::string encode(const NodeVars& v) {
  std::string out = std::to_string(v.color);
  out += ' ';
  out += std::to_string(v.x);
  out += ' ';
  out += v.p == kNull ? std::string("-") : std::to_string(v.p);
  out += v.m ? " 1" : " 0";
  return out;
}

NodeVars decode(std::string_view bytes) {
  auto fail = [&] { throw std::invalid_argument("malformed node vars '" + std::string(bytes) + "'"); };
  std::string_view fields[4];
  std::size_t count = 0;
  while (!bytes.empty() && count < 4) {
    const auto sp = bytes.find(' ');
    fields[count++] = bytes.substr(0, sp);
    bytes = sp == std::string_view::npos ? std::string_view{} : bytes.substr(sp + 1);
  }
  if (count != 4 || !bytes.empty()) fail();
  auto num = [&](std::string_view f, auto& out) {
    if (f.empty() || std::from_chars(f.data(), f.data() + f.size(), out).ptr != f.data() + f.size()) fail();
  };
  NodeVars v;
  num(fields[0], v.color);
  num(fields[1], v.x);
  if (fields[2] == "-")
    v.p = kNull;
  else
    num(fields[2], v.p);
  if (fields[3] == "1")
    v.m = true;
  else if (fields[3] != "0")
    fail();
  return v;
}

namespace {

bool color_used(const Neighborhood& s, std::int64_t c) {
  for (const auto& [k, v] : s.nbrs)
    if (v.color == c) return true;
  return false;
}

}  // namespace

ActionResult eval_arbitrary_coloring(const Neighborhood& s, bool random_variant, std::mt19937_64* rng) {
  bool conflict = false;
  for (const auto& [k, v] : s.nbrs)
    if (k > s.center && v.color == s.self.color) conflict = true;
  if (!conflict) return {};

  NodeVars next = s.self;
  const auto deg = static_cast<std::int64_t>(s.nbrs.size());
  if (random_variant) {
    if (!rng) throw std::invalid_argument("random coloring needs an rng");
    std::vector<std::int64_t> free;
    for (std::int64_t c = 0; c <= deg; ++c)
      if (!color_used(s, c)) free.push_back(c);
    std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
    next.color = free[pick(*rng)];
  } else {
    std::int64_t c = 0;
    while (color_used(s, c)) ++c;
    next.color = c;
  }
  return {true, next, 0};
}

namespace {

bool points_to(NodeId a, const NodeVars& va, NodeId b, const NodeVars& vb) {
  return va.x < vb.x || (va.x == vb.x && a < b);
}

}  // namespace

ActionResult eval_planar_coloring(const Neighborhood& s) {
  std::vector<std::int64_t> succ_colors;
  std::uint64_t max_x = s.self.x;
  for (const auto& [k, v] : s.nbrs) {
    max_x = std::max(max_x, v.x);
    if (points_to(s.center, s.self, k, v)) succ_colors.push_back(v.color);
  }
  if (succ_colors.size() > 5) {
    NodeVars next = s.self;
    next.x = max_x + 1;
    return {true, next, 1};
  }
  const bool in_range = s.self.color >= 0 && s.self.color <= 5;
  const bool clash = std::find(succ_colors.begin(), succ_colors.end(), s.self.color) != succ_colors.end();
  if (!in_range || clash) {
    NodeVars next = s.self;
    std::int64_t c = 0;
    while (std::find(succ_colors.begin(), succ_colors.end(), c) != succ_colors.end()) ++c;
    next.color = c;
    return {true, next, 2};
  }
  return {};
}

ActionResult eval_matching(const Neighborhood& s) {
  const NodeId j = s.center;
  const NodeVars& me = s.self;
  const NodeVars* partner = nullptr;
  for (const auto& [k, v] : s.nbrs)
    if (k == me.p) partner = &v;
  const bool married = partner && partner->p == j;

  if (me.m != married) {
    NodeVars next = me;
    next.m = married;
    return {true, next, 0};
  }
  if (me.p == kNull) {
    for (const auto& [u, v] : s.nbrs)
      if (v.p == j) {
        NodeVars next = me;
        next.p = u;
        return {true, next, 1};
      }
    NodeId best = kNull;
    for (const auto& [u, v] : s.nbrs)
      if (v.p == kNull && !v.m && u > j) best = u;
    if (best != kNull) {
      NodeVars next = me;
      next.p = best;
      return {true, next, 2};
    }
    return {};
  }
  // A pointer outside the neighborhood is treated like one that can never
  // be answered.
  if (!partner || (partner->p != j && (partner->m || me.p < j))) {
    NodeVars next = me;
    next.p = kNull;
    return {true, next, 3};
  }
  return {};
}

ActionResult evaluate(const Program& prog, const Neighborhood& s, std::mt19937_64* rng) {
  switch (prog.kind) {
    case ProgramKind::ArbitraryColoring: return eval_arbitrary_coloring(s, prog.random_color, rng);
    case ProgramKind::PlanarColoring: return eval_planar_coloring(s);
    case ProgramKind::Matching: return eval_matching(s);
  }
  return {};
}

Neighborhood neighborhood(const Graph& g, const GlobalState& state, NodeId j) {
  Neighborhood s;
  s.center = j;
  s.self = state.at(j);
  s.nbrs.reserve(g.degree(j));
  for (NodeId k : g.neighbors(j)) s.nbrs.emplace_back(k, state.at(k));
  return s;
}

bool is_enabled(const Program& prog, const Graph& g, const GlobalState& state, NodeId j) {
  // Guards never depend on the rng, so a deterministic evaluation suffices.
  Program det = prog;
  det.random_color = false;
  return evaluate(det, neighborhood(g, state, j)).enabled;
}

bool is_legitimate(const Graph& g, const GlobalState& state, const Program& prog, std::string* why) {
  auto fail = [&](std::string reason) {
    if (why) *why = std::move(reason);
    return false;
  };
  if (state.size() != g.node_count()) return fail("state size does not match the graph");
  const auto n = static_cast<NodeId>(g.node_count());

  switch (prog.kind) {
    case ProgramKind::ArbitraryColoring:
    case ProgramKind::PlanarColoring:
      for (auto [a, b] : g.edges())
        if (state[a].color == state[b].color)
          return fail("edge " + std::to_string(a) + "-" + std::to_string(b) + " shares color " +
                      std::to_string(state[a].color));
      if (prog.kind == ProgramKind::PlanarColoring) {
        for (NodeId j = 0; j < n; ++j) {
          if (state[j].color < 0 || state[j].color > 5)
            return fail("node " + std::to_string(j) + " color outside 0..5");
          std::size_t out = 0;
          for (NodeId k : g.neighbors(j))
            if (points_to(j, state[j], k, state[k])) ++out;
          if (out > 5) return fail("node " + std::to_string(j) + " out-degree above 5");
        }
      }
      break;
    case ProgramKind::Matching:
      for (NodeId j = 0; j < n; ++j) {
        const NodeVars& v = state[j];
        if (v.p != kNull) {
          if (!g.adjacent(j, v.p)) return fail("node " + std::to_string(j) + " points outside adj");
          if (state[v.p].p != j) return fail("pointer of node " + std::to_string(j) + " not returned");
        }
        const bool married = v.p != kNull && state[v.p].p == j;
        if (v.m != married) return fail("married flag of node " + std::to_string(j) + " inconsistent");
      }
      for (auto [a, b] : g.edges())
        if (state[a].p == kNull && state[b].p == kNull)
          return fail("edge " + std::to_string(a) + "-" + std::to_string(b) + " could be added");
      break;
  }
  for (NodeId j = 0; j < n; ++j)
    if (is_enabled(prog, g, state, j)) return fail("node " + std::to_string(j) + " is enabled");
  return true;
}

GlobalState zero_state(const Graph& g) { return GlobalState(g.node_count()); }

GlobalState random_state(const Graph& g, const Program& prog, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GlobalState s(g.node_count());
  for (NodeId j = 0; j < g.node_count(); ++j) {
    NodeVars& v = s[j];
    switch (prog.kind) {
      case ProgramKind::ArbitraryColoring: {
        std::uniform_int_distribution<std::int64_t> c(0, static_cast<std::int64_t>(g.degree(j)) + 2);
        v.color = c(rng);
        break;
      }
      case ProgramKind::PlanarColoring: {
        std::uniform_int_distribution<std::int64_t> c(0, 7);
        std::uniform_int_distribution<std::uint64_t> x(0, 8);
        v.color = c(rng);
        v.x = x(rng);
        break;
      }
      case ProgramKind::Matching: {
        const auto nb = g.neighbors(j);
        std::uniform_int_distribution<std::size_t> pick(0, nb.size());
        const std::size_t i = pick(rng);
        v.p = i == nb.size() ? kNull : nb[i];
        v.m = std::bernoulli_distribution(0.5)(rng);
        break;
      }
    }
  }
  return s;
}

std::size_t serialized_budget(const Graph& g) {
  return 50 * g.node_count() * std::max<std::size_t>(1, g.max_degree());
}

std::optional<std::size_t> run_serialized(const Program& prog, const Graph& g, GlobalState& state,
                                          std::size_t budget, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t steps = 0;
  for (;;) {
    bool fired = false;
    for (NodeId j = 0; j < g.node_count(); ++j) {
      const auto r = evaluate(prog, neighborhood(g, state, j), &rng);
      if (!r.enabled) continue;
      if (steps == budget) return std::nullopt;
      state[j] = *r.write;
      ++steps;
      fired = true;
    }
    if (!fired) return steps;
  }
}

}  // namespace stabkv::programs

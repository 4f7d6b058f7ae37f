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


#include <doctest.h>

#include <set>

#include "../support/stabilization.hpp"
#include "stabkv/graph/generators.hpp"
#include "stabkv/programs/programs.hpp"

using namespace stabkv;
using namespace stabkv::programs;
using graph::Graph;

namespace {

Graph path(std::size_t n) { return graph::generate_planar_grid(1, n); }

Graph star(std::size_t leaves) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId k = 1; k <= leaves; ++k) e.emplace_back(0, k);
  return Graph::from_edges(leaves + 1, e);
}

Graph triangle() { return Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}); }

NodeVars colored(std::int64_t c) {
  NodeVars v;
  v.color = c;
  return v;
}

NodeVars ptr(NodeId p, bool m = false) {
  NodeVars v;
  v.p = p;
  v.m = m;
  return v;
}

const Program kColor{ProgramKind::ArbitraryColoring, false};
const Program kRandomColor{ProgramKind::ArbitraryColoring, true};
const Program kPlanar{ProgramKind::PlanarColoring, false};
const Program kMatching{ProgramKind::Matching, false};

}  // namespace

TEST_CASE("node vars round-trip through their encoding") {
  NodeVars v;
  v.color = 4;
  v.x = 17;
  v.p = 3;
  v.m = true;
  CHECK(decode(encode(v)) == v);
  CHECK(decode(encode(NodeVars{})) == NodeVars{});
  CHECK(encode(NodeVars{}) == "0 0 - 0");
  CHECK_THROWS(decode("1 2 3"));
  CHECK_THROWS(decode("1 2 3 7"));
  CHECK_THROWS(decode("a 2 3 1"));
  CHECK_THROWS(decode("1 2 3 1 5"));
}

TEST_CASE("program names") {
  CHECK(parse_program("matching") == ProgramKind::Matching);
  CHECK(parse_program("color-planar") == ProgramKind::PlanarColoring);
  CHECK(std::string(to_string(ProgramKind::ArbitraryColoring)) == "color-arbitrary");
  CHECK_THROWS(parse_program("sort"));
}

TEST_CASE("arbitrary coloring: the higher id wins a conflict") {
  const Graph g = Graph::from_edges(6, {{2, 5}, {2, 3}});
  GlobalState s(6);
  s[2] = colored(0);
  s[5] = colored(0);
  s[3] = colored(2);
  const auto r = evaluate(kColor, neighborhood(g, s, 2));
  CHECK(r.enabled);
  REQUIRE(r.write);
  CHECK(r.write->color == 1);
  CHECK(!evaluate(kColor, neighborhood(g, s, 5)).enabled);
}

TEST_CASE("random coloring draws from the free colors in 0..deg") {
  const Graph g = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
  GlobalState s(4);
  s[1] = colored(0);
  s[2] = colored(2);
  s[3] = colored(3);
  std::mt19937_64 rng(3);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 200; ++i) {
    const auto r = evaluate(kRandomColor, neighborhood(g, s, 0), &rng);
    REQUIRE(r.enabled);
    seen.insert(r.write->color);
  }
  CHECK(seen == std::set<std::int64_t>{1});
  s[3] = colored(7);
  seen.clear();
  for (int i = 0; i < 200; ++i) seen.insert(evaluate(kRandomColor, neighborhood(g, s, 0), &rng).write->color);
  CHECK(seen == std::set<std::int64_t>{1, 3});
}

TEST_CASE("triangle coloring from all zero") {
  const Graph g = triangle();
  GlobalState s = zero_state(g);
  REQUIRE(run_serialized(kColor, g, s, serialized_budget(g)));
  CHECK(is_legitimate(g, s, kColor));
  std::set<std::int64_t> colors;
  for (const auto& v : s) colors.insert(v.color);
  CHECK(colors.size() == 3);
  CHECK(*colors.rbegin() <= 2);
}

TEST_CASE("planar coloring: degree repair precedes recoloring") {
  const Graph g = star(6);
  GlobalState s = zero_state(g);
  const auto r = evaluate(kPlanar, neighborhood(g, s, 0));
  CHECK(r.enabled);
  CHECK(r.rule == 1);
  CHECK(r.write->x == 1);
  s[0] = *r.write;
  for (NodeId k = 1; k <= 6; ++k) CHECK(s[k].x < s[0].x);
}

TEST_CASE("planar coloring: recolor avoids successor colors") {
  const Graph g = star(5);
  GlobalState s = zero_state(g);
  for (NodeId k = 1; k <= 5; ++k) s[k] = colored(k - 1);
  s[0] = colored(0);
  const auto r = evaluate(kPlanar, neighborhood(g, s, 0));
  CHECK(r.enabled);
  CHECK(r.rule == 2);
  CHECK(r.write->color == 5);
}

TEST_CASE("planar coloring: out-of-range colors are repaired") {
  const Graph g = path(2);
  GlobalState s = zero_state(g);
  s[1] = colored(9);
  const auto r = evaluate(kPlanar, neighborhood(g, s, 1));
  CHECK(r.enabled);
  CHECK(r.write->color == 0);
}

TEST_CASE("2x2 grid planar coloring from all zero") {
  const Graph g = graph::generate_planar_grid(2, 2);
  GlobalState s = zero_state(g);
  REQUIRE(run_serialized(kPlanar, g, s, serialized_budget(g)));
  std::string why;
  CHECK_MESSAGE(is_legitimate(g, s, kPlanar, &why), why);
  for (const auto& v : s) CHECK((v.color >= 0 && v.color <= 5));
}

TEST_CASE("matching: update marks a mutual pair as married") {
  const Graph g = path(2);
  GlobalState s{ptr(1), ptr(0)};
  const auto r = evaluate(kMatching, neighborhood(g, s, 0));
  CHECK(r.enabled);
  CHECK(r.rule == 0);
  CHECK(r.write->m);
}

TEST_CASE("matching: the abandon, seduce, marry cascade on a line") {
  const Graph g = path(4);
  GlobalState s(4);
  s[0] = ptr(1, true);
  s[1] = ptr(0, true);
  s[2] = ptr(1);
  auto r = evaluate(kMatching, neighborhood(g, s, 2));
  CHECK(r.rule == 3);
  s[2] = *r.write;
  CHECK(s[2].p == kNull);
  r = evaluate(kMatching, neighborhood(g, s, 2));
  CHECK(r.rule == 2);
  CHECK(r.write->p == 3);
  s[2] = *r.write;
  r = evaluate(kMatching, neighborhood(g, s, 3));
  CHECK(r.rule == 1);
  CHECK(r.write->p == 2);
  s[3] = *r.write;
  REQUIRE(run_serialized(kMatching, g, s, serialized_budget(g)));
  CHECK(is_legitimate(g, s, kMatching));
  CHECK(s[2].p == 3);
  CHECK(s[3].p == 2);
}

TEST_CASE("matching: a single edge ends married on both sides") {
  const Graph g = path(2);
  GlobalState s = zero_state(g);
  const auto steps = run_serialized(kMatching, g, s, serialized_budget(g));
  REQUIRE(steps);
  CHECK(*steps <= 4);
  CHECK(s[0].p == 1);
  CHECK(s[1].p == 0);
  CHECK(s[0].m);
  CHECK(s[1].m);
}

TEST_CASE("matching path of four from all NULL is maximal") {
  const Graph g = path(4);
  GlobalState s = zero_state(g);
  REQUIRE(run_serialized(kMatching, g, s, serialized_budget(g)));
  CHECK(is_legitimate(g, s, kMatching));
  const bool outer = s[0].p == 1 && s[2].p == 3;
  const bool inner = s[1].p == 2 && s[0].p == kNull && s[3].p == kNull;
  CHECK((outer || inner));
}

TEST_CASE("legitimacy oracle examples") {
  GlobalState tri{colored(0), colored(1), colored(2)};
  CHECK(is_legitimate(triangle(), tri, kColor));
  GlobalState clash{colored(0), colored(0), colored(2)};
  CHECK(!is_legitimate(triangle(), clash, kColor));

  GlobalState m{ptr(1, true), ptr(0, true), ptr(kNull)};
  CHECK(is_legitimate(path(3), m, kMatching));
  GlobalState flag{ptr(1, true), ptr(0, false), ptr(kNull)};
  CHECK(!is_legitimate(path(3), flag, kMatching));
  GlobalState free_edge{ptr(kNull), ptr(kNull), ptr(kNull)};
  CHECK(!is_legitimate(path(3), free_edge, kMatching));
}

TEST_CASE("disabled everywhere coincides with legitimacy") {
  for (const Program& prog : {kColor, kPlanar, kMatching}) {
    std::size_t legit = 0, checked = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const Graph g = seed % 2 ? graph::generate_planar_grid(4, 5) : graph::generate_planar_triangulation(20, seed);
      GlobalState s = random_state(g, prog, seed);
      std::mt19937_64 rng(seed);
      // Walk a trajectory, checking coherence at every state on it.
      for (int step = 0; step < 400; ++step) {
        bool any = false;
        for (NodeId j = 0; j < g.node_count(); ++j) any = any || is_enabled(prog, g, s, j);
        const bool ok = is_legitimate(g, s, prog);
        CHECK(ok == !any);
        ++checked;
        if (ok) {
          ++legit;
          break;
        }
        std::vector<NodeId> enabled;
        for (NodeId j = 0; j < g.node_count(); ++j)
          if (is_enabled(prog, g, s, j)) enabled.push_back(j);
        const NodeId j = enabled[rng() % enabled.size()];
        s[j] = *evaluate(prog, neighborhood(g, s, j), &rng).write;
      }
    }
    CHECK(legit > 0);
    CHECK(checked > legit);
  }
}

TEST_CASE("serialized convergence and recovery from perturbation") {
  for (const Program& prog : {kColor, kRandomColor, kPlanar, kMatching}) {
    const auto rep = testing::check_stabilization(prog, 25, 77);
    CHECK_MESSAGE(rep.converged == rep.runs, rep.first_failure);
    CHECK_MESSAGE(rep.reconverged == rep.perturbed_runs, rep.first_failure);
    CHECK(rep.runs >= 100);
  }
}

TEST_CASE("planar coloring uses at most six colors with bounded out-degree") {
  const Graph g = graph::generate_planar_triangulation(400, 8);
  GlobalState s = random_state(g, kPlanar, 4);
  REQUIRE(run_serialized(kPlanar, g, s, serialized_budget(g)));
  std::string why;
  CHECK_MESSAGE(is_legitimate(g, s, kPlanar, &why), why);
  std::set<std::int64_t> colors;
  for (const auto& v : s) colors.insert(v.color);
  CHECK(colors.size() <= 6);
}

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

#include <random>
#include <set>

#include "stabkv/graph/generators.hpp"
#include "stabkv/monitor/monitor.hpp"

using namespace stabkv;
using namespace stabkv::monitor;
using sim::at_ms;

namespace {

struct Iv {
  ClientId client;
  NodeId node;
  VectorClock entry, exit;
};

// Brute force: every pair of adjacent-node intervals by different clients,
// concurrent when neither exit happened before the other's entry.
std::set<std::pair<std::size_t, std::size_t>> brute_force(const graph::Graph& g, const std::vector<Iv>& ivs) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < ivs.size(); ++a)
    for (std::size_t b = a + 1; b < ivs.size(); ++b) {
      if (ivs[a].client == ivs[b].client || !g.adjacent(ivs[a].node, ivs[b].node)) continue;
      if (ivs[a].exit.before(ivs[b].entry) || ivs[b].exit.before(ivs[a].entry)) continue;
      out.emplace(a, b);
    }
  return out;
}

// Random message-passing history. Entries and exits are reported to `m` in
// the order they happen.
std::vector<Iv> random_history(const graph::Graph& g, const graph::Partition& p, Monitor& m, std::uint64_t seed,
                               std::size_t steps) {
  std::mt19937_64 rng(seed);
  const auto k = p.clients();
  std::vector<VectorClock> clk(k);
  std::vector<std::vector<VectorClock>> inbox(k);
  std::vector<std::optional<std::size_t>> open(k);
  std::vector<Iv> ivs;
  std::uniform_int_distribution<ClientId> who(0, static_cast<ClientId>(k - 1));
  std::uniform_int_distribution<int> what(0, 9);
  std::uint64_t action = 0;
  auto close = [&](ClientId c) {
    clk[c].increment(c);
    ivs[*open[c]].exit = clk[c];
    m.report_exit(c, *open[c] + 1, clk[c], {});
    open[c].reset();
  };
  for (std::size_t s = 0; s < steps; ++s) {
    const ClientId c = who(rng);
    const int w = what(rng);
    if (w < 3) {
      clk[c].increment(c);
      inbox[who(rng)].push_back(clk[c]);
    } else if (w < 6 && !inbox[c].empty()) {
      clk[c].merge(inbox[c].front());
      inbox[c].erase(inbox[c].begin());
      clk[c].increment(c);
    } else if (open[c]) {
      close(c);
    } else {
      const auto& mine = p.nodes_of(c);
      const NodeId node = mine[std::uniform_int_distribution<std::size_t>(0, mine.size() - 1)(rng)];
      clk[c].increment(c);
      open[c] = ivs.size();
      ivs.push_back({c, node, clk[c], {}});
      m.report_entry(c, node, ++action, clk[c], {});
    }
  }
  for (ClientId c = 0; c < k; ++c)
    if (open[c]) close(c);
  return ivs;
}

}  // namespace

TEST_CASE("precedes and concurrent on closed and open intervals") {
  CriticalSectionInterval a, b;
  a.entry_clock = {{0, 1}};
  a.exit_clock = {{0, 2}};
  a.closed = true;
  b.entry_clock = {{0, 3}, {1, 1}};
  CHECK(precedes(a, b));
  CHECK_FALSE(concurrent(a, b));
  a.closed = false;
  CHECK_FALSE(precedes(a, b));
  CHECK(concurrent(a, b));
  a.closed = true;
  b.entry_clock = {{1, 1}};
  CHECK(concurrent(a, b));
}

TEST_CASE("monitor agrees with a brute-force vector-clock oracle") {
  const auto g = graph::generate_planar_grid(3, 4);
  for (std::size_t clients : {2u, 3u, 4u}) {
    const auto p = graph::partition_random(g, clients, clients);
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      CAPTURE(clients);
      CAPTURE(seed);
      Monitor m(g, p);
      const auto ivs = random_history(g, p, m, seed * 31 + clients, 400);
      REQUIRE(m.intervals().size() == ivs.size());
      const auto truth = brute_force(g, ivs);

      std::set<std::pair<std::size_t, std::size_t>> flagged, confirmed;
      for (const auto& v : m.violations()) {
        REQUIRE(v.confirmed.has_value());
        const auto pr = std::minmax(v.first, v.second);
        CHECK(flagged.insert(pr).second);
        if (*v.confirmed) confirmed.insert(pr);
        CHECK(*v.confirmed == truth.contains(pr));
      }
      // Sound and complete once every interval is closed.
      CHECK(confirmed == truth);
      CHECK(m.confirmed() == truth.size());
      CHECK(m.false_positives() == flagged.size() - truth.size());
    }
  }
}

TEST_CASE("open interval rule yields a false positive when the first closes before the second enters causally") {
  const auto g = graph::generate_planar_grid(1, 2);
  const auto p = graph::partition_sequential(g, 2);
  Monitor m(g, p);
  m.report_entry(0, 0, 1, {{0, 1}}, at_ms(0));
  // Client 1 has seen client 0's exit, but the exit report is still in flight.
  CHECK(m.report_entry(1, 1, 1, {{0, 2}, {1, 1}}, at_ms(1)).size() == 1);
  CHECK_FALSE(m.violations()[0].confirmed.has_value());
  m.report_exit(0, 1, {{0, 2}}, at_ms(2));
  m.report_exit(1, 1, {{0, 2}, {1, 2}}, at_ms(3));
  REQUIRE(m.violations()[0].confirmed.has_value());
  CHECK_FALSE(*m.violations()[0].confirmed);
  CHECK(m.false_positives() == 1);
  CHECK(m.confirmed() == 0);
}

TEST_CASE("same-client and non-adjacent intervals are never flagged") {
  const auto g = graph::generate_planar_grid(1, 4);
  const auto p = graph::partition_sequential(g, 2);  // {0,1} {2,3}
  Monitor m(g, p);
  m.report_entry(0, 0, 1, {{0, 1}}, {});
  m.report_exit(0, 1, {{0, 2}}, {});
  m.report_entry(0, 1, 2, {{0, 3}}, {});
  CHECK(m.report_entry(1, 3, 1, {{1, 1}}, {}).empty());
  CHECK(m.violations().empty());
}

TEST_CASE("duplicate entry reports are ignored") {
  const auto g = graph::generate_planar_grid(1, 2);
  const auto p = graph::partition_sequential(g, 2);
  Monitor m(g, p);
  m.report_entry(0, 0, 1, {{0, 1}}, {});
  m.report_entry(1, 1, 1, {{1, 1}}, {});
  CHECK(m.report_entry(0, 0, 1, {{0, 1}}, {}).empty());
  CHECK(m.report_entry(1, 1, 1, {{1, 1}}, {}).empty());
  CHECK(m.intervals().size() == 2);
  CHECK(m.violations().size() == 1);
}

TEST_CASE("malformed reports are rejected") {
  const auto g = graph::generate_planar_grid(1, 2);
  const auto p = graph::partition_sequential(g, 2);
  Monitor m(g, p);
  CHECK_THROWS_AS(m.report_entry(0, 7, 1, {{0, 1}}, {}), MonitorError);
  CHECK_THROWS_AS(m.report_entry(0, 1, 1, {{0, 1}}, {}), MonitorError);
  CHECK_THROWS_AS(m.report_entry(5, 0, 1, {{5, 1}}, {}), MonitorError);
  CHECK_THROWS_AS(m.report_entry(0, 0, 1, {}, {}), MonitorError);
  CHECK_THROWS_AS(m.report_exit(0, 1, {{0, 2}}, {}), MonitorError);
  CHECK_THROWS_AS(m.report_exit(9, 1, {{0, 2}}, {}), MonitorError);
  m.report_entry(0, 0, 1, {{0, 3}}, {});
  CHECK_THROWS_AS(m.report_entry(0, 0, 2, {{0, 4}}, {}), MonitorError);
  CHECK_THROWS_AS(m.report_exit(0, 2, {{0, 5}}, {}), MonitorError);
  CHECK_THROWS_AS(m.report_exit(0, 1, {{0, 1}}, {}), MonitorError);
  m.report_exit(0, 1, {{0, 4}}, {});
}

namespace {

struct Recorder : AbortTarget {
  std::vector<std::uint64_t> actions;
  Phase reply = Phase::Read;
  Phase notify_abort(std::uint64_t action) override {
    actions.push_back(action);
    return reply;
  }
};

}  // namespace

TEST_CASE("monitor service delivers notifications to both clients after the channel delays") {
  sim::Scheduler sched;
  const auto g = graph::generate_planar_grid(1, 2);
  const auto p = graph::partition_sequential(g, 2);
  MonitorService svc(sched, g, p, sim::from_ms(2), sim::from_ms(3));
  Recorder r0, r1;
  r1.reply = Phase::Write;
  svc.attach(0, &r0);
  svc.attach(1, &r1);
  sched.at(at_ms(10), [&] { svc.submit_entry(0, 0, 11, {{0, 1}}); });
  sched.at(at_ms(11), [&] { svc.submit_entry(1, 1, 21, {{1, 1}}); });
  sched.run();
  REQUIRE(svc.notifications().size() == 2);
  CHECK(r0.actions == std::vector<std::uint64_t>{11});
  CHECK(r1.actions == std::vector<std::uint64_t>{21});
  for (const auto& n : svc.notifications()) {
    CHECK(n.ts == at_ms(16));
    CHECK(n.phase == (n.client == 0 ? Phase::Read : Phase::Write));
  }
  // Later interval entered at 11 ms; delivery at 16 ms.
  CHECK(svc.mean_detection_latency_ms() == doctest::Approx(5.0));
  CHECK(svc.monitor().violations().size() == 1);
}

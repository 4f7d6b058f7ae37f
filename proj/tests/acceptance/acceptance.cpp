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


// Acceptance checks. Prints one PASS/FAIL line per criterion; pass
// criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../support/quorum_schedules.hpp"
#include "../support/stabilization.hpp"
#include "stabkv/graph/generators.hpp"
#include "stabkv/harness/experiment.hpp"
#include "stabkv/harness/report.hpp"
#include "stabkv/runtime/mode.hpp"
#include "stabkv/termination/detector.hpp"

using namespace stabkv;
using harness::ExperimentConfig;
using harness::RunArtifacts;
using harness::RunMetrics;
using programs::ProgramKind;
using runtime::ExecutionMode;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Timed {
  RunMetrics m;
  double host_s = 0;
};

// Every run made by any criterion, for the frozen-world check.
std::vector<RunMetrics> g_all_runs;

Timed run(const ExperimentConfig& c, RunArtifacts* art = nullptr) {
  const auto t0 = Clock::now();
  Timed t{harness::run_experiment(c, art), 0};
  t.host_s = seconds_since(t0);
  g_all_runs.push_back(t.m);
  std::fprintf(stderr, "  %-10s %-16s %-16s seed=%llu conv=%s host=%.1fs\n", runtime::to_string(c.mode),
               programs::to_string(c.program.kind), harness::graph_label(c).c_str(),
               static_cast<unsigned long long>(c.seed),
               t.m.convergence_ms ? fmt("%.0fms", *t.m.convergence_ms).c_str() : "NA", t.host_s);
  return t;
}

ExperimentConfig base(const std::string& gen, ProgramKind kind, ExecutionMode mode, std::uint64_t seed) {
  ExperimentConfig c;
  c.gen = gen;
  c.program.kind = kind;
  c.mode = mode;
  c.seed = seed;
  c.clients = 10;
  c.delay_ms = 20;
  c.jitter_ms = 10;
  return c;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

const std::string kAsymDelays = std::string(STABKV_TEST_DATA) + "/asym_delays.txt";

// Grid, regular and social runs shared by criteria 1, 3 and 5.
struct GateRun {
  Timed t;
  bool rollback_checked = false;
  std::size_t unsound = 0, missed = 0, closed_pairs = 0, flagged_closed = 0;
};

// Criterion 5 (b, c): re-derive concurrency of closed intervals with a
// direct vector-clock comparison.
void check_intervals(const RunArtifacts& art, GateRun& out) {
  const auto& ivs = art.intervals;
  auto conc = [&](std::size_t a, std::size_t b) {
    return !ivs[a].exit_clock.before(ivs[b].entry_clock) && !ivs[b].exit_clock.before(ivs[a].entry_clock);
  };
  std::set<std::pair<std::size_t, std::size_t>> flagged;
  for (const auto& v : art.violations) {
    flagged.insert(std::minmax(v.first, v.second));
    if (!v.confirmed) continue;
    ++out.flagged_closed;
    if (*v.confirmed != conc(v.first, v.second)) ++out.unsound;
  }
  std::vector<std::vector<std::size_t>> by_node(art.graph->node_count());
  for (std::size_t i = 0; i < ivs.size(); ++i)
    if (ivs[i].closed) by_node[ivs[i].node].push_back(i);
  for (auto [u, v] : art.graph->edges())
    for (auto a : by_node[u])
      for (auto b : by_node[v]) {
        if (ivs[a].client == ivs[b].client || !conc(a, b)) continue;
        ++out.closed_pairs;
        if (!flagged.contains(std::minmax(a, b))) ++out.missed;
      }
  out.rollback_checked = true;
}

const std::vector<std::string> kGateGraphs = {"grid:30,30", "regular:500,6", "social:500,3"};
const std::vector<ProgramKind> kPrograms = {ProgramKind::ArbitraryColoring, ProgramKind::PlanarColoring,
                                            ProgramKind::Matching};
constexpr double kGateCapS = 10000;

std::vector<GateRun>& gate_runs() {
  static std::vector<GateRun> runs;
  static bool done = false;
  if (done) return runs;
  done = true;
  for (auto kind : kPrograms)
    for (auto mode : {ExecutionMode::SEQ, ExecutionMode::EVE_S, ExecutionMode::ROLLBACK})
      for (const auto& gen : kGateGraphs)
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
          auto c = base(gen, kind, mode, seed);
          c.cap_s = kGateCapS;
          GateRun g;
          if (mode == ExecutionMode::ROLLBACK) {
            RunArtifacts art;
            g.t = run(c, &art);
            check_intervals(art, g);
          } else {
            g.t = run(c);
          }
          runs.push_back(std::move(g));
        }
  return runs;
}

// Rollback runs over per-client asymmetric links, where locks are violated.
std::vector<GateRun>& asym_runs() {
  static std::vector<GateRun> runs;
  static bool done = false;
  if (done) return runs;
  done = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto c = base("social:300,3", ProgramKind::Matching, ExecutionMode::ROLLBACK, seed);
    c.clients = 8;
    c.delay_file = kAsymDelays;
    c.cap_s = 3600;
    RunArtifacts art;
    GateRun g;
    g.t = run(c, &art);
    check_intervals(art, g);
    runs.push_back(std::move(g));
  }
  return runs;
}

Result c1() {
  std::size_t total = 0, term = 0, legit = 0, slow = 0;
  double worst = 0;
  std::map<std::string, std::size_t> capped;
  for (const auto& g : gate_runs()) {
    const auto& m = g.t.m;
    ++total;
    worst = std::max(worst, g.t.host_s);
    if (g.t.host_s >= 120) ++slow;
    if (!m.terminated) {
      ++capped[std::string(programs::to_string(m.config.program.kind)) + "/" + harness::graph_label(m.config)];
      continue;
    }
    ++term;
    legit += m.legitimate;
  }
  std::string caps;
  for (const auto& [k, n] : capped) caps += fmt(" %s:%zu", k.c_str(), n);
  return {legit == term && slow == 0,
          fmt("%zu runs, %zu terminated, %zu/%zu legitimate, slowest %.1fs host; capped:%s", total, term, legit,
              term, worst, caps.empty() ? " none" : caps.c_str())};
}

Result c2() {
  const auto t0 = Clock::now();
  std::size_t runs = 0, conv = 0, pert = 0, reconv = 0;
  bool per_prog_ok = true;
  std::string fail;
  for (auto kind : kPrograms) {
    programs::Program p{kind, false};
    const auto rep = testing::check_stabilization(p, 25, 2026);
    runs += rep.runs;
    conv += rep.converged;
    pert += rep.perturbed_runs;
    reconv += rep.reconverged;
    per_prog_ok &= rep.runs >= 100;
    if (fail.empty()) fail = rep.first_failure;
  }
  const double s = seconds_since(t0);
  return {per_prog_ok && conv == runs && reconv == pert && s < 60,
          fmt("%zu/%zu converged, %zu/%zu re-converged after perturbation, %.1fs%s%s", conv, runs, reconv, pert, s,
              fail.empty() ? "" : "; ", fail.c_str())};
}

Result c3() {
  std::size_t seq_runs = 0, seq_cvf = 0;
  for (const auto& g : gate_runs())
    if (g.t.m.config.mode == ExecutionMode::SEQ) {
      ++seq_runs;
      seq_cvf += g.t.m.cvf.total.cvf;
    }
  std::size_t positive = 0;
  std::string counts;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto c = base("social:500,3", ProgramKind::Matching, ExecutionMode::EVE_AS, seed);
    c.clients = 10;
    const auto t = run(c);
    positive += t.m.cvf.total.cvf > 0;
    counts += fmt(" %llu", static_cast<unsigned long long>(t.m.cvf.total.cvf));
  }
  return {seq_cvf == 0 && positive >= 4,
          fmt("SEQ cvf total %zu over %zu runs; EVE-AS social-500 cvf>0 in %zu/5 seeds (cvf:%s)", seq_cvf, seq_runs,
              positive, counts.c_str())};
}

Result c4() {
  std::map<ExecutionMode, std::vector<double>> conv;
  std::map<ExecutionMode, double> host;
  bool all_term = true;
  for (auto mode : {ExecutionMode::SEQ, ExecutionMode::EVE_S, ExecutionMode::EVE_AS})
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto c = base("social:1000,3", ProgramKind::Matching, mode, seed);
      c.cap_s = 7200;
      const auto t = run(c);
      host[mode] += t.host_s;
      all_term &= t.m.terminated;
      conv[mode].push_back(t.m.convergence_ms.value_or(c.cap_s * 1000));
    }
  const double seq = median(conv[ExecutionMode::SEQ]);
  const double s = median(conv[ExecutionMode::EVE_S]);
  const double as = median(conv[ExecutionMode::EVE_AS]);
  bool fast = true;
  for (auto [m, h] : host) fast &= h <= 600;
  return {all_term && fast && s <= 0.9 * seq && as <= 0.5 * seq,
          fmt("median ms SEQ %.0f, EVE-S %.0f (%.2fx), EVE-AS %.0f (%.3fx); host s SEQ %.0f EVE-S %.0f EVE-AS %.0f%s",
              seq, s, s / seq, as, as / seq, host[ExecutionMode::SEQ], host[ExecutionMode::EVE_S],
              host[ExecutionMode::EVE_AS], all_term ? "" : "; some runs hit the cap")};
}

Result c5() {
  std::size_t runs = 0, abort_writes = 0, unsound = 0, missed = 0, pairs = 0, flagged = 0, term = 0, legit = 0,
              violations = 0;
  auto add = [&](const GateRun& g) {
    if (g.t.m.config.mode != ExecutionMode::ROLLBACK) return;
    ++runs;
    abort_writes += g.t.m.cvf.abort_writes;
    unsound += g.unsound;
    missed += g.missed;
    pairs += g.closed_pairs;
    flagged += g.flagged_closed;
    violations += g.t.m.violations;
    if (g.t.m.terminated) {
      ++term;
      legit += g.t.m.legitimate;
    }
  };
  for (const auto& g : gate_runs()) add(g);
  for (const auto& g : asym_runs()) add(g);
  return {abort_writes == 0 && unsound == 0 && missed == 0 && legit == term && violations > 0,
          fmt("%zu runs, %zu violations; (a) abort+write %zu; (b) %zu/%zu closed verdicts agree with oracle; "
              "(c) %zu/%zu concurrent closed pairs flagged; (d) %zu/%zu legitimate",
              runs, violations, abort_writes, flagged - unsound, flagged, pairs - missed, pairs, legit, term)};
}

Result c6() {
  std::size_t checked = 0, w3 = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto rep = testing::random_staleness_schedule({3, 1, 3}, seed);
    checked += rep.gets_checked;
    w3 += rep.witnesses;
  }
  const bool w1 = testing::staleness_witness({3, 1, 1});
  const bool w3_script = testing::staleness_witness({3, 1, 3});
  return {w3 == 0 && w1 && !w3_script,
          fmt("N3R1W3: %zu witnesses over 10^4 schedules (%zu GETs); scripted witness N3R1W1 %s, N3R1W3 %s", w3,
              checked, w1 ? "found" : "absent", w3_script ? "found" : "absent")};
}

// Re-enable between rounds, detector alone on a converged grid.
bool scripted_restart(std::string& detail) {
  sim::Scheduler sched;
  const auto g = graph::generate_planar_grid(6, 6);
  const programs::Program prog{ProgramKind::ArbitraryColoring, false};
  auto state = programs::zero_state(g);
  programs::run_serialized(prog, g, state, programs::serialized_budget(g));
  store::Store st(sched, {3, 1, 1}, {sim::from_ms(5), {}, 1});
  for (graph::NodeId j = 0; j < g.node_count(); ++j)
    st.seed(store::Key::program(j), store::Version{programs::encode(state[j]), {{0, 1}}, {}, {}});
  runtime::StopFlag stop;
  termination::TerminationDetector det(st, g, prog, stop, 1);
  sched.spawn(det.run({}));
  // Node 7 takes its neighbor's color, enabling it, then goes back.
  const graph::NodeId j = 7, k = g.neighbors(j).back();
  auto bad = state[j];
  bad.color = state[k].color;
  sched.at(sim::at_ms(100), [&] {
    st.seed(store::Key::program(j), store::Version{programs::encode(bad), {{0, 2}}, sim::at_ms(100), {}});
  });
  sched.at(sim::at_ms(700), [&] {
    st.seed(store::Key::program(j), store::Version{programs::encode(state[j]), {{0, 3}}, sim::at_ms(700), {}});
  });
  sched.run();
  sched.shutdown();
  const auto& r = det.report();
  detail = fmt("scripted schedule: %s after %llu restarts at %.0f ms", r.terminated ? "terminated" : "no termination",
               static_cast<unsigned long long>(r.restarts), sim::to_ms(r.declared_at));
  return r.terminated && r.restarts >= 2 && r.frozen_world_ok && r.declared_at > sim::at_ms(700);
}

Result c7() {
  std::size_t term = 0, frozen = 0;
  for (const auto& m : g_all_runs)
    if (m.terminated) {
      ++term;
      frozen += m.frozen_world_ok;
    }
  std::string detail;
  const bool scripted = scripted_restart(detail);
  return {frozen == term && scripted,
          fmt("frozen-world ok on %zu/%zu terminated runs; %s", frozen, term, detail.c_str())};
}

Result c8() {
  std::size_t fewer = 0;
  std::string pairs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto c = base("regular:500,6", ProgramKind::ArbitraryColoring, ExecutionMode::EVE_AS, seed);
    const auto plain = run(c);
    c.optimize = true;
    const auto opt = run(c);
    const auto a = plain.m.totals.nbr_gets, b = opt.m.totals.nbr_gets;
    fewer += b < a;
    pairs += fmt(" %llu->%llu", static_cast<unsigned long long>(a), static_cast<unsigned long long>(b));
  }
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> t(0, 1000000), d(0, 100000);
  std::size_t mismatch = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto nd = t(rng), nbr = t(rng), len = d(rng), eps = d(rng) / 8;
    const bool want = nd > nbr + len + eps;
    mismatch += runtime::should_skip(sim::TimePoint{sim::Duration{nd}}, sim::TimePoint{sim::Duration{nbr}},
                                     sim::Duration{len}, sim::Duration{eps}) != want;
  }
  return {fewer >= 4 && mismatch == 0,
          fmt("neighbor GETs lower with --opt in %zu/5 seeds (%s); skip rule mismatches %zu/10^4", fewer,
              pairs.c_str() + 1, mismatch)};
}

Result c9() {
  constexpr double cap_s = 1800;
  std::vector<double> det, rnd, eve_s;
  std::vector<bool> det_term, rnd_term;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto c = base("regular:500,6", ProgramKind::ArbitraryColoring, ExecutionMode::EVE_AS, seed);
    c.cap_s = cap_s;
    const auto d = run(c);
    c.program.random_color = true;
    const auto r = run(c);
    auto s = base("regular:500,6", ProgramKind::ArbitraryColoring, ExecutionMode::EVE_S, seed);
    s.cap_s = cap_s;
    const auto e = run(s);
    det.push_back(d.m.convergence_ms.value_or(cap_s * 1000));
    rnd.push_back(r.m.convergence_ms.value_or(cap_s * 1000));
    eve_s.push_back(e.m.convergence_ms.value_or(cap_s * 1000));
    det_term.push_back(d.m.terminated);
    rnd_term.push_back(r.m.terminated);
  }
  const double eve_s_med = median(eve_s), det_med = median(det), rnd_med = median(rnd);
  std::size_t hard = 0, rescued = 0;
  for (std::size_t i = 0; i < det.size(); ++i)
    if (!det_term[i] || det[i] > 2 * eve_s_med) {
      ++hard;
      rescued += rnd_term[i];
    }
  return {rescued == hard && rnd_med <= 1.2 * det_med,
          fmt("median ms EVE-S %.0f, deterministic %.0f (%zu/5 terminated), random %.0f (%zu/5 terminated); "
              "hard seeds %zu, random converged on %zu",
              eve_s_med, det_med, static_cast<std::size_t>(std::count(det_term.begin(), det_term.end(), true)),
              rnd_med, static_cast<std::size_t>(std::count(rnd_term.begin(), rnd_term.end(), true)), hard, rescued)};
}

Result c10() {
  std::size_t same = 0, total = 0;
  for (auto mode : {ExecutionMode::SEQ, ExecutionMode::EVE_S, ExecutionMode::EVE_AS, ExecutionMode::ROLLBACK})
    for (bool opt : {false, true}) {
      auto c = base("social:500,3", ProgramKind::Matching, mode, 42);
      c.optimize = opt;
      c.clock_skew_ms = 5;
      c.init = "random:3";
      std::ostringstream a, b;
      harness::write_metrics_csv(a, {run(c).m});
      harness::write_metrics_csv(b, {run(c).m});
      ++total;
      same += a.str() == b.str();
    }
  return {same == total, fmt("%zu/%zu repeated runs produced identical metrics.csv", same, total)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Result()>> criteria = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
    if (!only.empty() && !only.contains(n)) continue;
    const auto t0 = Clock::now();
    const auto r = criteria[n - 1]();
    std::printf("criterion %d: %s (%.0fs) %s\n", n, r.pass ? "PASS" : "FAIL", seconds_since(t0), r.detail.c_str());
    std::fflush(stdout);
    failed += !r.pass;
  }
  return failed == 0 ? 0 : 1;
}

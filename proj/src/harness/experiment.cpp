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


#include "stabkv/harness/experiment.hpp"

#include <fstream>
#include <random>

#include "stabkv/termination/detector.hpp"

namespace stabkv::harness {

using store::Key;

std::vector<std::vector<std::uint64_t>> bucket_throughput(const std::vector<std::vector<sim::TimePoint>>& times,
                                                          sim::TimePoint end, sim::Duration bucket) {
  const auto span = end.time_since_epoch().count();
  const auto width = std::max<sim::SimClock::rep>(1, bucket.count());
  const std::size_t buckets = std::max<std::size_t>(1, static_cast<std::size_t>((span + width - 1) / width));
  std::vector<std::vector<std::uint64_t>> out(times.size(), std::vector<std::uint64_t>(buckets, 0));
  for (std::size_t c = 0; c < times.size(); ++c)
    for (auto t : times[c]) {
      const auto b = std::min<std::size_t>(buckets - 1, static_cast<std::size_t>(t.time_since_epoch().count() / width));
      ++out[c][b];
    }
  return out;
}

namespace {

void add(runtime::ClientCounters& a, const runtime::ClientCounters& b) {
  a.evaluations += b.evaluations;
  a.executed += b.executed;
  a.disabled += b.disabled;
  a.skips += b.skips;
  a.aborts += b.aborts;
  a.abandoned += b.abandoned;
  a.lock_failures += b.lock_failures;
  a.store_failures += b.store_failures;
  a.gets += b.gets;
  a.puts += b.puts;
  a.nbr_gets += b.nbr_gets;
  a.lock_gets += b.lock_gets;
  a.lock_puts += b.lock_puts;
  a.lock_busy += b.lock_busy;
  a.lock_retracts += b.lock_retracts;
  a.lock_time += b.lock_time;
  a.active_time += b.active_time;
  a.passes += b.passes;
}

programs::GlobalState initial_state(const ExperimentConfig& cfg, const graph::Graph& g) {
  if (cfg.init == "zero") return programs::zero_state(g);
  const auto seed = std::stoull(cfg.init.substr(7));
  return programs::random_state(g, cfg.program, seed);
}

}  // namespace

RunMetrics run_experiment(const ExperimentConfig& cfg, RunArtifacts* artifacts) {
  validate(cfg);
  auto g = std::make_unique<graph::Graph>(build_graph(cfg));
  const auto part = build_partition(cfg, *g);
  const auto k = part.clients();

  RunMetrics m;
  m.config = cfg;
  m.nodes = g->node_count();
  m.edges = g->edge_count();

  sim::Scheduler sched;
  sched.set_realtime(cfg.wall_clock);
  store::LinkModel links{sim::from_ms(cfg.delay_ms), sim::from_ms(cfg.jitter_ms), cfg.seed * 0x9e3779b97f4a7c15ull + 1};
  store::Store st(sched, cfg.store_config(), links);
  if (!cfg.delay_file.empty()) {
    std::ifstream in(cfg.delay_file);
    if (!in) throw ConfigError("cannot open delay file " + cfg.delay_file);
    st.load_link_delays(in);
  }

  runtime::EventLog log;
  const auto init = initial_state(cfg, *g);
  for (graph::NodeId j = 0; j < g->node_count(); ++j) {
    store::Version v;
    v.value = programs::encode(init[j]);
    st.seed(Key::program(j), v);
    log.seed(j, v.value);
    st.seed(Key::lock(j), store::Version{runtime::encode(runtime::LockEntry{}), {}, {}, {}});
    st.seed(Key::nbr(j), store::Version{runtime::encode_time(sim::TimePoint{}), {}, {}, {}});
  }

  runtime::StopFlag stop;
  std::unique_ptr<monitor::MonitorService> mon;
  if (runtime::uses_monitor(cfg.mode)) mon = std::make_unique<monitor::MonitorService>(sched, *g, part);

  std::seed_seq skew_seq{static_cast<std::uint32_t>(cfg.seed), 0xc10cu};
  std::mt19937_64 skew_rng(skew_seq);
  const auto skew_us = static_cast<std::int64_t>(cfg.clock_skew_ms * 1000);
  std::vector<std::unique_ptr<runtime::Client>> clients;
  for (store::ClientId c = 0; c < k; ++c) {
    runtime::ClientOptions o;
    o.mode = cfg.mode;
    o.program = cfg.program;
    o.optimize = cfg.optimize;
    o.lease = sim::from_ms(cfg.lease_ms);
    o.epsilon = sim::from_ms(cfg.epsilon_ms);
    o.seed = cfg.seed;
    if (skew_us > 0) o.clock_skew = sim::Duration{std::uniform_int_distribution<std::int64_t>(-skew_us, skew_us)(skew_rng)};
    clients.push_back(std::make_unique<runtime::Client>(c, *g, part, st, log, stop, o, mon.get()));
  }
  termination::TerminationOptions topts;
  topts.poll = sim::from_ms(cfg.term_poll_ms);
  termination::TerminationDetector det(st, *g, cfg.program, stop, static_cast<store::ClientId>(k), topts);

  const sim::TimePoint start{};
  for (auto& c : clients) sched.spawn(c->run());
  sched.spawn(det.run(start));
  sched.at(start + sim::from_ms(cfg.cap_s * 1000), [&] { stop.set(sched.now()); });
  sched.run();

  const auto& rep = det.report();
  m.terminated = rep.terminated;
  if (rep.terminated) m.convergence_ms = sim::to_ms(rep.convergence);
  m.end_ms = sim::to_ms(stop.at);
  m.rounds = rep.rounds;
  m.restarts = rep.restarts;
  m.frozen_world_ok = rep.frozen_world_ok;
  m.detector_gets = rep.gets;

  programs::GlobalState final_state(g->node_count());
  for (graph::NodeId j = 0; j < g->node_count(); ++j)
    final_state[j] = programs::decode(store::resolve(st.union_versions(Key::program(j))).value);
  m.legitimate = programs::is_legitimate(*g, final_state, cfg.program, &m.legitimacy_note);

  std::vector<std::vector<sim::TimePoint>> times;
  std::uint64_t client_puts = 0;
  for (auto& c : clients) {
    const auto& cc = c->counters();
    m.per_client.push_back(cc);
    add(m.totals, cc);
    client_puts += cc.puts + cc.lock_puts;
    times.push_back(c->evaluation_times());
  }
  m.lock_wait_ms = sim::to_ms(m.totals.lock_time);
  const double client_ms = m.end_ms * static_cast<double>(k);
  m.lock_share = client_ms > 0 ? m.lock_wait_ms / client_ms : 0.0;

  m.cvf = runtime::count_cvf_posthoc(log);

  if (mon) {
    const auto& mm = mon->monitor();
    m.violations = mm.violations().size();
    m.confirmed = mm.confirmed();
    m.false_positives = mm.false_positives();
    m.notifications = mon->notifications().size();
    m.detection_latency_ms = mon->mean_detection_latency_ms();
    for (const auto& v : mm.violations()) {
      const auto& a = mm.intervals()[v.first];
      const auto& b = mm.intervals()[v.second];
      m.violation_rows.push_back({v.j, v.k, a.client, b.client, a.action, b.action, sim::to_ms(v.detect_ts),
                                  !v.confirmed ? "open" : (*v.confirmed ? "confirmed" : "false-positive")});
    }
  }

  m.store_gets = st.get_count();
  m.store_puts = st.put_count();
  m.detector_puts = m.store_puts - client_puts;
  m.events = sched.executed_events();
  m.bucket_ms = cfg.bucket_s * 1000;
  m.throughput = bucket_throughput(times, stop.at, sim::from_ms(m.bucket_ms));

  if (!cfg.event_log.empty()) {
    std::ofstream out(cfg.event_log);
    if (!out) throw ConfigError("cannot write event log " + cfg.event_log);
    log.write_ndjson(out);
  }
  if (artifacts) {
    if (mon) {
      artifacts->intervals = mon->monitor().intervals();
      artifacts->violations = mon->monitor().violations();
      artifacts->notifications = mon->notifications();
    }
    artifacts->initial = init;
    artifacts->final_state = std::move(final_state);
    artifacts->log = std::move(log);
    artifacts->graph = std::move(g);
  }
  // Client frames reference locals; drop them before those go away.
  sched.shutdown();
  return m;
}

}  // namespace stabkv::harness

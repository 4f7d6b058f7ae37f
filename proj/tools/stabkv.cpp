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


#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stabkv/graph/generators.hpp"
#include "stabkv/graph/partition.hpp"
#include "stabkv/harness/config.hpp"
#include "stabkv/harness/experiment.hpp"
#include "stabkv/harness/report.hpp"
#include "stabkv/harness/suite.hpp"
#include "stabkv/runtime/cvf.hpp"
#include "stabkv/runtime/event_log.hpp"

using namespace stabkv;
using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw harness::ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw harness::ConfigError(path + ": " + e.what());
  }
}

// Experiment flags. Only flags given on the command line override the
// config file.
struct ConfigFlags {
  std::string config_file;
  json overrides = json::object();

  template <typename T>
  void bind(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<T>(flag, [this, key](const T& v) { overrides[key] = v; }, help);
  }
  void flag(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_flag_function(flag, [this, key](std::int64_t n) { overrides[key] = n > 0; }, help);
  }

  void add(CLI::App* app) {
    app->add_option("--config", config_file, "JSON config file; flags override it");
    bind<std::string>(app, "--name", "name", "run label");
    bind<std::string>(app, "--graph", "graph", "edge-list file");
    bind<std::string>(app, "--gen", "gen", "regular:n,d | social:n,m | grid:r,c | planar:n");
    bind<std::uint64_t>(app, "--graph-seed", "graph_seed", "generator seed (default: --seed)");
    bind<std::string>(app, "--partition", "partition", "seq | random | file:PATH");
    bind<std::string>(app, "--program", "program", "color-arbitrary | color-planar | matching");
    flag(app, "--random-color", "random_color", "pick free colors at random");
    bind<std::string>(app, "--mode", "mode", "seq | eve-s | eve-as | rollback");
    bind<std::string>(app, "--quorum", "quorum", "e.g. N3R1W3 (default from mode)");
    bind<double>(app, "--store-timeout-ms", "store_timeout_ms", "per-round quorum timeout");
    bind<std::size_t>(app, "--clients", "clients", "number of clients");
    flag(app, "--opt", "opt", "skip neighbor reads when nothing changed");
    bind<double>(app, "--lease-ms", "lease_ms", "lock lease");
    bind<double>(app, "--epsilon-ms", "epsilon_ms", "clock error bound in the skip rule");
    bind<double>(app, "--delay-ms", "delay_ms", "one-way link delay");
    bind<double>(app, "--jitter-ms", "jitter_ms", "mean exponential jitter per message");
    bind<std::string>(app, "--delay-file", "delay_file", "per-link 'client replica ms' overrides");
    bind<double>(app, "--term-poll-ms", "term_poll_ms", "termination detector poll interval");
    bind<double>(app, "--cap-s", "cap_s", "simulated time cap");
    bind<double>(app, "--bucket-s", "bucket_s", "throughput bucket width");
    bind<std::string>(app, "--init", "init", "zero | random:SEED");
    flag(app, "--wall-clock", "wall_clock", "pace simulated time against the host clock");
    bind<double>(app, "--clock-skew-ms", "clock_skew_ms", "max per-client clock offset");
    bind<std::uint64_t>(app, "--seed", "seed", "run seed");
    bind<int>(app, "--reps", "reps", "repetitions");
    bind<std::string>(app, "--out", "out", "output directory");
    bind<std::string>(app, "--event-log", "event_log", "write the NDJSON event log here");
  }

  harness::ExperimentConfig build() const {
    harness::ExperimentConfig base;
    if (!config_file.empty()) base = harness::config_from_json(read_json_file(config_file));
    return harness::config_from_json(overrides, base);
  }
};

int cmd_run(const ConfigFlags& flags) {
  const auto cfg = flags.build();
  harness::validate(cfg);
  std::vector<harness::RunMetrics> runs;
  for (int rep = 0; rep < cfg.reps; ++rep) {
    auto c = cfg;
    c.seed = harness::rep_seed(cfg.seed, rep);
    if (cfg.reps > 1 && !c.event_log.empty()) c.event_log += "." + std::to_string(rep);
    auto m = harness::run_experiment(c);
    m.rep = rep;
    char conv[32] = "NA";
    if (m.convergence_ms) std::snprintf(conv, sizeof conv, "%.3f", *m.convergence_ms);
    std::cout << "termination " << harness::run_id(m) << ": " << conv << ',' << m.rounds << ',' << m.restarts << '\n';
    runs.push_back(std::move(m));
  }
  harness::write_summary_text(std::cout, runs);
  if (!cfg.out.empty()) harness::write_outputs(cfg.out, runs);
  return 0;
}

int cmd_suite(const std::string& path, const std::string& out) {
  const auto spec = harness::suite_from_json(read_json_file(path));
  const auto res = harness::run_suite(spec);
  harness::write_summary_text(std::cout, res.runs);
  std::cout << '\n';
  harness::write_comparison_text(std::cout, res.rows);
  if (!out.empty()) {
    harness::write_outputs(out, res.runs);
    std::ofstream o(out + "/comparison.csv");
    harness::write_comparison_csv(o, res.rows);
  }
  return 0;
}

int cmd_analyze(const std::string& path, const std::string& out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const auto log = runtime::EventLog::read_ndjson(in);
  const auto s = runtime::count_cvf_posthoc(log);
  std::cout << "client,executed,cvf,stale,interleaved,stutter\n";
  auto row = [](std::ostream& o, const std::string& who, const runtime::CvfCounts& c) {
    o << who << ',' << c.executed << ',' << c.cvf << ',' << c.stale << ',' << c.interleaved << ',' << c.stutter << '\n';
  };
  for (std::size_t c = 0; c < s.per_client.size(); ++c) row(std::cout, std::to_string(c), s.per_client[c]);
  row(std::cout, "all", s.total);
  std::cout << "abort_writes," << s.abort_writes << "\nwrite_overlaps," << s.write_overlaps << '\n';
  if (!out.empty()) {
    std::ofstream o(out);
    if (!o) throw std::runtime_error("cannot write " + out);
    o << "client,executed,cvf,stale,interleaved,stutter\n";
    for (std::size_t c = 0; c < s.per_client.size(); ++c) row(o, std::to_string(c), s.per_client[c]);
    row(o, "all", s.total);
  }
  return 0;
}

int cmd_stats(const ConfigFlags& flags) {
  const auto cfg = flags.build();
  const auto g = harness::build_graph(cfg);
  const auto p = harness::build_partition(cfg, g);
  const auto stats = graph::partition_stats(g, p);
  std::vector<std::vector<std::string>> rows{
      {"client", "nodes", "max_deg", "min_deg", "avg_deg", "total_deg", "internal", "external"}};
  for (const auto& s : stats.per_client) {
    char avg[32];
    std::snprintf(avg, sizeof avg, "%.2f", s.avg_degree);
    rows.push_back({std::to_string(s.client), std::to_string(s.node_count), std::to_string(s.max_degree),
                    std::to_string(s.min_degree), avg, std::to_string(s.total_degree),
                    std::to_string(s.internal_edges), std::to_string(s.external_edges)});
  }
  std::cout << "nodes " << g.node_count() << ", edges " << g.edge_count() << ", max degree " << g.max_degree()
            << '\n';
  harness::write_aligned(std::cout, rows);
  return 0;
}

int cmd_gen(const ConfigFlags& flags, const std::string& out) {
  const auto g = harness::build_graph(flags.build());
  if (out.empty()) {
    graph::write_edge_list(std::cout, g);
  } else {
    std::ofstream o(out);
    if (!o) throw std::runtime_error("cannot write " + out);
    graph::write_edge_list(o, g);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stabkv: self-stabilizing graph programs over a simulated quorum key-value store"};
  app.require_subcommand(1);

  ConfigFlags run_flags;
  auto* run = app.add_subcommand("run", "run one experiment configuration");
  run_flags.add(run);

  std::string suite_file, suite_out;
  auto* suite = app.add_subcommand("suite", "run a matrix of configurations and compare against a baseline");
  suite->add_option("matrix", suite_file, "suite JSON file")->required();
  suite->add_option("--out", suite_out, "output directory");

  std::string log_file, analyze_out;
  auto* analyze = app.add_subcommand("analyze", "post-hoc cvf counts from an event log");
  analyze->add_option("log", log_file, "NDJSON event log")->required();
  analyze->add_option("--out", analyze_out, "cvf CSV path");

  ConfigFlags stats_flags;
  auto* stats = app.add_subcommand("stats", "partition statistics");
  stats_flags.add(stats);

  ConfigFlags gen_flags;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "write a generated graph as an edge list");
  gen_flags.add(gen);
  gen->add_option("-o,--output", gen_out, "edge-list path (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_flags);
    if (*suite) return cmd_suite(suite_file, suite_out);
    if (*analyze) return cmd_analyze(log_file, analyze_out);
    if (*stats) return cmd_stats(stats_flags);
    if (*gen) return cmd_gen(gen_flags, gen_out);
  } catch (const harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

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


#include "stabkv/harness/config.hpp"

#include <charconv>
#include <regex>
#include <vector>

#include "stabkv/graph/generators.hpp"

namespace stabkv::harness {

using nlohmann::json;

store::StoreConfig ExperimentConfig::store_config() const {
  store::StoreConfig sc = quorum.value_or(runtime::required_consistency(mode) == store::Consistency::Sequential
                                              ? store::StoreConfig{3, 1, 3}
                                              : store::StoreConfig{3, 1, 1});
  sc.timeout = sim::from_ms(store_timeout_ms);
  return sc;
}

store::StoreConfig parse_quorum(std::string_view s) {
  static const std::regex re(R"([Nn](\d+)[Rr](\d+)[Ww](\d+))");
  std::cmatch m;
  if (!std::regex_match(s.begin(), s.end(), m, re)) throw ConfigError("bad quorum '" + std::string(s) + "'");
  store::StoreConfig sc;
  sc.n_replicas = std::stoul(m[1]);
  sc.read_quorum = std::stoul(m[2]);
  sc.write_quorum = std::stoul(m[3]);
  try {
    store::validate(sc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(s) + ": " + e.what());
  }
  return sc;
}

std::string quorum_string(const store::StoreConfig& cfg) {
  return "N" + std::to_string(cfg.n_replicas) + "R" + std::to_string(cfg.read_quorum) + "W" +
         std::to_string(cfg.write_quorum);
}

namespace {

std::vector<std::size_t> gen_args(const std::string& spec, std::string& kind) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("bad generator '" + spec + "'");
  kind = spec.substr(0, colon);
  std::vector<std::size_t> args;
  const char* p = spec.data() + colon + 1;
  const char* end = spec.data() + spec.size();
  while (p < end) {
    std::size_t v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc{}) throw ConfigError("bad generator '" + spec + "'");
    args.push_back(v);
    p = next;
    if (p < end) {
      if (*p != ',') throw ConfigError("bad generator '" + spec + "'");
      ++p;
    }
  }
  return args;
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  const auto sc = cfg.store_config();
  try {
    store::validate(sc);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const auto have = store::classify_consistency(sc);
  const auto need = runtime::required_consistency(cfg.mode);
  if (have != need)
    throw ConfigError(std::string(runtime::to_string(cfg.mode)) + " needs a " + store::to_string(need) +
                      " quorum but " + quorum_string(sc) + " is " + store::to_string(have));
  if (cfg.clients < 1) throw ConfigError("need at least one client");
  if (cfg.cap_s <= 0) throw ConfigError("cap must be positive");
  if (cfg.bucket_s <= 0) throw ConfigError("bucket width must be positive");
  if (cfg.term_poll_ms <= 0) throw ConfigError("termination poll interval must be positive");
  if (cfg.delay_ms < 0 || cfg.jitter_ms < 0 || cfg.lease_ms <= 0 || cfg.epsilon_ms < 0 || cfg.clock_skew_ms < 0)
    throw ConfigError("delays, lease, epsilon and skew must be non-negative");
  if (cfg.reps < 1) throw ConfigError("reps must be >= 1");
  if (cfg.program.random_color && cfg.program.kind != programs::ProgramKind::ArbitraryColoring)
    throw ConfigError("--random-color applies to color-arbitrary only");
  if (cfg.init != "zero" && cfg.init.rfind("random:", 0) != 0) throw ConfigError("bad --init '" + cfg.init + "'");
  if (cfg.partition != "seq" && cfg.partition != "random" && cfg.partition.rfind("file:", 0) != 0)
    throw ConfigError("bad --partition '" + cfg.partition + "'");
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "name") c.name = v.get<std::string>();
      else if (key == "graph") c.graph = v.get<std::string>();
      else if (key == "gen") c.gen = v.get<std::string>();
      else if (key == "graph_seed") c.graph_seed = v.get<std::uint64_t>();
      else if (key == "partition") c.partition = v.get<std::string>();
      else if (key == "program") c.program.kind = programs::parse_program(v.get<std::string>());
      else if (key == "random_color") c.program.random_color = v.get<bool>();
      else if (key == "mode") c.mode = runtime::parse_mode(v.get<std::string>());
      else if (key == "quorum") c.quorum = parse_quorum(v.get<std::string>());
      else if (key == "store_timeout_ms") c.store_timeout_ms = v.get<double>();
      else if (key == "clients") c.clients = v.get<std::size_t>();
      else if (key == "opt") c.optimize = v.get<bool>();
      else if (key == "lease_ms") c.lease_ms = v.get<double>();
      else if (key == "epsilon_ms") c.epsilon_ms = v.get<double>();
      else if (key == "delay_ms") c.delay_ms = v.get<double>();
      else if (key == "jitter_ms") c.jitter_ms = v.get<double>();
      else if (key == "delay_file") c.delay_file = v.get<std::string>();
      else if (key == "term_poll_ms") c.term_poll_ms = v.get<double>();
      else if (key == "cap_s") c.cap_s = v.get<double>();
      else if (key == "bucket_s") c.bucket_s = v.get<double>();
      else if (key == "init") c.init = v.get<std::string>();
      else if (key == "wall_clock") c.wall_clock = v.get<bool>();
      else if (key == "clock_skew_ms") c.clock_skew_ms = v.get<double>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "reps") c.reps = v.get<int>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "event_log") c.event_log = v.get<std::string>();
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j{{"name", c.name},
         {"gen", c.gen},
         {"partition", c.partition},
         {"program", programs::to_string(c.program.kind)},
         {"random_color", c.program.random_color},
         {"mode", runtime::to_string(c.mode)},
         {"quorum", quorum_string(c.store_config())},
         {"store_timeout_ms", c.store_timeout_ms},
         {"clients", c.clients},
         {"opt", c.optimize},
         {"lease_ms", c.lease_ms},
         {"epsilon_ms", c.epsilon_ms},
         {"delay_ms", c.delay_ms},
         {"jitter_ms", c.jitter_ms},
         {"term_poll_ms", c.term_poll_ms},
         {"cap_s", c.cap_s},
         {"bucket_s", c.bucket_s},
         {"init", c.init},
         {"wall_clock", c.wall_clock},
         {"clock_skew_ms", c.clock_skew_ms},
         {"seed", c.seed},
         {"reps", c.reps}};
  if (!c.graph.empty()) j["graph"] = c.graph;
  if (c.graph_seed) j["graph_seed"] = *c.graph_seed;
  if (!c.delay_file.empty()) j["delay_file"] = c.delay_file;
  if (!c.out.empty()) j["out"] = c.out;
  if (!c.event_log.empty()) j["event_log"] = c.event_log;
  return j;
}

graph::Graph build_graph(const ExperimentConfig& cfg) {
  if (!cfg.graph.empty()) return graph::load_graph_file(cfg.graph);
  std::string kind;
  const auto a = gen_args(cfg.gen, kind);
  const auto seed = cfg.effective_graph_seed();
  auto need = [&](std::size_t k) {
    if (a.size() != k) throw ConfigError("generator '" + kind + "' takes " + std::to_string(k) + " arguments");
  };
  if (kind == "regular") {
    need(2);
    return graph::generate_random_regular(a[0], a[1], seed);
  }
  if (kind == "social") {
    need(2);
    return graph::generate_social(a[0], a[1], seed);
  }
  if (kind == "grid") {
    need(2);
    return graph::generate_planar_grid(a[0], a[1]);
  }
  if (kind == "planar") {
    need(1);
    return graph::generate_planar_triangulation(a[0], seed);
  }
  throw ConfigError("unknown generator '" + kind + "'");
}

graph::Partition build_partition(const ExperimentConfig& cfg, const graph::Graph& g) {
  if (cfg.partition == "seq") return graph::partition_sequential(g, cfg.clients);
  if (cfg.partition == "random") return graph::partition_random(g, cfg.clients, cfg.seed);
  if (cfg.partition.rfind("file:", 0) == 0) {
    auto p = graph::load_partition_file(cfg.partition.substr(5), g.node_count());
    if (p.clients() != cfg.clients)
      throw ConfigError("partition file has " + std::to_string(p.clients()) + " clients, config says " +
                        std::to_string(cfg.clients));
    return p;
  }
  throw ConfigError("bad partition '" + cfg.partition + "'");
}

std::string graph_label(const ExperimentConfig& cfg) { return cfg.graph.empty() ? cfg.gen : cfg.graph; }

}  // namespace stabkv::harness

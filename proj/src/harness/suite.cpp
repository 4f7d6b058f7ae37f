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


#include "stabkv/harness/suite.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <stdexcept>

#include "stabkv/harness/report.hpp"

namespace stabkv::harness {

Benefit compute_benefit(double baseline, double variant) {
  if (!(baseline > 0) || !(variant > 0)) throw std::invalid_argument("convergence times must be positive");
  return {100.0 * (baseline - variant) / baseline, baseline / variant};
}

SuiteSpec suite_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("suite must be a JSON object");
  SuiteSpec s;
  for (const auto& [key, v] : j.items())
    if (key != "baseline" && key != "base" && key != "variants" && key != "seeds" && key != "reps")
      throw ConfigError("unknown suite key '" + key + "'");
  try {
    if (!j.contains("baseline")) throw ConfigError("suite needs a baseline");
    s.baseline = j.at("baseline").get<std::string>();
    if (j.contains("base")) s.base = config_from_json(j.at("base"));
    if (!j.contains("variants") || !j.at("variants").is_array() || j.at("variants").empty())
      throw ConfigError("suite needs a non-empty variants array");
    bool found = false;
    for (const auto& v : j.at("variants")) {
      if (!v.is_object() || !v.contains("name")) throw ConfigError("every variant needs a name");
      config_from_json(v, s.base);
      found = found || v.at("name").get<std::string>() == s.baseline;
      s.variants.push_back(v);
    }
    if (!found) throw ConfigError("baseline '" + s.baseline + "' is not among the variants");
    if (j.contains("seeds")) s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (s.seeds.empty()) throw ConfigError("suite needs at least one seed");
    if (j.contains("reps")) s.reps = j.at("reps").get<int>();
    if (s.reps < 1) throw ConfigError("reps must be >= 1");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("suite: ") + e.what());
  }
  return s;
}

std::uint64_t rep_seed(std::uint64_t seed, int rep) {
  return rep == 0 ? seed : seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(rep));
}

std::optional<double> median_convergence(const std::vector<RunMetrics>& runs) {
  std::vector<double> v;
  for (const auto& m : runs)
    if (m.convergence_ms) v.push_back(*m.convergence_ms);
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

std::vector<SuiteRow> compare(const std::string& baseline, const std::vector<std::string>& order,
                              const std::vector<RunMetrics>& runs) {
  std::map<std::string, std::vector<RunMetrics>> by_name;
  for (const auto& m : runs) by_name[m.config.name].push_back(m);
  if (!by_name.contains(baseline)) throw ConfigError("no runs for baseline '" + baseline + "'");
  const auto base = median_convergence(by_name[baseline]);
  std::vector<SuiteRow> rows;
  for (const auto& name : order) {
    const auto& rs = by_name[name];
    SuiteRow r;
    r.name = name;
    r.runs = rs.size();
    double sum = 0;
    for (const auto& m : rs)
      if (m.convergence_ms) {
        ++r.terminated;
        sum += *m.convergence_ms;
      }
    if (r.terminated) r.mean_ms = sum / static_cast<double>(r.terminated);
    r.median_ms = median_convergence(rs);
    if (name != baseline && base && r.median_ms) r.benefit = compute_benefit(*base, *r.median_ms);
    rows.push_back(r);
  }
  return rows;
}

SuiteResult run_suite(const SuiteSpec& spec) {
  SuiteResult out;
  std::vector<std::string> order;
  for (const auto& v : spec.variants) {
    const auto cfg = config_from_json(v, spec.base);
    order.push_back(cfg.name);
    for (auto seed : spec.seeds)
      for (int rep = 0; rep < spec.reps; ++rep) {
        auto c = cfg;
        c.seed = rep_seed(seed, rep);
        auto m = run_experiment(c);
        m.rep = rep;
        out.runs.push_back(std::move(m));
      }
  }
  out.rows = compare(spec.baseline, order, out.runs);
  return out;
}

namespace {

std::string num(const std::optional<double>& v, int digits = 3) {
  if (!v) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, *v);
  return buf;
}

std::vector<std::vector<std::string>> table(const std::vector<SuiteRow>& rows) {
  std::vector<std::vector<std::string>> t{
      {"variant", "runs", "terminated", "median_ms", "mean_ms", "benefit_pct", "speedup"}};
  for (const auto& r : rows)
    t.push_back({r.name, std::to_string(r.runs), std::to_string(r.terminated), num(r.median_ms), num(r.mean_ms),
                 r.benefit ? num(r.benefit->percent, 1) : "-",
                 r.benefit ? num(r.benefit->speedup, 2) : "-"});
  return t;
}

}  // namespace

void write_comparison_csv(std::ostream& out, const std::vector<SuiteRow>& rows) {
  for (const auto& r : table(rows)) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << '\n';
  }
}

void write_comparison_text(std::ostream& out, const std::vector<SuiteRow>& rows) { write_aligned(out, table(rows)); }

}  // namespace stabkv::harness

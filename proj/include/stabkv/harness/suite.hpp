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

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "stabkv/harness/experiment.hpp"

namespace stabkv::harness {

struct Benefit {
  /// (baseline - variant) / baseline, in percent.
  double percent = 0;
  /// baseline / variant.
  double speedup = 0;
};

/// Throws std::invalid_argument unless both times are positive.
Benefit compute_benefit(double baseline, double variant);

struct SuiteSpec {
  /// Name of the variant every other one is compared against.
  std::string baseline;
  ExperimentConfig base;
  /// Overrides applied on top of `base`; each must set "name".
  std::vector<nlohmann::json> variants;
  std::vector<std::uint64_t> seeds{1};
  int reps = 1;
};

/// {"baseline": ..., "base": {...}, "variants": [{...}], "seeds": [...], "reps": n}.
/// Throws ConfigError on a missing baseline or malformed entries.
SuiteSpec suite_from_json(const nlohmann::json& j);

struct SuiteRow {
  std::string name;
  std::size_t runs = 0;
  std::size_t terminated = 0;
  std::optional<double> median_ms;
  std::optional<double> mean_ms;
  /// Against the baseline medians; empty for the baseline itself or when
  /// either side has no terminated run.
  std::optional<Benefit> benefit;
};

struct SuiteResult {
  std::vector<RunMetrics> runs;
  std::vector<SuiteRow> rows;
};

/// Seed for repetition `rep` of a run seeded `seed`.
std::uint64_t rep_seed(std::uint64_t seed, int rep);

/// Median of the terminated runs' convergence times.
std::optional<double> median_convergence(const std::vector<RunMetrics>& runs);

std::vector<SuiteRow> compare(const std::string& baseline, const std::vector<std::string>& order,
                              const std::vector<RunMetrics>& runs);
SuiteResult run_suite(const SuiteSpec& spec);
void write_comparison_csv(std::ostream& out, const std::vector<SuiteRow>& rows);
void write_comparison_text(std::ostream& out, const std::vector<SuiteRow>& rows);

}  // namespace stabkv::harness

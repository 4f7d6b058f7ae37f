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

#include <ostream>
#include <string>
#include <vector>

#include "stabkv/harness/experiment.hpp"

namespace stabkv::harness {

/// "<name>-s<seed>", plus "-r<rep>" for repetitions after the first.
std::string run_id(const RunMetrics& m);

void write_metrics_csv(std::ostream& out, const std::vector<RunMetrics>& runs);
/// Schema "bucket_start,client,ops,mode"; bucket_start in seconds.
void write_throughput_csv(std::ostream& out, const RunMetrics& m);
void write_violations_csv(std::ostream& out, const std::vector<RunMetrics>& runs);
void write_cvf_csv(std::ostream& out, const std::vector<RunMetrics>& runs);
void write_summary_csv(std::ostream& out, const std::vector<RunMetrics>& runs);
/// Aligned text table.
void write_summary_text(std::ostream& out, const std::vector<RunMetrics>& runs);

/// Space-padded columns.
void write_aligned(std::ostream& out, const std::vector<std::vector<std::string>>& rows);

/// Writes every output file for `runs` into `dir`, creating it. One
/// throughput.csv for a single run, throughput-<run id>.csv otherwise.
void write_outputs(const std::string& dir, const std::vector<RunMetrics>& runs);

}  // namespace stabkv::harness

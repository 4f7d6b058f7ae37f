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


#include "stabkv/harness/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace stabkv::harness {

namespace {

std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string q = "\"";
  for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string opt_ms(const std::optional<double>& v) { return v ? fixed(*v) : "NA"; }

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

}  // namespace

std::string run_id(const RunMetrics& m) {
  std::string id = m.config.name + "-s" + std::to_string(m.config.seed);
  if (m.rep > 0) id += "-r" + std::to_string(m.rep);
  return id;
}

void write_metrics_csv(std::ostream& out, const std::vector<RunMetrics>& runs) {
  out << "run,program,random_color,graph,nodes,edges,partition,mode,quorum,clients,opt,seed,rep,delay_ms,"
         "jitter_ms,terminated,convergence_ms,end_ms,rounds,restarts,frozen_world_ok,legitimate,evaluations,"
         "executed,disabled,skips,aborts,abandoned,lock_failures,store_failures,gets,puts,nbr_gets,lock_gets,"
         "lock_puts,lock_busy,lock_retracts,lock_wait_ms,lock_share,cvf,cvf_stale,cvf_interleaved,stutter,"
         "abort_writes,write_overlaps,violations,confirmed,false_positives,notifications,detection_latency_ms,"
         "store_gets,store_puts,detector_gets,detector_puts,events\n";
  for (const auto& m : runs) {
    const auto& c = m.config;
    const auto& t = m.totals;
    out << csv_field(run_id(m)) << ',' << programs::to_string(c.program.kind) << ',' << c.program.random_color << ','
        << csv_field(graph_label(c)) << ',' << m.nodes << ',' << m.edges << ',' << csv_field(c.partition) << ','
        << runtime::to_string(c.mode) << ',' << quorum_string(c.store_config()) << ',' << c.clients << ','
        << c.optimize << ',' << c.seed << ',' << m.rep << ',' << fixed(c.delay_ms) << ',' << fixed(c.jitter_ms)
        << ',' << m.terminated << ',' << opt_ms(m.convergence_ms) << ',' << fixed(m.end_ms) << ',' << m.rounds
        << ',' << m.restarts << ',' << m.frozen_world_ok << ',' << m.legitimate << ',' << t.evaluations << ','
        << t.executed << ',' << t.disabled << ',' << t.skips << ',' << t.aborts << ',' << t.abandoned << ','
        << t.lock_failures << ',' << t.store_failures << ',' << t.gets << ',' << t.puts << ',' << t.nbr_gets
        << ',' << t.lock_gets << ',' << t.lock_puts << ',' << t.lock_busy << ',' << t.lock_retracts << ','
        << fixed(m.lock_wait_ms) << ',' << fixed(m.lock_share, 6) << ',' << m.cvf.total.cvf << ','
        << m.cvf.total.stale << ',' << m.cvf.total.interleaved << ',' << m.cvf.total.stutter << ','
        << m.cvf.abort_writes << ',' << m.cvf.write_overlaps << ',' << m.violations << ',' << m.confirmed << ','
        << m.false_positives << ',' << m.notifications << ',' << fixed(m.detection_latency_ms) << ','
        << m.store_gets << ',' << m.store_puts << ',' << m.detector_gets << ',' << m.detector_puts << ','
        << m.events << '\n';
  }
}

void write_throughput_csv(std::ostream& out, const RunMetrics& m) {
  out << "bucket_start,client,ops,mode\n";
  const char* mode = runtime::to_string(m.config.mode);
  for (std::size_t c = 0; c < m.throughput.size(); ++c)
    for (std::size_t b = 0; b < m.throughput[c].size(); ++b)
      out << fixed(static_cast<double>(b) * m.bucket_ms / 1000.0) << ',' << c << ',' << m.throughput[c][b] << ','
          << mode << '\n';
}

void write_violations_csv(std::ostream& out, const std::vector<RunMetrics>& runs) {
  out << "run,j,k,first_client,second_client,first_action,second_action,detect_ms,status\n";
  for (const auto& m : runs)
    for (const auto& v : m.violation_rows)
      out << run_id(m) << ',' << v.j << ',' << v.k << ',' << v.first_client << ',' << v.second_client << ','
          << v.first_action << ',' << v.second_action << ',' << fixed(v.detect_ms) << ',' << v.status << '\n';
}

void write_cvf_csv(std::ostream& out, const std::vector<RunMetrics>& runs) {
  out << "run,mode,client,executed,cvf,stale,interleaved,stutter\n";
  for (const auto& m : runs) {
    const char* mode = runtime::to_string(m.config.mode);
    for (std::size_t c = 0; c < m.cvf.per_client.size(); ++c) {
      const auto& x = m.cvf.per_client[c];
      out << run_id(m) << ',' << mode << ',' << c << ',' << x.executed << ',' << x.cvf << ',' << x.stale << ','
          << x.interleaved << ',' << x.stutter << '\n';
    }
    const auto& x = m.cvf.total;
    out << run_id(m) << ',' << mode << ",all," << x.executed << ',' << x.cvf << ',' << x.stale << ','
        << x.interleaved << ',' << x.stutter << '\n';
  }
}

namespace {

std::vector<std::vector<std::string>> summary_rows(const std::vector<RunMetrics>& runs) {
  std::vector<std::vector<std::string>> rows{
      {"run", "mode", "terminated", "convergence_s", "legitimate", "evaluations", "cvf", "stutter", "aborts",
       "skips", "lock_share"}};
  for (const auto& m : runs)
    rows.push_back({run_id(m), runtime::to_string(m.config.mode), m.terminated ? "yes" : "no",
                    m.convergence_ms ? fixed(*m.convergence_ms / 1000.0) : "NA", m.legitimate ? "yes" : "no",
                    std::to_string(m.totals.evaluations), std::to_string(m.cvf.total.cvf),
                    std::to_string(m.cvf.total.stutter), std::to_string(m.totals.aborts),
                    std::to_string(m.totals.skips), fixed(m.lock_share)});
  return rows;
}

void aligned(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out << "  ";
      out << r[i];
      if (i + 1 < r.size()) out << std::string(width[i] - r[i].size(), ' ');
    }
    out << '\n';
  }
}

}  // namespace

void write_summary_csv(std::ostream& out, const std::vector<RunMetrics>& runs) {
  for (const auto& r : summary_rows(runs)) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << '\n';
  }
}

void write_summary_text(std::ostream& out, const std::vector<RunMetrics>& runs) { aligned(out, summary_rows(runs)); }

void write_outputs(const std::string& dir, const std::vector<RunMetrics>& runs) {
  namespace fs = std::filesystem;
  const fs::path d(dir);
  fs::create_directories(d);
  {
    auto o = open_out(d / "metrics.csv");
    write_metrics_csv(o, runs);
  }
  {
    auto o = open_out(d / "violations.csv");
    write_violations_csv(o, runs);
  }
  {
    auto o = open_out(d / "cvf.csv");
    write_cvf_csv(o, runs);
  }
  {
    auto o = open_out(d / "summary.csv");
    write_summary_csv(o, runs);
  }
  {
    auto o = open_out(d / "summary.txt");
    write_summary_text(o, runs);
  }
  for (const auto& m : runs) {
    auto o = open_out(d / (runs.size() == 1 ? std::string("throughput.csv") : "throughput-" + run_id(m) + ".csv"));
    write_throughput_csv(o, m);
  }
}

void write_aligned(std::ostream& out, const std::vector<std::vector<std::string>>& rows) { aligned(out, rows); }

}  // namespace stabkv::harness

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


#include "stabkv/runtime/event_log.hpp"

#include <json.hpp>
#include <stdexcept>

namespace stabkv::runtime {

using nlohmann::json;

const char* to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::Executed: return "executed";
    case Outcome::Disabled: return "disabled";
    case Outcome::Skipped: return "skipped";
    case Outcome::Aborted: return "aborted";
    case Outcome::LockFailed: return "lock-failed";
    case Outcome::StoreFailed: return "store-failed";
    case Outcome::Stopped: return "stopped";
  }
  return "?";
}

Outcome parse_outcome(std::string_view s) {
  for (Outcome o : {Outcome::Executed, Outcome::Disabled, Outcome::Skipped, Outcome::Aborted,
                    Outcome::LockFailed, Outcome::StoreFailed, Outcome::Stopped})
    if (s == to_string(o)) return o;
  throw std::runtime_error("unknown outcome '" + std::string(s) + "'");
}

namespace {

std::int64_t us(sim::TimePoint t) { return t.time_since_epoch().count(); }
sim::TimePoint from_us(std::int64_t v) { return sim::TimePoint{sim::Duration{v}}; }

}  // namespace

void EventLog::write_ndjson(std::ostream& out) const {
  for (const auto& s : seeds_) out << json{{"t", "seed"}, {"node", s.node}, {"value", s.value}}.dump() << '\n';
  for (const auto& g : gets_)
    out << json{{"t", "get"},          {"action", g.action},   {"client", g.client},
                {"node", g.node},      {"start", g.start_tick}, {"end", g.end_tick},
                {"start_us", us(g.start_ts)}, {"end_us", us(g.end_ts)}, {"ok", g.ok},
                {"hash", g.hash}}
               .dump()
        << '\n';
  for (const auto& p : puts_)
    out << json{{"t", "put"},          {"action", p.action},         {"client", p.client},
                {"node", p.node},      {"start", p.start_tick},       {"end", p.end_tick},
                {"start_us", us(p.start_ts)}, {"end_us", us(p.end_ts)}, {"ok", p.ok},
                {"value", p.value},    {"clock", p.clock.to_string()}, {"wall_us", us(p.wall_ts)}}
               .dump()
        << '\n';
  for (const auto& a : actions_)
    out << json{{"t", "action"},       {"action", a.action},       {"client", a.client},
                {"node", a.node},      {"outcome", to_string(a.outcome)}, {"start", a.start_tick},
                {"write", a.write_tick}, {"end", a.end_tick},       {"start_us", us(a.start_ts)},
                {"end_us", us(a.end_ts)}}
               .dump()
        << '\n';
}

EventLog EventLog::read_ndjson(std::istream& in) {
  EventLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string t = j.at("t").get<std::string>();
      if (t == "seed") {
        log.seeds_.push_back({j.at("node").get<NodeId>(), j.at("value").get<std::string>()});
      } else if (t == "get") {
        GetRecord g;
        g.action = j.at("action");
        g.client = j.at("client");
        g.node = j.at("node");
        g.start_tick = j.at("start");
        g.end_tick = j.at("end");
        g.start_ts = from_us(j.at("start_us"));
        g.end_ts = from_us(j.at("end_us"));
        g.ok = j.at("ok");
        g.hash = j.at("hash");
        log.gets_.push_back(std::move(g));
      } else if (t == "put") {
        PutRecord p;
        p.action = j.at("action");
        p.client = j.at("client");
        p.node = j.at("node");
        p.start_tick = j.at("start");
        p.end_tick = j.at("end");
        p.start_ts = from_us(j.at("start_us"));
        p.end_ts = from_us(j.at("end_us"));
        p.ok = j.at("ok");
        p.value = j.at("value").get<std::string>();
        p.clock = store::VectorClock::parse(j.at("clock").get<std::string>());
        p.wall_ts = from_us(j.at("wall_us"));
        log.puts_.push_back(std::move(p));
      } else if (t == "action") {
        ActionRecord a;
        a.action = j.at("action");
        a.client = j.at("client");
        a.node = j.at("node");
        a.outcome = parse_outcome(j.at("outcome").get<std::string>());
        a.start_tick = j.at("start");
        a.write_tick = j.at("write");
        a.end_tick = j.at("end");
        a.start_ts = from_us(j.at("start_us"));
        a.end_ts = from_us(j.at("end_us"));
        log.actions_.push_back(std::move(a));
      } else {
        throw std::runtime_error("unknown record type '" + t + "'");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("event log line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  for (const auto& g : log.gets_) log.tick_ = std::max(log.tick_, g.end_tick);
  for (const auto& p : log.puts_) log.tick_ = std::max(log.tick_, p.end_tick);
  for (const auto& a : log.actions_) {
    log.tick_ = std::max(log.tick_, a.end_tick);
    log.action_ = std::max(log.action_, a.action);
  }
  return log;
}

}  // namespace stabkv::runtime

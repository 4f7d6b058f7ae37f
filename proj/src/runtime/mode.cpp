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


#include "stabkv/runtime/mode.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>
#include <string>

namespace stabkv::runtime {

const char* to_string(ExecutionMode m) noexcept {
  switch (m) {
    case ExecutionMode::SEQ: return "SEQ";
    case ExecutionMode::EVE_S: return "EVE-S";
    case ExecutionMode::EVE_AS: return "EVE-AS";
    case ExecutionMode::ROLLBACK: return "ROLLBACK";
  }
  return "?";
}

ExecutionMode parse_mode(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  std::replace(s.begin(), s.end(), '_', '-');
  if (s == "seq") return ExecutionMode::SEQ;
  if (s == "eve-s") return ExecutionMode::EVE_S;
  if (s == "eve-as") return ExecutionMode::EVE_AS;
  if (s == "rollback") return ExecutionMode::ROLLBACK;
  throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

namespace {

std::int64_t parse_int(std::string_view f, std::string_view whole) {
  std::int64_t v = 0;
  if (f.empty() || std::from_chars(f.data(), f.data() + f.size(), v).ptr != f.data() + f.size())
    throw std::invalid_argument("malformed record '" + std::string(whole) + "'");
  return v;
}

std::pair<std::string_view, std::string_view> split2(std::string_view s) {
  const auto sp = s.find(' ');
  if (sp == std::string_view::npos) throw std::invalid_argument("malformed record '" + std::string(s) + "'");
  return {s.substr(0, sp), s.substr(sp + 1)};
}

}  // namespace

std::string encode(const LockEntry& e) {
  if (e.free()) return "- 0";
  return std::to_string(e.owner) + " " + std::to_string(e.lease_expiry.time_since_epoch().count());
}

LockEntry decode_lock(std::string_view bytes) {
  auto [owner, expiry] = split2(bytes);
  LockEntry e;
  if (owner == "-") {
    e.owner = LockEntry::kFree;
  } else {
    const auto o = parse_int(owner, bytes);
    if (o < 0 || o >= LockEntry::kFree) throw std::invalid_argument("lock owner out of range");
    e.owner = static_cast<store::ClientId>(o);
  }
  e.lease_expiry = sim::TimePoint{sim::Duration{parse_int(expiry, bytes)}};
  return e;
}

std::string encode(const MetaVars& m) {
  return std::to_string(m.nd_change.time_since_epoch().count()) + " " + std::to_string(m.last_len.count());
}

MetaVars decode_meta(std::string_view bytes) {
  auto [nd, len] = split2(bytes);
  return MetaVars{sim::TimePoint{sim::Duration{parse_int(nd, bytes)}}, sim::Duration{parse_int(len, bytes)}};
}

std::string encode_time(sim::TimePoint t) { return std::to_string(t.time_since_epoch().count()); }

sim::TimePoint decode_time(std::string_view bytes) {
  return sim::TimePoint{sim::Duration{parse_int(bytes, bytes)}};
}

bool should_skip(sim::TimePoint nd_change, sim::TimePoint nbr_change, sim::Duration last_len,
                 sim::Duration epsilon) noexcept {
  return nd_change > nbr_change + last_len + epsilon;
}

}  // namespace stabkv::runtime

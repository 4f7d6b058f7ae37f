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


#include "stabkv/store/version.hpp"

#include <stdexcept>

namespace stabkv::store {

std::string Key::to_string() const {
  static constexpr const char* kPrefix[] = {"node:", "lock:", "meta:", "nbr:"};
  return kPrefix[static_cast<int>(kind)] + std::to_string(node);
}

bool insert_pruned(std::vector<Version>& set, const Version& v) {
  for (const auto& existing : set) {
    const Order o = v.clock.compare(existing.clock);
    if (o == Order::Before || o == Order::Equal) return false;
  }
  std::erase_if(set, [&](const Version& existing) { return existing.clock.before(v.clock); });
  set.push_back(v);
  return true;
}

namespace {

bool less_version(const Version& a, const Version& b) {
  if (a.wall_ts != b.wall_ts) return a.wall_ts < b.wall_ts;
  if (int c = VectorClock::lex_compare(a.clock, b.clock); c != 0) return c < 0;
  return a.value < b.value;
}

}  // namespace

const Version& resolve(std::span<const Version> versions) {
  if (versions.empty()) throw std::invalid_argument("resolve of an empty version set");
  const Version* best = &versions.front();
  for (const auto& v : versions.subspan(1))
    if (less_version(*best, v)) best = &v;
  return *best;
}

std::uint64_t value_hash(std::string_view bytes) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace stabkv::store

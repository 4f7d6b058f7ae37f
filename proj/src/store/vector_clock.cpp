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


#include "stabkv/store/vector_clock.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace stabkv::store {

VectorClock::VectorClock(std::initializer_list<Entry> entries) {
  for (auto [c, n] : entries) set(c, n);
}

std::uint64_t VectorClock::get(ClientId c) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), c,
                             [](const Entry& e, ClientId id) { return e.first < id; });
  return it != entries_.end() && it->first == c ? it->second : 0;
}

void VectorClock::set(ClientId c, std::uint64_t value) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), c,
                             [](const Entry& e, ClientId id) { return e.first < id; });
  if (it != entries_.end() && it->first == c) {
    if (value == 0)
      entries_.erase(it);
    else
      it->second = value;
  } else if (value != 0) {
    entries_.insert(it, Entry{c, value});
  }
}

void VectorClock::increment(ClientId c) { set(c, get(c) + 1); }

void VectorClock::merge(const VectorClock& other) {
  std::vector<Entry> out;
  out.reserve(entries_.size() + other.entries_.size());
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      out.push_back(*a++);
    } else if (a == entries_.end() || b->first < a->first) {
      out.push_back(*b++);
    } else {
      out.emplace_back(a->first, std::max(a->second, b->second));
      ++a;
      ++b;
    }
  }
  entries_ = std::move(out);
}

Order VectorClock::compare(const VectorClock& other) const noexcept {
  bool less = false;
  bool greater = false;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      greater = true;
      ++a;
    } else if (a == entries_.end() || b->first < a->first) {
      less = true;
      ++b;
    } else {
      if (a->second < b->second) less = true;
      if (a->second > b->second) greater = true;
      ++a;
      ++b;
    }
    if (less && greater) return Order::Concurrent;
  }
  if (less) return Order::Before;
  if (greater) return Order::After;
  return Order::Equal;
}

int VectorClock::lex_compare(const VectorClock& a, const VectorClock& b) noexcept {
  auto x = a.entries_.begin();
  auto y = b.entries_.begin();
  while (x != a.entries_.end() || y != b.entries_.end()) {
    if (y == b.entries_.end() || (x != a.entries_.end() && x->first < y->first)) return 1;
    if (x == a.entries_.end() || y->first < x->first) return -1;
    if (x->second != y->second) return x->second < y->second ? -1 : 1;
    ++x;
    ++y;
  }
  return 0;
}

std::uint64_t VectorClock::sum() const noexcept {
  std::uint64_t s = 0;
  for (const auto& e : entries_) s += e.second;
  return s;
}

std::string VectorClock::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(entries_[i].first);
    out += ':';
    out += std::to_string(entries_[i].second);
  }
  out += '}';
  return out;
}

VectorClock VectorClock::parse(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("malformed vector clock: " + std::string(text)); };
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') fail();
  VectorClock out;
  std::string_view body = text.substr(1, text.size() - 2);
  ClientId last = 0;
  bool first = true;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const std::string_view item = body.substr(0, comma);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) fail();
    ClientId c = 0;
    std::uint64_t n = 0;
    const auto k = item.substr(0, colon);
    const auto v = item.substr(colon + 1);
    if (std::from_chars(k.data(), k.data() + k.size(), c).ptr != k.data() + k.size() || k.empty()) fail();
    if (std::from_chars(v.data(), v.data() + v.size(), n).ptr != v.data() + v.size() || v.empty()) fail();
    if (n == 0 || (!first && c <= last)) fail();
    out.entries_.emplace_back(c, n);
    last = c;
    first = false;
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
    if (body.empty()) fail();
  }
  return out;
}

VectorClock merged(const VectorClock& a, const VectorClock& b) {
  VectorClock out = a;
  out.merge(b);
  return out;
}

}  // namespace stabkv::store

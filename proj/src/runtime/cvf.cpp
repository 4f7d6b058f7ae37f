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


#include "stabkv/runtime/cvf.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "stabkv/store/version.hpp"

namespace stabkv::runtime {

namespace {

// Abstract value history of one program key: (tick, hash) steps in tick
// order, the first one at tick 0 for the seed.
struct History {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> steps;

  std::uint64_t at(std::uint64_t tick) const {
    // Last step strictly before `tick`.
    auto it = std::lower_bound(steps.begin(), steps.end(), std::make_pair(tick, std::uint64_t{0}));
    if (it == steps.begin()) return steps.front().second;
    return std::prev(it)->second;
  }

  bool seen_during(std::uint64_t hash, std::uint64_t from, std::uint64_t to) const {
    if (at(from) == hash) return true;
    auto it = std::lower_bound(steps.begin(), steps.end(), std::make_pair(from, std::uint64_t{0}));
    for (; it != steps.end() && it->first < to; ++it)
      if (it->second == hash) return true;
    return false;
  }
};

std::unordered_map<NodeId, History> build_histories(const EventLog& log) {
  std::unordered_map<NodeId, std::vector<store::Version>> live;
  std::unordered_map<NodeId, History> hist;
  for (const auto& s : log.seeds()) {
    store::Version v;
    v.value = s.value;
    live[s.node] = {v};
    hist[s.node].steps = {{0, store::value_hash(s.value)}};
  }
  std::vector<const PutRecord*> puts;
  for (const auto& p : log.puts())
    if (p.ok) puts.push_back(&p);
  std::sort(puts.begin(), puts.end(), [](auto* a, auto* b) { return a->end_tick < b->end_tick; });
  for (const auto* p : puts) {
    auto& set = live[p->node];
    store::Version v;
    v.value = p->value;
    v.clock = p->clock;
    v.wall_ts = p->wall_ts;
    store::insert_pruned(set, v);
    auto& h = hist[p->node];
    if (h.steps.empty()) h.steps.emplace_back(0, 0);
    h.steps.emplace_back(p->end_tick, store::value_hash(store::resolve(set).value));
  }
  return hist;
}

}  // namespace

CvfStats count_cvf_posthoc(const EventLog& log) {
  CvfStats out;
  std::unordered_map<std::uint64_t, const ActionRecord*> actions;
  ClientId max_client = 0;
  for (const auto& a : log.actions()) {
    actions.emplace(a.action, &a);
    max_client = std::max(max_client, a.client);
  }
  auto find = [&](std::uint64_t id, const char* what) {
    auto it = actions.find(id);
    if (it == actions.end())
      throw IncompleteLogError(std::string(what) + " references unlogged action " + std::to_string(id));
    return it->second;
  };
  std::unordered_map<std::uint64_t, std::vector<const GetRecord*>> reads;
  for (const auto& g : log.gets()) reads[find(g.action, "get")->action].push_back(&g);
  std::unordered_map<std::uint64_t, const PutRecord*> writes;
  for (const auto& p : log.puts()) writes[find(p.action, "put")->action] = &p;

  out.per_client.resize(log.actions().empty() ? 0 : max_client + 1);
  const auto hist = build_histories(log);
  auto history = [&](NodeId n) -> const History& {
    auto it = hist.find(n);
    if (it == hist.end()) throw IncompleteLogError("no seed for node " + std::to_string(n));
    return it->second;
  };

  for (const auto& a : log.actions()) {
    if (a.outcome == Outcome::Aborted && writes.contains(a.action)) ++out.abort_writes;
    const bool executed = a.outcome == Outcome::Executed;
    if (!executed && a.outcome != Outcome::Disabled) continue;
    bool stale = false;
    bool interleaved = false;
    if (auto it = reads.find(a.action); it != reads.end()) {
      for (const auto* g : it->second) {
        const auto& h = history(g->node);
        if (!h.seen_during(g->hash, g->start_tick, g->end_tick)) stale = true;
        if (executed && h.at(a.write_tick) != g->hash) interleaved = true;
      }
    }
    auto& c = out.per_client[a.client];
    if (executed) {
      ++c.executed;
      if (stale || interleaved) ++c.cvf;
      if (stale) ++c.stale;
      if (interleaved) ++c.interleaved;
    } else if (stale) {
      ++c.stutter;
    }
  }
  for (const auto& c : out.per_client) {
    out.total.executed += c.executed;
    out.total.cvf += c.cvf;
    out.total.stale += c.stale;
    out.total.interleaved += c.interleaved;
    out.total.stutter += c.stutter;
  }

  // Sweep program-PUT intervals in tick order against the writes currently
  // in flight at adjacent nodes. Adjacency is recovered from the reads.
  std::unordered_map<NodeId, std::vector<NodeId>> nbrs;
  struct Span {
    std::uint64_t from, to;
    NodeId node;
    ClientId client;
  };
  std::vector<Span> spans;
  for (const auto& [id, p] : writes) {
    const auto* a = actions.at(id);
    if (a->outcome != Outcome::Executed) continue;
    spans.push_back({p->start_tick, p->end_tick, p->node, p->client});
    auto& list = nbrs[p->node];
    if (list.empty())
      if (auto it = reads.find(id); it != reads.end())
        for (const auto* g : it->second)
          if (g->node != p->node) list.push_back(g->node);
  }
  std::sort(spans.begin(), spans.end(), [](const Span& x, const Span& y) { return x.from < y.from; });
  std::multimap<std::uint64_t, std::size_t> open;  // end tick -> span index
  std::unordered_map<NodeId, std::vector<std::size_t>> active;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    while (!open.empty() && open.begin()->first < s.from) {
      const auto idx = open.begin()->second;
      auto& v = active[spans[idx].node];
      v.erase(std::find(v.begin(), v.end(), idx));
      open.erase(open.begin());
    }
    for (NodeId k : nbrs[s.node])
      if (auto it = active.find(k); it != active.end())
        for (auto idx : it->second)
          if (spans[idx].client != s.client) ++out.write_overlaps;
    active[s.node].push_back(i);
    open.emplace(s.to, i);
  }
  return out;
}

}  // namespace stabkv::runtime

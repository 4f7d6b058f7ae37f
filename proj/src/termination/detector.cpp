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


#include "stabkv/termination/detector.hpp"

#include <algorithm>
#include <cstdio>

namespace stabkv::termination {

using store::Key;

std::string TerminationReport::line() const {
  char conv[32] = "NA";
  if (terminated) std::snprintf(conv, sizeof conv, "%.3f", sim::to_ms(convergence));
  return std::string(conv) + "," + std::to_string(rounds) + "," + std::to_string(restarts);
}

TerminationDetector::TerminationDetector(store::Store& st, const graph::Graph& g, programs::Program prog,
                                         runtime::StopFlag& stop, store::ClientId endpoint,
                                         TerminationOptions opts)
    : st_(&st), g_(&g), prog_(prog), stop_(&stop), endpoint_(endpoint), opts_(opts) {}

sim::Task<std::optional<std::vector<NodeSnapshot>>> TerminationDetector::snapshot(bool stop_if_enabled) {
  const auto n = g_->node_count();
  std::vector<NodeSnapshot> snap(n);
  std::vector<char> have(n, 0), checked(n, 0);
  programs::GlobalState state(n);

  // Read order: the closed neighborhood of the node last seen enabled, then
  // everything else in id order.
  std::vector<NodeId> order;
  order.reserve(n);
  std::vector<char> queued(n, 0);
  auto enqueue = [&](NodeId j) {
    if (!queued[j]) {
      queued[j] = 1;
      order.push_back(j);
    }
  };
  std::size_t first_batch = 0;
  if (stop_if_enabled && hint_ < n) {
    enqueue(hint_);
    for (NodeId k : g_->neighbors(hint_)) enqueue(k);
    first_batch = order.size();
  }
  for (NodeId j = 0; j < n; ++j) enqueue(j);

  bool failed = false;
  std::size_t lo = 0;
  while (lo < n) {
    if (stop_->stopped) co_return std::nullopt;
    const std::size_t hi = std::min(n, lo + (lo == 0 && first_batch ? first_batch : opts_.batch));
    std::vector<sim::Task<void>> tasks;
    for (std::size_t i = lo; i < hi; ++i)
      tasks.push_back([](TerminationDetector* self, NodeId j, std::vector<NodeSnapshot>& snap,
                         programs::GlobalState& state, bool& failed) -> sim::Task<void> {
        ++self->report_.gets;
        auto r = co_await self->st_->get(self->endpoint_, Key::program(j), self->st_->config().n_replicas);
        if (!r.ok || r.versions.empty()) {
          failed = true;
          co_return;
        }
        snap[j].vars = store::resolve(r.versions).value;
        for (const auto& v : r.versions) snap[j].modified = std::max(snap[j].modified, v.wall_ts);
        state[j] = programs::decode(snap[j].vars);
      }(this, order[i], snap, state, failed));
    co_await runtime::join_all(st_->scheduler(), std::move(tasks));
    if (failed) co_return std::nullopt;
    for (std::size_t i = lo; i < hi; ++i) have[order[i]] = 1;
    lo = hi;
    if (!stop_if_enabled) continue;
    for (std::size_t i = 0; i < hi; ++i) {
      const NodeId j = order[i];
      if (checked[j]) continue;
      const auto nbrs = g_->neighbors(j);
      if (!std::all_of(nbrs.begin(), nbrs.end(), [&](NodeId k) { return have[k]; })) continue;
      checked[j] = 1;
      if (programs::is_enabled(prog_, *g_, state, j)) {
        hint_ = j;
        co_return std::nullopt;
      }
    }
  }
  co_return snap;
}

bool TerminationDetector::frozen_world_disabled() const {
  const auto n = g_->node_count();
  programs::GlobalState state(n);
  for (NodeId j = 0; j < n; ++j) {
    const auto vs = st_->union_versions(Key::program(j));
    if (vs.empty()) return false;
    state[j] = programs::decode(store::resolve(vs).value);
  }
  for (NodeId j = 0; j < n; ++j)
    if (programs::is_enabled(prog_, *g_, state, j)) return false;
  return true;
}

sim::Task<void> TerminationDetector::run(sim::TimePoint start) {
  auto& sched = st_->scheduler();
  bool first = true;
  while (!stop_->stopped) {
    if (!first) {
      ++report_.restarts;
      co_await sched.sleep(opts_.poll);
      if (stop_->stopped) break;
    }
    first = false;
    ++report_.rounds;
    auto r1 = co_await snapshot(true);
    if (!r1) continue;
    co_await sched.sleep(opts_.poll);
    if (stop_->stopped) break;
    ++report_.rounds;
    auto r2 = co_await snapshot(false);
    if (!r2) continue;
    bool same = true;
    for (std::size_t j = 0; j < r1->size() && same; ++j)
      same = (*r1)[j].vars == (*r2)[j].vars && (*r1)[j].modified == (*r2)[j].modified;
    if (!same) continue;
    if (stop_->stopped) break;
    stop_->set(sched.now());
    report_.terminated = true;
    report_.declared_at = sched.now();
    report_.convergence = sched.now() - start;
    report_.frozen_world_ok = frozen_world_disabled();
    co_return;
  }
}

}  // namespace stabkv::termination

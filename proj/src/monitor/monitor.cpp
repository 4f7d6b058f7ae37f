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


#include "stabkv/monitor/monitor.hpp"

#include <algorithm>

namespace stabkv::monitor {

bool precedes(const CriticalSectionInterval& a, const CriticalSectionInterval& b) noexcept {
  return a.closed && a.exit_clock.compare(b.entry_clock) == store::Order::Before;
}

bool concurrent(const CriticalSectionInterval& a, const CriticalSectionInterval& b) noexcept {
  return !precedes(a, b) && !precedes(b, a);
}

Monitor::Monitor(const graph::Graph& g, const graph::Partition& p)
    : g_(&g), p_(&p), by_node_(g.node_count()), skip_(g.node_count()), open_of_client_(p.clients()) {
  for (NodeId j = 0; j < g.node_count(); ++j) skip_[j].assign(g.degree(j), 0);
}

std::vector<std::size_t> Monitor::report_entry(ClientId client, NodeId node, std::uint64_t action,
                                               const VectorClock& entry, sim::TimePoint ts) {
  if (node >= g_->node_count()) throw MonitorError("interval on unknown node " + std::to_string(node));
  if (client >= p_->clients() || p_->owner(node) != client)
    throw MonitorError("client " + std::to_string(client) + " does not own node " + std::to_string(node));
  if (entry.empty()) throw MonitorError("empty entry clock");
  if (!seen_.emplace(client, entry.to_string()).second) return {};
  if (open_of_client_[client])
    throw MonitorError("client " + std::to_string(client) + " entered twice without exiting");

  const std::size_t idx = intervals_.size();
  CriticalSectionInterval iv;
  iv.client = client;
  iv.node = node;
  iv.action = action;
  iv.entry_clock = entry;
  iv.entry_ts = ts;
  intervals_.push_back(std::move(iv));
  open_of_client_[client] = idx;

  std::vector<std::size_t> found;
  const auto nbrs = g_->neighbors(node);
  for (std::size_t pos = 0; pos < nbrs.size(); ++pos) {
    const NodeId k = nbrs[pos];
    if (p_->owner(k) == client) continue;
    const auto& list = by_node_[k];
    std::size_t& ptr = skip_[node][pos];
    while (ptr < list.size() && precedes(intervals_[list[ptr]], intervals_[idx])) ++ptr;
    for (std::size_t i = ptr; i < list.size(); ++i) {
      ++comparisons_;
      const std::size_t other = list[i];
      if (!concurrent(intervals_[other], intervals_[idx])) continue;
      const std::size_t v = violations_.size();
      violations_.push_back(Violation{k, node, other, idx, ts, std::nullopt});
      pending_[other].push_back(v);
      pending_[idx].push_back(v);
      found.push_back(v);
      if (intervals_[other].closed) classify(other);
    }
  }
  by_node_[node].push_back(idx);
  return found;
}

void Monitor::report_exit(ClientId client, std::uint64_t action, const VectorClock& exit, sim::TimePoint ts) {
  if (client >= p_->clients()) throw MonitorError("unknown client " + std::to_string(client));
  const auto open = open_of_client_[client];
  if (!open) {
    // Duplicate exit of an interval that is already closed.
    for (auto it = intervals_.rbegin(); it != intervals_.rend(); ++it)
      if (it->client == client && it->action == action) {
        if (it->closed && it->exit_clock == exit) return;
        break;
      }
    throw MonitorError("exit without an open interval for client " + std::to_string(client));
  }
  auto& iv = intervals_[*open];
  if (iv.action != action) throw MonitorError("exit does not match the open interval");
  const auto o = iv.entry_clock.compare(exit);
  if (o != store::Order::Before && o != store::Order::Equal)
    throw MonitorError("exit clock " + exit.to_string() + " below entry clock " + iv.entry_clock.to_string());
  iv.exit_clock = exit;
  iv.exit_ts = ts;
  iv.closed = true;
  open_of_client_[client].reset();
  classify(*open);
}

void Monitor::classify(std::size_t interval) {
  auto it = pending_.find(interval);
  if (it == pending_.end()) return;
  for (std::size_t v : it->second) {
    auto& viol = violations_[v];
    if (viol.confirmed) continue;
    const auto& a = intervals_[viol.first];
    const auto& b = intervals_[viol.second];
    if (a.closed && b.closed) viol.confirmed = concurrent(a, b);
  }
}

std::size_t Monitor::confirmed() const noexcept {
  return static_cast<std::size_t>(std::count_if(violations_.begin(), violations_.end(),
                                                [](const Violation& v) { return v.confirmed == true; }));
}

std::size_t Monitor::false_positives() const noexcept {
  return static_cast<std::size_t>(std::count_if(violations_.begin(), violations_.end(),
                                                [](const Violation& v) { return v.confirmed == false; }));
}

const char* to_string(Phase p) noexcept {
  switch (p) {
    case Phase::None: return "none";
    case Phase::Read: return "read";
    case Phase::Write: return "write";
  }
  return "?";
}

MonitorService::MonitorService(sim::Scheduler& sched, const graph::Graph& g, const graph::Partition& p,
                               sim::Duration channel_delay, sim::Duration notify_delay)
    : sched_(&sched),
      monitor_(g, p),
      channel_delay_(channel_delay),
      notify_delay_(notify_delay),
      targets_(p.clients(), nullptr) {}

void MonitorService::attach(ClientId client, AbortTarget* target) { targets_.at(client) = target; }

void MonitorService::submit_entry(ClientId client, NodeId node, std::uint64_t action, VectorClock entry) {
  sched_->after(channel_delay_, [this, client, node, action, entry = std::move(entry), ts = sched_->now()] {
    for (std::size_t v : monitor_.report_entry(client, node, action, entry, ts)) notify(v);
  });
}

void MonitorService::submit_exit(ClientId client, std::uint64_t action, VectorClock exit) {
  sched_->after(channel_delay_, [this, client, action, exit = std::move(exit), ts = sched_->now()] {
    monitor_.report_exit(client, action, exit, ts);
  });
}

void MonitorService::notify(std::size_t violation) {
  const auto& v = monitor_.violations()[violation];
  const auto& ivs = monitor_.intervals();
  const auto detect_entry = ivs[v.second].entry_ts;
  for (std::size_t which : {v.first, v.second}) {
    const ClientId c = ivs[which].client;
    const std::uint64_t action = ivs[which].action;
    sched_->after(notify_delay_, [this, violation, c, action, detect_entry] {
      Notification n;
      n.violation = violation;
      n.client = c;
      n.action = action;
      n.ts = sched_->now();
      n.phase = targets_[c] ? targets_[c]->notify_abort(action) : Phase::None;
      notifications_.push_back(n);
      latency_sum_ms_ += sim::to_ms(n.ts - detect_entry);
      ++latency_count_;
    });
  }
}

double MonitorService::mean_detection_latency_ms() const noexcept {
  return latency_count_ ? latency_sum_ms_ / static_cast<double>(latency_count_) : 0.0;
}

}  // namespace stabkv::monitor

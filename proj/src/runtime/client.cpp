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


#include "stabkv/runtime/client.hpp"

#include <algorithm>
#include <tuple>

namespace stabkv::runtime {

using monitor::Phase;
using store::Key;

namespace {

sim::Task<void> count_down_after(sim::Task<void> t, sim::Latch& latch) {
  co_await t;
  latch.count_down();
}

}  // namespace

sim::Task<void> join_all(sim::Scheduler& sched, std::vector<sim::Task<void>> tasks) {
  sim::Latch latch(tasks.size());
  for (auto& t : tasks) sched.spawn(count_down_after(std::move(t), latch));
  co_await latch.wait();
}

Client::Client(ClientId id, const graph::Graph& g, const graph::Partition& p, store::Store& st, EventLog& log,
               StopFlag& stop, ClientOptions opts, monitor::MonitorService* monitor)
    : id_(id),
      g_(&g),
      p_(&p),
      sc_(st, id, opts.clock_skew),
      log_(&log),
      stop_(&stop),
      opts_(opts),
      monitor_(monitor),
      rng_([&] {
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32), id};
        return std::mt19937_64(seq);
      }()) {
  if (monitor_) monitor_->attach(id_, this);
}

sim::Task<void> Client::run() {
  auto& sched = sc_.store().scheduler();
  const auto& nodes = p_->nodes_of(id_);
  while (!stop_->stopped) {
    const auto pass_start = sched.now();
    for (NodeId j : nodes) {
      if (stop_->stopped) break;
      co_await execute_action(j);
    }
    ++counters_.passes;
    // A pass always costs store round trips; this only guards degenerate
    // zero-latency configurations against spinning.
    if (sched.now() == pass_start) co_await sched.sleep(sim::Duration{1});
  }
}

sim::Duration Client::backoff(int attempt) {
  const auto lo = opts_.backoff_min.count();
  auto hi = lo;
  for (int i = 1; i < attempt && hi < opts_.backoff_max.count(); ++i) hi *= 2;
  hi = std::min(hi, opts_.backoff_max.count());
  std::uniform_int_distribution<sim::SimClock::rep> pick(lo, std::max(lo, hi));
  return sim::Duration{pick(rng_)};
}

sim::Task<Outcome> Client::execute_action(NodeId j) {
  visits_.push_back(j);
  if (stop_->stopped) co_return Outcome::Stopped;
  if (opts_.optimize) {
    const bool skip = co_await skip_check(j);
    if (stop_->stopped) co_return Outcome::Stopped;
    if (skip) {
      ++counters_.skips;
      co_return Outcome::Skipped;
    }
  }
  auto& sched = sc_.store().scheduler();
  for (int restart = 0;; ++restart) {
    const Outcome o = co_await attempt(j, log_->next_action());
    if (o != Outcome::Aborted) co_return o;
    ++counters_.aborts;
    if (restart + 1 > opts_.max_restarts) {
      ++counters_.abandoned;
      co_return Outcome::Aborted;
    }
    co_await sched.sleep(backoff(restart + 1));
  }
}

sim::Task<bool> Client::skip_check(NodeId j) {
  std::vector<store::GetResult> res(2);
  std::vector<sim::Task<void>> tasks;
  const Key keys[2] = {Key::meta(j), Key::nbr(j)};
  for (int i = 0; i < 2; ++i)
    tasks.push_back([](Client* self, Key k, store::GetResult& out) -> sim::Task<void> {
      ++self->counters_.gets;
      out = co_await self->sc_.get(k);
    }(this, keys[i], res[i]));
  co_await join_all(sc_.store().scheduler(), std::move(tasks));
  if (!res[0].ok || !res[1].ok || res[0].versions.empty() || res[1].versions.empty()) co_return false;
  const MetaVars meta = decode_meta(store::resolve(res[0].versions).value);
  const sim::TimePoint nbr = decode_time(store::resolve(res[1].versions).value);
  co_return should_skip(meta.nd_change, nbr, meta.last_len, opts_.epsilon);
}

sim::Task<std::vector<store::GetResult>> Client::read_neighborhood(NodeId j, std::uint64_t action) {
  const auto nbrs = g_->neighbors(j);
  std::vector<NodeId> nodes{j};
  nodes.insert(nodes.end(), nbrs.begin(), nbrs.end());
  std::vector<store::GetResult> res(nodes.size());
  std::vector<sim::Task<void>> tasks;
  tasks.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    tasks.push_back([](Client* self, NodeId n, std::uint64_t action, store::GetResult& out) -> sim::Task<void> {
      auto& sched = self->sc_.store().scheduler();
      GetRecord rec;
      rec.action = action;
      rec.client = self->id_;
      rec.node = n;
      rec.start_tick = self->log_->tick();
      rec.start_ts = sched.now();
      ++self->counters_.gets;
      out = co_await self->sc_.get(Key::program(n));
      rec.end_tick = self->log_->tick();
      rec.end_ts = sched.now();
      rec.ok = out.ok;
      if (out.ok && !out.versions.empty()) rec.hash = store::value_hash(store::resolve(out.versions).value);
      self->log_->add(std::move(rec));
    }(this, nodes[i], action, res[i]));
  counters_.nbr_gets += nbrs.size();
  co_await join_all(sc_.store().scheduler(), std::move(tasks));
  co_return res;
}

void Client::enter_cs(NodeId j, std::uint64_t action) {
  phase_ = Phase::Read;
  if (!monitor_) return;
  sc_.tick();
  monitor_->submit_entry(id_, j, action, sc_.process_clock());
  cs_open_ = true;
}

void Client::exit_cs(std::uint64_t action) {
  phase_ = Phase::None;
  if (!monitor_ || !cs_open_) return;
  sc_.tick();
  monitor_->submit_exit(id_, action, sc_.process_clock());
  cs_open_ = false;
}

Phase Client::notify_abort(std::uint64_t action) {
  if (action != current_action_) return Phase::None;
  if (phase_ == Phase::Read) abort_flags_.insert(action);
  return phase_;
}

sim::Task<Outcome> Client::attempt(NodeId j, std::uint64_t action) {
  auto& sched = sc_.store().scheduler();
  const auto t0 = sched.now();
  current_action_ = action;
  ActionRecord rec;
  rec.action = action;
  rec.client = id_;
  rec.node = j;
  rec.start_tick = log_->tick();
  rec.start_ts = t0;
  auto finish = [&](Outcome o) {
    rec.outcome = o;
    rec.end_tick = log_->tick();
    rec.end_ts = sched.now();
    log_->add(rec);
    counters_.active_time += sched.now() - t0;
    current_action_ = 0;
    phase_ = Phase::None;
    abort_flags_.erase(action);
    return o;
  };

  std::vector<NodeId> nodes{j};
  for (NodeId k : g_->neighbors(j)) nodes.push_back(k);
  std::sort(nodes.begin(), nodes.end());
  const bool locking = uses_locks(opts_.mode);

  if (locking && !co_await acquire_locks(nodes))
    co_return finish(stop_->stopped ? Outcome::Stopped : Outcome::LockFailed);
  if (stop_->stopped) co_return finish(Outcome::Stopped);

  enter_cs(j, action);
  const auto read_start = sc_.local_now();
  auto res = co_await read_neighborhood(j, action);
  if (stop_->stopped) co_return finish(Outcome::Stopped);

  auto leave = [&]() -> sim::Task<void> {
    exit_cs(action);
    if (locking) co_await release_locks(nodes);
  };

  bool all_ok = true;
  for (const auto& r : res) all_ok = all_ok && r.ok && !r.versions.empty();
  if (!all_ok) {
    ++counters_.store_failures;
    co_await leave();
    co_return finish(Outcome::StoreFailed);
  }

  programs::Neighborhood snap;
  snap.center = j;
  snap.self = programs::decode(store::resolve(res[0].versions).value);
  const auto nbrs = g_->neighbors(j);
  snap.nbrs.reserve(nbrs.size());
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    snap.nbrs.emplace_back(nbrs[i], programs::decode(store::resolve(res[i + 1].versions).value));
  const programs::ActionResult r = programs::evaluate(opts_.program, snap, &rng_);

  if (abort_flags_.count(action)) {
    co_await leave();
    co_return finish(Outcome::Aborted);
  }

  if (r.enabled) {
    if (stop_->stopped) co_return finish(Outcome::Stopped);
    phase_ = Phase::Write;
    rec.write_tick = log_->tick();
    PutRecord put;
    put.action = action;
    put.client = id_;
    put.node = j;
    put.start_tick = rec.write_tick;
    put.start_ts = sched.now();
    put.value = programs::encode(*r.write);
    ++counters_.puts;
    auto pr = co_await sc_.put(Key::program(j), put.value);
    put.end_tick = log_->tick();
    put.end_ts = sched.now();
    put.ok = pr.ok;
    put.clock = pr.version.clock;
    put.wall_ts = pr.version.wall_ts;
    log_->add(std::move(put));
    if (!pr.ok) ++counters_.store_failures;
    if (opts_.optimize && !nbrs.empty() && !stop_->stopped) {
      const std::string now_s = encode_time(sc_.local_now());
      std::vector<sim::Task<void>> tasks;
      for (NodeId k : nbrs)
        tasks.push_back([](Client* self, NodeId k, std::string v) -> sim::Task<void> {
          ++self->counters_.puts;
          co_await self->sc_.put(Key::nbr(k), std::move(v));
        }(this, k, now_s));
      co_await join_all(sched, std::move(tasks));
    }
  } else if (opts_.optimize) {
    if (stop_->stopped) co_return finish(Outcome::Stopped);
    const auto now = sc_.local_now();
    ++counters_.puts;
    co_await sc_.put(Key::meta(j), encode(MetaVars{now, now - read_start}));
  }

  if (stop_->stopped) co_return finish(Outcome::Stopped);
  co_await leave();
  ++counters_.evaluations;
  if (r.enabled)
    ++counters_.executed;
  else
    ++counters_.disabled;
  eval_times_.push_back(sched.now());
  co_return finish(r.enabled ? Outcome::Executed : Outcome::Disabled);
}

bool Client::live_claim_by_other(const std::vector<store::Version>& vs) const {
  const auto now = sc_.local_now();
  for (const auto& v : vs) {
    const LockEntry e = decode_lock(v.value);
    if (e.live(now) && e.owner != id_) return true;
  }
  return false;
}


sim::Task<Client::LockTry> Client::try_lock(NodeId n) {
  const Key key = Key::lock(n);
  ++counters_.lock_gets;
  auto r = co_await sc_.get(key);
  if (!r.ok) co_return LockTry::Failed;
  if (live_claim_by_other(r.versions)) {
    ++counters_.lock_busy;
    co_return LockTry::Busy;
  }
  if (stop_->stopped) co_return LockTry::Failed;

  const LockEntry mine{id_, sc_.local_now() + opts_.lease};
  ++counters_.lock_puts;
  auto claim = co_await sc_.put(key, encode(mine));
  if (stop_->stopped) co_return LockTry::Failed;
  LockTry result = LockTry::Failed;
  if (claim.ok) {
    // Rival claims with an earlier expiry (then lower owner id) win; later
    // ones are waited out until they withdraw.
    for (int poll = 1;; ++poll) {
      ++counters_.lock_gets;
      auto confirm = co_await sc_.get(key);
      if (stop_->stopped) co_return LockTry::Failed;
      if (!confirm.ok) break;
      bool rival = false, outranked = false;
      const auto now = sc_.local_now();
      for (const auto& v : confirm.versions) {
        const LockEntry e = decode_lock(v.value);
        if (!e.live(now) || e.owner == id_) continue;
        rival = true;
        if (std::tie(e.lease_expiry, e.owner) < std::tie(mine.lease_expiry, mine.owner)) outranked = true;
      }
      if (!rival) co_return LockTry::Acquired;
      result = LockTry::Busy;
      if (outranked || poll >= opts_.lock_attempts) break;
      co_await sc_.store().scheduler().sleep(backoff(poll));
      if (stop_->stopped) co_return LockTry::Failed;
    }
  }
  ++counters_.lock_retracts;
  // Retract with a context covering only this claim so concurrent claims
  // by others survive.
  ++counters_.lock_puts;
  co_await sc_.put(key, encode(LockEntry{}), claim.version.clock);
  co_return result;
}

sim::Task<bool> Client::acquire_locks(std::vector<NodeId> nodes) {
  auto& sched = sc_.store().scheduler();
  const auto t0 = sched.now();
  std::vector<NodeId> held;
  for (NodeId n : nodes) {
    for (int attempt = 1;; ++attempt) {
      if (stop_->stopped) co_return false;
      const LockTry t = co_await try_lock(n);
      if (t == LockTry::Acquired) {
        held.push_back(n);
        break;
      }
      if (t == LockTry::Failed || attempt >= opts_.lock_attempts) {
        if (t == LockTry::Failed)
          ++counters_.store_failures;
        else
          ++counters_.lock_failures;
        co_await release_locks(held);
        counters_.lock_time += sched.now() - t0;
        co_return false;
      }
      co_await sched.sleep(backoff(attempt));
    }
  }
  counters_.lock_time += sched.now() - t0;
  co_return true;
}

sim::Task<void> Client::release_locks(std::vector<NodeId> nodes) {
  if (stop_->stopped || nodes.empty()) co_return;
  auto& sched = sc_.store().scheduler();
  const auto t0 = sched.now();
  std::vector<sim::Task<void>> tasks;
  for (NodeId n : nodes)
    tasks.push_back([](Client* self, NodeId n) -> sim::Task<void> {
      ++self->counters_.lock_puts;
      co_await self->sc_.put(Key::lock(n), encode(LockEntry{}));
    }(this, n));
  co_await join_all(sched, std::move(tasks));
  counters_.lock_time += sched.now() - t0;
}

}  // namespace stabkv::runtime

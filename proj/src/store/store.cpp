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


#include "stabkv/store/store.hpp"

#include <sstream>
#include <stdexcept>
#include <string>

namespace stabkv::store {

Consistency classify_consistency(const StoreConfig& cfg) noexcept {
  const auto n = cfg.n_replicas, r = cfg.read_quorum, w = cfg.write_quorum;
  return (w + r > n && 2 * w > n) ? Consistency::Sequential : Consistency::Eventual;
}

void validate(const StoreConfig& cfg) {
  if (cfg.n_replicas < 1) throw std::invalid_argument("store needs at least one replica");
  if (cfg.read_quorum < 1 || cfg.read_quorum > cfg.n_replicas)
    throw std::invalid_argument("read quorum must be in 1..N");
  if (cfg.write_quorum < 1 || cfg.write_quorum > cfg.n_replicas)
    throw std::invalid_argument("write quorum must be in 1..N");
  if (cfg.timeout <= sim::Duration::zero()) throw std::invalid_argument("timeout must be positive");
}

const char* to_string(Consistency c) noexcept {
  return c == Consistency::Sequential ? "sequential" : "eventual";
}

std::vector<Version> Replica::read(const Key& k) const {
  ++reads_;
  auto it = data_.find(k);
  return it == data_.end() ? std::vector<Version>{} : it->second;
}

void Replica::write(const Key& k, const Version& v) {
  ++writes_;
  insert_pruned(data_[k], v);
}

Store::Store(sim::Scheduler& sched, StoreConfig cfg, LinkModel links)
    : sched_(&sched), cfg_(cfg), model_(links), replicas_(cfg.n_replicas) {
  validate(cfg_);
}

Store::Link& Store::link(ClientId client, ReplicaId replica, bool to_replica) {
  const std::size_t idx = (static_cast<std::size_t>(client) * cfg_.n_replicas + replica) * 2 +
                          (to_replica ? 0 : 1);
  if (idx >= links_.size()) links_.resize((static_cast<std::size_t>(client) + 1) * cfg_.n_replicas * 2);
  return links_[idx];
}

sim::TimePoint Store::schedule_on(ClientId client, ReplicaId replica, bool to_replica) {
  Link& l = link(client, replica, to_replica);
  sim::Duration d = l.override_delay.value_or(model_.base);
  if (model_.jitter_mean > sim::Duration::zero()) {
    std::exponential_distribution<double> jitter(1.0 / static_cast<double>(model_.jitter_mean.count()));
    if (!l.rng) {
      // One stream per directed link so traffic on one link never shifts
      // the delays drawn on another.
      const auto idx = (static_cast<std::uint64_t>(client) * cfg_.n_replicas + replica) * 2 + (to_replica ? 0 : 1);
      std::seed_seq seq{static_cast<std::uint32_t>(model_.seed), static_cast<std::uint32_t>(model_.seed >> 32),
                        static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
      l.rng.emplace(seq);
    }
    d += sim::Duration{static_cast<sim::SimClock::rep>(jitter(*l.rng))};
  }
  if (d < sim::Duration{1}) d = sim::Duration{1};
  const sim::TimePoint arrival = std::max(sched_->now() + d, l.last_arrival);
  l.last_arrival = arrival;
  return arrival;
}

namespace {

struct Round {
  explicit Round(sim::Scheduler& s, std::size_t n, std::size_t need)
      : signal(std::make_shared<sim::Signal>(s)), heard(n, false), need(need) {}
  std::shared_ptr<sim::Signal> signal;
  std::vector<bool> heard;
  std::size_t count = 0;
  std::size_t need;
  std::vector<Version> versions;

  void reply(ReplicaId r) {
    heard[r] = true;
    if (++count >= need) signal->fire();
  }
};

}  // namespace

sim::Task<GetResult> Store::get(ClientId client, Key key, std::optional<std::size_t> quorum) {
  ++gets_;
  const std::size_t need = quorum.value_or(cfg_.read_quorum);
  if (need < 1 || need > cfg_.n_replicas) throw std::invalid_argument("read quorum out of range");
  auto st = std::make_shared<Round>(*sched_, cfg_.n_replicas, need);

  auto send = [this, st, client, key](ReplicaId r) {
    sched_->at(schedule_on(client, r, true), [this, st, client, key, r] {
      auto vs = replicas_[r].read(key);
      sched_->at(schedule_on(client, r, false), [st, r, vs = std::move(vs)] {
        if (st->heard[r]) return;
        for (const auto& v : vs) insert_pruned(st->versions, v);
        st->reply(r);
      });
    });
  };

  for (ReplicaId r = 0; r < cfg_.n_replicas; ++r) send(r);
  for (int round = 0; round < 2 && st->count < need; ++round) {
    if (round == 1)
      for (ReplicaId r = 0; r < cfg_.n_replicas; ++r)
        if (!st->heard[r]) send(r);
    co_await st->signal->wait_until(sched_->now() + cfg_.timeout);
  }

  GetResult out;
  out.replicas_heard = st->count;
  out.ok = st->count >= need;
  out.versions = st->versions;
  if (!out.ok) ++failed_gets_;
  co_return out;
}

sim::Task<PutResult> Store::put(ClientId client, Key key, std::string value, VectorClock context,
                                VectorClock causal, sim::TimePoint wall_ts) {
  ++puts_;
  Version v;
  v.value = std::move(value);
  v.clock = std::move(context);
  v.clock.increment(client);
  v.wall_ts = wall_ts;
  v.causal = std::move(causal);

  auto st = std::make_shared<Round>(*sched_, cfg_.n_replicas, cfg_.write_quorum);
  auto shared_v = std::make_shared<const Version>(v);
  auto send = [this, st, client, key, shared_v](ReplicaId r) {
    sched_->at(schedule_on(client, r, true), [this, st, client, key, shared_v, r] {
      replicas_[r].write(key, *shared_v);
      sched_->at(schedule_on(client, r, false), [st, r] {
        if (!st->heard[r]) st->reply(r);
      });
    });
  };

  for (ReplicaId r = 0; r < cfg_.n_replicas; ++r) send(r);
  for (int round = 0; round < 2 && st->count < cfg_.write_quorum; ++round) {
    if (round == 1)
      for (ReplicaId r = 0; r < cfg_.n_replicas; ++r)
        if (!st->heard[r]) send(r);
    co_await st->signal->wait_until(sched_->now() + cfg_.timeout);
  }

  PutResult out;
  out.acks = st->count;
  out.ok = st->count >= cfg_.write_quorum;
  out.version = std::move(v);
  if (!out.ok) ++failed_puts_;
  co_return out;
}

void Store::seed(const Key& key, const Version& v) {
  for (auto& r : replicas_) r.write(key, v);
}

std::vector<Version> Store::union_versions(const Key& key) const {
  std::vector<Version> out;
  for (const auto& r : replicas_) {
    auto it = r.data().find(key);
    if (it == r.data().end()) continue;
    for (const auto& v : it->second) insert_pruned(out, v);
  }
  return out;
}

void Store::set_link_delay(ClientId client, ReplicaId replica, sim::Duration each_way) {
  set_link_delay(client, replica, each_way, each_way);
}

void Store::set_link_delay(ClientId client, ReplicaId replica, sim::Duration to_replica,
                           sim::Duration from_replica) {
  if (replica >= cfg_.n_replicas) throw std::invalid_argument("replica id out of range");
  if (to_replica < sim::Duration::zero() || from_replica < sim::Duration::zero())
    throw std::invalid_argument("link delay must be non-negative");
  link(client, replica, true).override_delay = to_replica;
  link(client, replica, false).override_delay = from_replica;
}

void Store::load_link_delays(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    long long c = 0, r = 0;
    double ms = 0;
    std::string extra;
    if (!(fields >> c)) continue;
    if (!(fields >> r >> ms) || (fields >> extra) || c < 0 || r < 0 || ms < 0)
      throw std::invalid_argument("malformed delay line " + std::to_string(lineno));
    set_link_delay(static_cast<ClientId>(c), static_cast<ReplicaId>(r), sim::from_ms(ms));
  }
}

}  // namespace stabkv::store

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

#include "stabkv/sim/scheduler.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

namespace stabkv::sim {

namespace {

// Top-level frame for a spawned activity. It suspends at both ends so the
// scheduler decides when it starts and when its frame is released.
struct Root {
  struct promise_type {
    Scheduler* sched = nullptr;
    Root get_return_object() noexcept {
      return Root{std::coroutine_handle<promise_type>::from_promise(*this)};
    }
    std::suspend_always initial_suspend() const noexcept { return {}; }
    std::suspend_always final_suspend() const noexcept { return {}; }
    void return_void() const noexcept {}
    void unhandled_exception() noexcept { sched->report_error(std::current_exception()); }
  };
  std::coroutine_handle<promise_type> handle;
};

Root run_root(Task<void> task) { co_await task; }

}  // namespace

Scheduler::~Scheduler() { shutdown(); }

void Scheduler::at(TimePoint t, std::function<void()> fn) {
  if (t < now_) t = now_;
  queue_.push(Event{t, seq_++, std::move(fn)});
}

void Scheduler::spawn(Task<void> task) {
  Root root = run_root(std::move(task));
  root.handle.promise().sched = this;
  std::coroutine_handle<> h = root.handle;
  roots_.push_back(h);
  at(now_, [h] { h.resume(); });
  if (roots_.size() % 1024 == 0) reap();
}

void Scheduler::pace(TimePoint t) {
  using namespace std::chrono;
  const auto host_now = duration_cast<nanoseconds>(steady_clock::now().time_since_epoch()).count();
  if (!realtime_started_) {
    realtime_started_ = true;
    realtime_origin_ns_ = host_now - duration_cast<nanoseconds>(now_.time_since_epoch()).count();
  }
  const auto due = realtime_origin_ns_ + duration_cast<nanoseconds>(t.time_since_epoch()).count();
  if (due > host_now) std::this_thread::sleep_for(nanoseconds(due - host_now));
}

bool Scheduler::step() {
  if (queue_.empty()) return false;
  Event ev = std::move(const_cast<Event&>(queue_.top()));
  queue_.pop();
  if (realtime_) pace(ev.time);
  now_ = ev.time;
  ++executed_;
  ev.fn();
  if (error_) {
    auto e = std::exchange(error_, nullptr);
    std::rethrow_exception(e);
  }
  return true;
}

void Scheduler::run() {
  while (step()) {
  }
  reap();
}

void Scheduler::run_until(TimePoint limit) {
  while (!queue_.empty() && queue_.top().time <= limit) step();
  if (now_ < limit) now_ = limit;
}

void Scheduler::reap() {
  std::erase_if(roots_, [](std::coroutine_handle<> h) {
    if (h.done()) {
      h.destroy();
      return true;
    }
    return false;
  });
}

std::size_t Scheduler::live_activities() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(roots_.begin(), roots_.end(), [](auto h) { return !h.done(); }));
}

void Scheduler::shutdown() {
  while (!queue_.empty()) queue_.pop();
  for (auto h : roots_) h.destroy();
  roots_.clear();
}

void Signal::Awaiter::await_suspend(std::coroutine_handle<> h) {
  Signal& s = *sig;
  s.waiter_ = h;
  s.fired_ = false;
  const std::uint64_t gen = ++s.generation_;
  s.sched_->at(deadline, [self = sig, gen] {
    if (self->waiter_ && self->generation_ == gen) {
      auto w = std::exchange(self->waiter_, {});
      self->fired_ = false;
      w.resume();
    }
  });
}

void Signal::fire() {
  if (!waiter_) return;
  auto w = std::exchange(waiter_, {});
  ++generation_;
  fired_ = true;
  w.resume();
}

void Latch::count_down() {
  if (count_ == 0) return;
  if (--count_ == 0 && waiter_) {
    auto w = std::exchange(waiter_, {});
    w.resume();
  }
}

}  // namespace stabkv::sim

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

#pragma once

#include <coroutine>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <queue>
#include <vector>

#include "stabkv/sim/clock.hpp"
#include "stabkv/sim/task.hpp"

namespace stabkv::sim {

/// Single-threaded discrete-event scheduler. Events fire in (time, insertion
/// order) so a run is a pure function of its inputs. Every simulated activity
/// (replica, client, monitor, detector) is either a callback on this queue or
/// a coroutine spawned onto it.
class Scheduler {
 public:
  Scheduler() = default;
  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;
  ~Scheduler();

  TimePoint now() const noexcept { return now_; }

  void at(TimePoint t, std::function<void()> fn);
  void after(Duration d, std::function<void()> fn) { at(now_ + d, std::move(fn)); }

  /// Starts `task` as a top-level activity at the current instant. The
  /// scheduler owns the frame until it finishes or the scheduler shuts down.
  void spawn(Task<void> task);

  /// Runs until the queue is empty. Rethrows the first exception escaping a
  /// spawned activity.
  void run();
  /// Runs events with time <= `limit`.
  void run_until(TimePoint limit);
  bool step();

  /// Drops pending events and destroys every unfinished activity. Objects
  /// referenced by activity frames must still be alive when this runs.
  void shutdown();

  std::size_t pending_events() const noexcept { return queue_.size(); }
  std::uint64_t executed_events() const noexcept { return executed_; }
  std::size_t live_activities() const noexcept;

  /// Paces simulated time against the host steady clock (wall-clock mode).
  void set_realtime(bool on) noexcept { realtime_ = on; }

  struct SleepAwaiter {
    Scheduler* sched;
    TimePoint wake;
    bool await_ready() const noexcept { return wake <= sched->now_; }
    void await_suspend(std::coroutine_handle<> h) {
      sched->at(wake, [h] { h.resume(); });
    }
    void await_resume() const noexcept {}
  };

  SleepAwaiter sleep(Duration d) { return SleepAwaiter{this, now_ + d}; }
  SleepAwaiter sleep_until(TimePoint t) { return SleepAwaiter{this, t}; }

  void report_error(std::exception_ptr e) noexcept {
    if (!error_) error_ = e;
  }

 private:
  struct Event {
    TimePoint time;
    std::uint64_t seq;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const noexcept {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  void reap();
  void pace(TimePoint t);

  TimePoint now_{};
  std::uint64_t seq_ = 0;
  std::uint64_t executed_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::vector<std::coroutine_handle<>> roots_;
  std::exception_ptr error_;
  bool realtime_ = false;
  bool realtime_started_ = false;
  std::int64_t realtime_origin_ns_ = 0;
};

/// One-waiter wake-up primitive: a coroutine waits until `fire()` or a
/// deadline, whichever comes first. Held by shared_ptr so pending timeout
/// events keep it alive.
class Signal : public std::enable_shared_from_this<Signal> {
 public:
  explicit Signal(Scheduler& sched) : sched_(&sched) {}

  struct Awaiter {
    std::shared_ptr<Signal> sig;
    TimePoint deadline;
    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<> h);
    /// True when woken by fire(), false on timeout.
    bool await_resume() const noexcept { return sig->fired_; }
  };

  Awaiter wait_until(TimePoint deadline) { return Awaiter{shared_from_this(), deadline}; }
  void fire();
  bool waiting() const noexcept { return static_cast<bool>(waiter_); }

 private:
  Scheduler* sched_;
  std::coroutine_handle<> waiter_{};
  std::uint64_t generation_ = 0;
  bool fired_ = false;
};

/// Counts down child activities; the parent awaits zero.
class Latch {
 public:
  explicit Latch(std::size_t count) : count_(count) {}
  Latch(const Latch&) = delete;
  Latch& operator=(const Latch&) = delete;

  void count_down();

  struct Awaiter {
    Latch* latch;
    bool await_ready() const noexcept { return latch->count_ == 0; }
    void await_suspend(std::coroutine_handle<> h) noexcept { latch->waiter_ = h; }
    void await_resume() const noexcept {}
  };
  Awaiter wait() noexcept { return Awaiter{this}; }

 private:
  std::size_t count_;
  std::coroutine_handle<> waiter_{};
};

}  // namespace stabkv::sim

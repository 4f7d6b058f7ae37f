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


#include <doctest.h>

#include <memory>
#include <string>
#include <vector>

#include "stabkv/sim/scheduler.hpp"

using namespace stabkv::sim;

namespace {

Task<int> add_later(Scheduler& s, Duration d, int a, int b) {
  co_await s.sleep(d);
  co_return a + b;
}

Task<void> chain(Scheduler& s, std::vector<std::string>& log) {
  log.push_back("start@" + std::to_string(s.now().time_since_epoch().count()));
  const int v = co_await add_later(s, Duration{100}, 2, 3);
  log.push_back("sum=" + std::to_string(v) + "@" + std::to_string(s.now().time_since_epoch().count()));
}

Task<void> waiter(Scheduler& s, std::shared_ptr<Signal> sig, Duration timeout, int& out) {
  const bool fired = co_await sig->wait_until(s.now() + timeout);
  out = fired ? 1 : 2;
}

Task<void> thrower(Scheduler& s) {
  co_await s.sleep(Duration{5});
  throw std::runtime_error("boom");
}

Task<void> child(Scheduler& s, Latch& latch, Duration d, int& hits) {
  co_await s.sleep(d);
  ++hits;
  latch.count_down();
}

Task<void> fan_out(Scheduler& s, int& hits, TimePoint& done_at) {
  Latch latch(3);
  s.spawn(child(s, latch, Duration{30}, hits));
  s.spawn(child(s, latch, Duration{10}, hits));
  s.spawn(child(s, latch, Duration{20}, hits));
  co_await latch.wait();
  done_at = s.now();
}

Task<int> deep(int n) {
  if (n == 0) co_return 0;
  co_return 1 + co_await deep(n - 1);
}

Task<void> run_deep(int& out) { out = co_await deep(100000); }

}  // namespace

TEST_CASE("events fire in time then insertion order") {
  Scheduler s;
  std::vector<int> order;
  s.at(TimePoint{Duration{20}}, [&] { order.push_back(3); });
  s.at(TimePoint{Duration{10}}, [&] { order.push_back(1); });
  s.at(TimePoint{Duration{10}}, [&] { order.push_back(2); });
  s.run();
  CHECK(order == std::vector<int>{1, 2, 3});
  CHECK(s.now() == TimePoint{Duration{20}});
}

TEST_CASE("nested tasks resume through sleeps") {
  Scheduler s;
  std::vector<std::string> log;
  s.spawn(chain(s, log));
  s.run();
  REQUIRE(log.size() == 2);
  CHECK(log[0] == "start@0");
  CHECK(log[1] == "sum=5@100");
  CHECK(s.live_activities() == 0);
}

TEST_CASE("signal fires before its deadline or times out") {
  Scheduler s;
  auto sig = std::make_shared<Signal>(s);
  int out = 0;
  s.spawn(waiter(s, sig, Duration{50}, out));
  s.at(TimePoint{Duration{10}}, [sig] { sig->fire(); });
  s.run();
  CHECK(out == 1);

  Scheduler t;
  auto sig2 = std::make_shared<Signal>(t);
  int out2 = 0;
  t.spawn(waiter(t, sig2, Duration{50}, out2));
  t.at(TimePoint{Duration{80}}, [sig2] { sig2->fire(); });
  t.run();
  CHECK(out2 == 2);
}

TEST_CASE("latch waits for every child") {
  Scheduler s;
  int hits = 0;
  TimePoint done{};
  s.spawn(fan_out(s, hits, done));
  s.run();
  CHECK(hits == 3);
  CHECK(done == TimePoint{Duration{30}});
}

TEST_CASE("activity errors propagate out of run") {
  Scheduler s;
  s.spawn(thrower(s));
  CHECK_THROWS_AS(s.run(), std::runtime_error);
}

TEST_CASE("deep synchronous task chains do not exhaust the stack") {
  Scheduler s;
  int out = -1;
  s.spawn(run_deep(out));
  s.run();
  CHECK(out == 100000);
}

TEST_CASE("shutdown destroys suspended activities") {
  Scheduler s;
  std::vector<std::string> log;
  s.spawn(chain(s, log));
  s.run_until(TimePoint{Duration{50}});
  CHECK(s.live_activities() == 1);
  s.shutdown();
  CHECK(s.live_activities() == 0);
  CHECK(log.size() == 1);
}

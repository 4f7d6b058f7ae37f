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

#include <optional>
#include <string>
#include <unordered_map>

#include "stabkv/store/store.hpp"

namespace stabkv::store {

/// Per-client view of the store. Tracks the read context of every key so a
/// PUT supersedes what the client last saw, and keeps the client's process
/// clock: PUTs carry it, GETs merge the writers' clocks back in.
class StoreClient {
 public:
  StoreClient(Store& store, ClientId id, sim::Duration clock_skew = sim::Duration::zero())
      : store_(&store), id_(id), skew_(clock_skew) {}

  ClientId id() const noexcept { return id_; }
  Store& store() noexcept { return *store_; }
  /// Host clock of this client: simulation time plus a fixed skew.
  sim::TimePoint local_now() const noexcept { return store_->scheduler().now() + skew_; }

  sim::Task<GetResult> get(Key key, std::optional<std::size_t> quorum = {});

  /// Context is the merged clocks last read for `key` (or `context` when
  /// given) joined with this client's own last write of `key`, which keeps
  /// the new clock unique.
  sim::Task<PutResult> put(Key key, std::string value, std::optional<VectorClock> context = {});

  const VectorClock& process_clock() const noexcept { return process_; }
  /// Local event on the process clock.
  void tick() { process_.increment(id_); }

  const VectorClock& read_context(const Key& key) const;

 private:
  Store* store_;
  ClientId id_;
  sim::Duration skew_;
  VectorClock process_;
  std::unordered_map<Key, VectorClock, KeyHash> read_ctx_;
  std::unordered_map<Key, VectorClock, KeyHash> written_;
};

}  // namespace stabkv::store

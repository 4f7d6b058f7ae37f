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


#include "stabkv/store/client.hpp"

namespace stabkv::store {

sim::Task<GetResult> StoreClient::get(Key key, std::optional<std::size_t> quorum) {
  GetResult r = co_await store_->get(id_, key, quorum);
  if (r.ok) {
    VectorClock ctx;
    for (const auto& v : r.versions) {
      ctx.merge(v.clock);
      process_.merge(v.causal);
    }
    read_ctx_[key] = std::move(ctx);
  }
  co_return r;
}

sim::Task<PutResult> StoreClient::put(Key key, std::string value, std::optional<VectorClock> context) {
  VectorClock ctx = context ? std::move(*context) : read_context(key);
  if (auto it = written_.find(key); it != written_.end()) ctx.merge(it->second);
  tick();
  PutResult r = co_await store_->put(id_, key, std::move(value), std::move(ctx), process_, local_now());
  written_[key] = r.version.clock;
  co_return r;
}

const VectorClock& StoreClient::read_context(const Key& key) const {
  static const VectorClock kEmpty;
  auto it = read_ctx_.find(key);
  return it == read_ctx_.end() ? kEmpty : it->second;
}

}  // namespace stabkv::store

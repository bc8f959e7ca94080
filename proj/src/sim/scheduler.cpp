// Copyright 2026 The brbpay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "brbpay/sim/scheduler.hpp"

#include <algorithm>

namespace brbpay {

void Scheduler::at(SimTime t, std::function<void()> fn) {
  std::uint32_t slot;
  if (free_.empty()) {
    slot = static_cast<std::uint32_t>(slots_.size());
    slots_.push_back(std::move(fn));
  } else {
    slot = free_.back();
    free_.pop_back();
    slots_[slot] = std::move(fn);
  }
  heap_.push({std::max(t, now_), next_seq_++, slot});
}

bool Scheduler::step(SimTime horizon) {
  if (heap_.empty() || heap_.top().time > horizon) return false;
  const Key k = heap_.top();
  heap_.pop();
  now_ = k.time;
  std::function<void()> fn = std::move(slots_[k.slot]);
  slots_[k.slot] = nullptr;
  free_.push_back(k.slot);
  ++executed_;
  fn();
  return true;
}

void Scheduler::run(SimTime horizon) {
  while (step(horizon)) {
  }
}

}  // namespace brbpay

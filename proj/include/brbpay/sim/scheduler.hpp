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

#ifndef BRBPAY_SIM_SCHEDULER_HPP_
#define BRBPAY_SIM_SCHEDULER_HPP_

#include <functional>
#include <queue>
#include <vector>

#include "brbpay/core/ids.hpp"

namespace brbpay {

/// Discrete-event queue. Events pop in (time, insertion order); equal
/// times keep their scheduling order, which makes runs reproducible.
class Scheduler {
 public:
  SimTime now() const { return now_; }

  /// Schedules `fn` at absolute time `t` (clamped to now).
  void at(SimTime t, std::function<void()> fn);
  void after(SimTime delay, std::function<void()> fn) { at(now_ + delay, std::move(fn)); }

  /// Runs the earliest event; false when the queue is empty or the next
  /// event lies beyond `horizon`.
  bool step(SimTime horizon);
  /// Runs events until the queue drains or time would pass `horizon`.
  void run(SimTime horizon);

  std::size_t pending() const { return heap_.size(); }
  std::uint64_t executed() const { return executed_; }

 private:
  struct Key {
    SimTime time;
    std::uint64_t seq;
    std::uint32_t slot;
    bool operator>(const Key& o) const { return time != o.time ? time > o.time : seq > o.seq; }
  };

  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t executed_ = 0;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> heap_;
  std::vector<std::function<void()>> slots_;
  std::vector<std::uint32_t> free_;
};

}  // namespace brbpay

#endif  // BRBPAY_SIM_SCHEDULER_HPP_

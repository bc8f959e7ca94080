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

#ifndef BRBPAY_BRB_GROUP_HPP_
#define BRBPAY_BRB_GROUP_HPP_

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "brbpay/brb/messages.hpp"
#include "brbpay/core/config.hpp"

namespace brbpay {

/// The replica group a broadcast instance runs in.
struct GroupView {
  std::uint64_t id = 0;
  std::vector<ReplicaId> members;
  int f = 0;

  int size() const { return static_cast<int>(members.size()); }
  int quorum() const { return byzantine_quorum(size(), f); }
  bool contains(ReplicaId r) const { return std::find(members.begin(), members.end(), r) != members.end(); }
};

/// What a protocol instance needs from its host replica. Sends to self are
/// looped back locally by the host.
class BrbTransport {
 public:
  virtual ~BrbTransport() = default;
  virtual ReplicaId self() const = 0;
  virtual SimTime now() const = 0;
  virtual void send(ReplicaId to, Message m) = 0;
  virtual void schedule(SimTime delay, std::function<void()> fn) = 0;

  void multicast(const std::vector<ReplicaId>& to, const Message& m) {
    for (auto r : to) send(r, m);
  }
};

/// Proof that some replica misbehaved, kept for audit.
struct Misbehavior {
  ReplicaId culprit;
  BatchKey key;
  std::string what;
};

}  // namespace brbpay

#endif  // BRBPAY_BRB_GROUP_HPP_

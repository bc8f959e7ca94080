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

#ifndef BRBPAY_SIM_FAULT_PLAN_HPP_
#define BRBPAY_SIM_FAULT_PLAN_HPP_

#include <map>
#include <set>
#include <string>

#include "brbpay/shard/topology.hpp"

namespace brbpay {

/// Scripted Byzantine replica behaviors.
enum class Behavior {
  kCorrect,
  kEquivocate,     // conflicting payloads under one id to different replicas; vouches for everything
  kWithhold,       // echo: Prepare to f+1 correct replicas only; sig: Commit to a chosen few
  kForgeCredit,    // sends Credit proofs for payments that never happened
  kSilent,         // ignores every message
  kForgeSnapshot,  // appends a fabricated entry to the logs it hands a joiner
};

const char* to_string(Behavior b);
Behavior parse_behavior(const std::string& s);

struct FaultPlan {
  struct Delay {
    SimTime from = 0;
    SimTime extra = 0;
  };

  std::map<ReplicaId, SimTime> crashes;
  std::map<ReplicaId, Delay> delays;
  /// Added to every point-to-point latency.
  SimTime global_extra_latency = 0;
  std::map<ReplicaId, Behavior> byzantine;
  /// Correct replicas a withholding broadcaster lets in: Prepare reach in
  /// the echo variant (-1 means f+1), Commit reach in the signature variant.
  int withhold_prepare_reach = -1;
  int withhold_commit_reach = 1;
  std::set<ClientId> double_spenders;
  /// Exploratory plans may exceed f Byzantine replicas per shard.
  bool beyond_f = false;

  bool is_byzantine(ReplicaId r) const { return byzantine.contains(r); }
  Behavior behavior(ReplicaId r) const;

  /// Throws ConfigError for unknown replicas/clients, and for more than f
  /// Byzantine or crashed replicas in a shard unless beyond_f is set.
  void validate(const ShardTopology& topology, const std::vector<ReplicaId>& extra_replicas = {}) const;
};

}  // namespace brbpay

#endif  // BRBPAY_SIM_FAULT_PLAN_HPP_

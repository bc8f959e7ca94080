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

#include "brbpay/sim/fault_plan.hpp"

#include <algorithm>

namespace brbpay {

const char* to_string(Behavior b) {
  switch (b) {
    case Behavior::kCorrect: return "correct";
    case Behavior::kEquivocate: return "equivocate";
    case Behavior::kWithhold: return "withhold";
    case Behavior::kForgeCredit: return "forge-credit";
    case Behavior::kSilent: return "silent";
    case Behavior::kForgeSnapshot: return "forge-snapshot";
  }
  return "?";
}

Behavior parse_behavior(const std::string& s) {
  for (auto b : {Behavior::kCorrect, Behavior::kEquivocate, Behavior::kWithhold, Behavior::kForgeCredit,
                 Behavior::kSilent, Behavior::kForgeSnapshot}) {
    if (s == to_string(b)) return b;
  }
  throw ConfigError("unknown Byzantine behavior '" + s + "'");
}

Behavior FaultPlan::behavior(ReplicaId r) const {
  auto it = byzantine.find(r);
  return it == byzantine.end() ? Behavior::kCorrect : it->second;
}

void FaultPlan::validate(const ShardTopology& topology, const std::vector<ReplicaId>& extra_replicas) const {
  auto known = [&](ReplicaId r) {
    return topology.shard_of(r).has_value() ||
           std::find(extra_replicas.begin(), extra_replicas.end(), r) != extra_replicas.end();
  };
  std::map<std::size_t, std::set<ReplicaId>> faulty;
  auto note = [&](ReplicaId r) {
    if (!known(r)) throw ConfigError("fault plan names unknown replica " + to_string(r));
    if (auto s = topology.shard_of(r)) faulty[*s].insert(r);
  };
  for (const auto& [r, _] : crashes) note(r);
  for (const auto& [r, _] : byzantine) note(r);
  for (const auto& [r, d] : delays) {
    if (!known(r)) throw ConfigError("fault plan names unknown replica " + to_string(r));
    if (d.extra < 0) throw ConfigError("negative delay for " + to_string(r));
  }
  for (auto c : double_spenders) {
    if (!topology.knows(c)) throw ConfigError("fault plan names unknown client " + to_string(c));
  }
  if (beyond_f) return;
  for (const auto& [s, set] : faulty) {
    if (static_cast<int>(set.size()) > topology.shard(s).f) {
      throw ConfigError("shard " + std::to_string(s) + " has " + std::to_string(set.size()) +
                        " faulty replicas, more than f=" + std::to_string(topology.shard(s).f));
    }
  }
}

}  // namespace brbpay

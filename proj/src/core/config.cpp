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

#include "brbpay/core/config.hpp"

#include <set>
#include <string>

namespace brbpay {

int quorum_size(int n, int f) {
  if (f < 0 || n != 3 * f + 1) {
    throw ConfigError("quorum_size needs n == 3f+1, got n=" + std::to_string(n) + " f=" + std::to_string(f));
  }
  return 2 * f + 1;
}

int certificate_threshold(int f) {
  if (f < 0) throw ConfigError("negative fault bound");
  return f + 1;
}

int byzantine_quorum(int n, int f) {
  if (f < 0 || n < 3 * f + 1) {
    throw ConfigError("group of " + std::to_string(n) + " cannot tolerate f=" + std::to_string(f));
  }
  return (n + f + 2) / 2;
}

const char* to_string(BrbVariant v) { return v == BrbVariant::kEcho ? "echo" : "sig"; }

void SystemConfig::validate() const {
  if (replicas.empty()) throw ConfigError("no replicas configured");
  std::set<ReplicaId> all(replicas.begin(), replicas.end());
  if (all.size() != replicas.size()) throw ConfigError("duplicate replica id");
  if (shards.empty()) throw ConfigError("no shards configured");

  std::set<ReplicaId> covered;
  for (std::size_t s = 0; s < shards.size(); ++s) {
    const auto& shard = shards[s];
    if (static_cast<int>(shard.members.size()) != 3 * shard.f + 1) {
      throw ConfigError("shard " + std::to_string(s) + " has " + std::to_string(shard.members.size()) +
                        " members, expected 3f+1 with f=" + std::to_string(shard.f));
    }
    for (auto r : shard.members) {
      if (!all.contains(r)) throw ConfigError("shard member " + to_string(r) + " is not a replica");
      if (!covered.insert(r).second) throw ConfigError("replica " + to_string(r) + " in two shards");
    }
  }
  if (covered.size() != all.size()) throw ConfigError("shards do not cover every replica");

  for (const auto& [client, rep] : representative_of) {
    if (!all.contains(rep)) {
      throw ConfigError("representative " + to_string(rep) + " of " + to_string(client) + " is not a replica");
    }
    if (!initial_balances.contains(client)) throw ConfigError("no initial balance for " + to_string(client));
  }
  for (const auto& [client, _] : initial_balances) {
    if (!representative_of.contains(client)) throw ConfigError("no representative for " + to_string(client));
  }
}

std::vector<ClientId> SystemConfig::clients() const {
  std::vector<ClientId> out;
  out.reserve(representative_of.size());
  for (const auto& [c, _] : representative_of) out.push_back(c);
  return out;
}

Amount SystemConfig::total_initial() const {
  Amount sum = 0;
  for (const auto& [_, a] : initial_balances) sum += a;
  return sum;
}

SystemConfig SystemConfig::uniform(int n_shards, int f, int n_clients, Amount initial_balance) {
  if (n_shards < 1) throw ConfigError("need at least one shard");
  SystemConfig cfg;
  cfg.f = f;
  const int m = 3 * f + 1;
  for (int s = 0; s < n_shards; ++s) {
    ShardSpec shard;
    shard.f = f;
    for (int i = 0; i < m; ++i) {
      ReplicaId r{static_cast<std::uint32_t>(s * m + i)};
      shard.members.push_back(r);
      cfg.replicas.push_back(r);
    }
    cfg.shards.push_back(std::move(shard));
  }
  for (int c = 0; c < n_clients; ++c) {
    const auto& shard = cfg.shards[static_cast<std::size_t>(c % n_shards)];
    ClientId id{static_cast<std::uint32_t>(c)};
    cfg.representative_of[id] = shard.members[static_cast<std::size_t>((c / n_shards) % m)];
    cfg.initial_balances[id] = initial_balance;
  }
  return cfg;
}

SystemConfig SystemConfig::single_shard(int n, int f, int n_clients, Amount initial_balance) {
  quorum_size(n, f);
  return uniform(1, f, n_clients, initial_balance);
}

}  // namespace brbpay

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

#ifndef BRBPAY_CORE_CONFIG_HPP_
#define BRBPAY_CORE_CONFIG_HPP_

#include <map>
#include <vector>

#include "brbpay/core/ids.hpp"

namespace brbpay {

/// 2f+1 for a group of exactly 3f+1 replicas. Throws ConfigError otherwise.
int quorum_size(int n, int f);

/// f+1: the number of distinct credit proofs that make a certificate.
int certificate_threshold(int f);

/// ceil((n+f+1)/2): smallest quorum size such that any two quorums of an
/// n >= 3f+1 group intersect in at least f+1 members. Equals 2f+1 when
/// n == 3f+1. Throws ConfigError if n < 3f+1.
int byzantine_quorum(int n, int f);

struct ShardSpec {
  std::vector<ReplicaId> members;
  int f = 0;
};

enum class BrbVariant {
  kEcho,  // MAC-authenticated echo/ready broadcast with totality; balance-wait approval
  kSig,   // signature-based linear broadcast with credit dependencies; shardable
};

const char* to_string(BrbVariant v);

struct SystemConfig {
  std::vector<ReplicaId> replicas;
  int f = 1;
  std::vector<ShardSpec> shards;
  std::map<ClientId, ReplicaId> representative_of;
  std::map<ClientId, Amount> initial_balances;

  /// Every structural invariant; throws ConfigError with the first breach.
  void validate() const;

  std::vector<ClientId> clients() const;
  Amount total_initial() const;

  /// `n_shards` shards of 3f+1 replicas each. Client c lives in shard
  /// c % n_shards and is represented round-robin within its shard.
  static SystemConfig uniform(int n_shards, int f, int n_clients, Amount initial_balance);
  /// Single shard of `n` replicas with fault bound f (n must be 3f+1).
  static SystemConfig single_shard(int n, int f, int n_clients, Amount initial_balance);
};

}  // namespace brbpay

#endif  // BRBPAY_CORE_CONFIG_HPP_

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

#ifndef BRBPAY_SHARD_TOPOLOGY_HPP_
#define BRBPAY_SHARD_TOPOLOGY_HPP_

#include <optional>
#include <unordered_map>
#include <vector>

#include "brbpay/core/config.hpp"
#include "brbpay/core/payment.hpp"
#include "brbpay/crypto/crypto.hpp"

namespace brbpay {

class UnknownClientError : public Error {
 public:
  using Error::Error;
};

/// Immutable shard layout: which replicas form each shard and where every
/// client's log lives. A client's shard is its representative's shard.
class ShardTopology {
 public:
  explicit ShardTopology(const SystemConfig& config);

  std::size_t shard_count() const { return shards_.size(); }
  const ShardSpec& shard(std::size_t s) const { return shards_.at(s); }

  std::optional<std::size_t> shard_of(ReplicaId r) const;
  /// Throws UnknownClientError.
  std::size_t shard_of(ClientId c) const;
  ReplicaId representative_of(ClientId c) const;
  bool knows(ClientId c) const { return clients_.contains(c); }
  bool is_member(std::size_t shard, ReplicaId r) const;

  /// The replicas that run the broadcast for a payment by `spender`: always
  /// the spender's own shard, wherever the beneficiary lives.
  const std::vector<ReplicaId>& route_broadcast(ClientId spender) const;

  bool cross_shard(const PaymentTuple& t) const { return shard_of(t.id.spender) != shard_of(t.beneficiary); }

  /// Copy with `joiner` added to `shard` and that shard's f replaced.
  ShardTopology with_member(std::size_t shard, ReplicaId joiner, int f) const;

 private:
  struct ClientPlacement {
    std::size_t shard = 0;
    ReplicaId representative;
  };

  std::vector<ShardSpec> shards_;
  std::unordered_map<ReplicaId, std::size_t> replica_shard_;
  std::unordered_map<ClientId, ClientPlacement> clients_;
};

/// True iff at least f+1 distinct signers (f of the spender's shard) from the
/// spender's shard each hold a valid proof covering the certificate's tuple.
bool verify_cross_shard_certificate(const DependencyCertificate& cert, const ShardTopology& topology,
                                    const KeyRegistry& keys);

/// Checks one credit proof: signer is in the spender shard of every tuple and
/// the signature verifies.
bool verify_credit_proof(const CreditProof& proof, const ShardTopology& topology, const KeyRegistry& keys);

}  // namespace brbpay

#endif  // BRBPAY_SHARD_TOPOLOGY_HPP_

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

#include "brbpay/shard/topology.hpp"

#include <algorithm>
#include <set>

namespace brbpay {

ShardTopology::ShardTopology(const SystemConfig& config) : shards_(config.shards) {
  for (std::size_t s = 0; s < shards_.size(); ++s) {
    for (auto r : shards_[s].members) replica_shard_[r] = s;
  }
  for (const auto& [client, rep] : config.representative_of) {
    auto it = replica_shard_.find(rep);
    if (it == replica_shard_.end()) throw ConfigError("representative " + to_string(rep) + " has no shard");
    clients_[client] = {it->second, rep};
  }
}

std::optional<std::size_t> ShardTopology::shard_of(ReplicaId r) const {
  auto it = replica_shard_.find(r);
  if (it == replica_shard_.end()) return std::nullopt;
  return it->second;
}

std::size_t ShardTopology::shard_of(ClientId c) const {
  auto it = clients_.find(c);
  if (it == clients_.end()) throw UnknownClientError("unknown client " + to_string(c));
  return it->second.shard;
}

ReplicaId ShardTopology::representative_of(ClientId c) const {
  auto it = clients_.find(c);
  if (it == clients_.end()) throw UnknownClientError("unknown client " + to_string(c));
  return it->second.representative;
}

bool ShardTopology::is_member(std::size_t shard, ReplicaId r) const {
  auto it = replica_shard_.find(r);
  return it != replica_shard_.end() && it->second == shard;
}

const std::vector<ReplicaId>& ShardTopology::route_broadcast(ClientId spender) const {
  return shards_[shard_of(spender)].members;
}

ShardTopology ShardTopology::with_member(std::size_t shard, ReplicaId joiner, int f) const {
  ShardTopology out = *this;
  auto& members = out.shards_.at(shard).members;
  if (std::find(members.begin(), members.end(), joiner) == members.end()) members.push_back(joiner);
  out.shards_[shard].f = f;
  out.replica_shard_[joiner] = shard;
  return out;
}

bool verify_credit_proof(const CreditProof& proof, const ShardTopology& topology, const KeyRegistry& keys) {
  if (proof.tuples.empty()) return false;
  for (const auto& t : proof.tuples) {
    if (!topology.knows(t.id.spender) || !topology.is_member(topology.shard_of(t.id.spender), proof.signer)) {
      return false;
    }
  }
  return keys.verify(Principal::of(proof.signer), credit_signing_bytes(proof.tuples), proof.sig);
}

bool verify_cross_shard_certificate(const DependencyCertificate& cert, const ShardTopology& topology,
                                    const KeyRegistry& keys) {
  if (!topology.knows(cert.tuple.id.spender)) return false;
  const auto source = topology.shard_of(cert.tuple.id.spender);
  std::set<ReplicaId> signers;
  for (const auto& proof : cert.proofs) {
    if (!proof || !proof->covers(cert.tuple)) continue;
    if (!topology.is_member(source, proof->signer) || signers.contains(proof->signer)) continue;
    if (!keys.verify(Principal::of(proof->signer), credit_signing_bytes(proof->tuples), proof->sig)) continue;
    signers.insert(proof->signer);
  }
  return static_cast<int>(signers.size()) >= certificate_threshold(topology.shard(source).f);
}

}  // namespace brbpay

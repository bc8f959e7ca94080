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


#include <gtest/gtest.h>

#include "brbpay/bench/workload_gen.hpp"
#include "brbpay/shard/topology.hpp"
#include "local_net.hpp"

namespace brbpay {
namespace {

using testing::payment;

std::shared_ptr<const CreditProof> proof_by(const KeyRegistry& keys, ReplicaId signer, std::vector<PaymentTuple> tuples) {
  auto p = std::make_shared<CreditProof>();
  p->signer = signer;
  p->tuples = std::move(tuples);
  p->sig = keys.sign(Principal::of(signer), credit_signing_bytes(p->tuples));
  return p;
}

class ShardTest : public ::testing::Test {
 protected:
  ShardTest()
      : config_(SystemConfig::uniform(2, 1, 6, 100)),
        topology_(config_),
        keys_(CryptoBackend::kSim, config_.replicas, config_.clients()) {}

  SystemConfig config_;
  ShardTopology topology_;
  KeyRegistry keys_;
};

TEST_F(ShardTest, ClientsLiveWithTheirRepresentative) {
  for (auto c : config_.clients()) {
    const ReplicaId rep = topology_.representative_of(c);
    EXPECT_EQ(topology_.shard_of(c), topology_.shard_of(rep).value());
    EXPECT_EQ(topology_.shard_of(c), c.value % 2);
  }
  EXPECT_FALSE(topology_.shard_of(ReplicaId{42}).has_value());
  EXPECT_THROW(topology_.shard_of(ClientId{42}), UnknownClientError);
}

TEST_F(ShardTest, BroadcastStaysInSpenderShard) {
  const auto& route = topology_.route_broadcast(ClientId{0});
  EXPECT_EQ(route, topology_.shard(0).members);
  EXPECT_EQ(topology_.route_broadcast(ClientId{1}), topology_.shard(1).members);
  EXPECT_TRUE(topology_.cross_shard(payment(0, 0, 1, 5).tuple()));
  EXPECT_FALSE(topology_.cross_shard(payment(0, 0, 2, 5).tuple()));
}

TEST_F(ShardTest, CertificateNeedsSourceShardSigners) {
  const PaymentTuple t = payment(0, 0, 1, 25).tuple();  // shard 0 -> shard 1
  const auto& src = topology_.shard(0).members;
  const auto& dst = topology_.shard(1).members;

  DependencyCertificate good{t, {proof_by(keys_, src[0], {t}), proof_by(keys_, src[3], {t})}};
  EXPECT_TRUE(verify_cross_shard_certificate(good, topology_, keys_));

  DependencyCertificate foreign{t, {proof_by(keys_, src[0], {t}), proof_by(keys_, dst[0], {t})}};
  EXPECT_FALSE(verify_cross_shard_certificate(foreign, topology_, keys_));
  EXPECT_FALSE(verify_credit_proof(*proof_by(keys_, dst[0], {t}), topology_, keys_));

  DependencyCertificate repeated{t, {proof_by(keys_, src[1], {t}), proof_by(keys_, src[1], {t})}};
  EXPECT_FALSE(verify_cross_shard_certificate(repeated, topology_, keys_));

  const PaymentTuple other = payment(0, 1, 1, 25).tuple();
  DependencyCertificate wrong_tuple{t, {proof_by(keys_, src[0], {t}), proof_by(keys_, src[1], {other})}};
  EXPECT_FALSE(verify_cross_shard_certificate(wrong_tuple, topology_, keys_));
}

TEST_F(ShardTest, BatchedProofCoversEachTuple) {
  const PaymentTuple a = payment(0, 0, 1, 25).tuple();
  const PaymentTuple b = payment(2, 0, 3, 7).tuple();
  const auto& src = topology_.shard(0).members;
  auto p0 = proof_by(keys_, src[0], {a, b});
  auto p1 = proof_by(keys_, src[2], {b, a});
  EXPECT_TRUE(p0->covers(b));
  EXPECT_FALSE(p0->covers(payment(0, 0, 1, 26).tuple()));
  EXPECT_TRUE(verify_cross_shard_certificate({b, {p0, p1}}, topology_, keys_));
  CreditProof tampered = *p0;
  tampered.tuples[0].amount = 2500;
  EXPECT_FALSE(verify_credit_proof(tampered, topology_, keys_));
}

TEST_F(ShardTest, JoinerExtendsOneShard) {
  const ShardTopology grown = topology_.with_member(1, ReplicaId{8}, 1);
  EXPECT_EQ(grown.shard(1).members.size(), 5u);
  EXPECT_EQ(grown.shard(0).members.size(), 4u);
  EXPECT_EQ(grown.shard_of(ReplicaId{8}), std::optional<std::size_t>(1));
  EXPECT_FALSE(topology_.shard_of(ReplicaId{8}).has_value());
}

TEST(SmallbankLayout, AccountsShareShardAndRepresentative) {
  const SystemConfig cfg = smallbank_system(12, 3, 1, 50);
  EXPECT_NO_THROW(cfg.validate());
  const ShardTopology t(cfg);
  for (int i = 0; i < 12; ++i) {
    EXPECT_EQ(owner_of(checking_account(i)), i);
    EXPECT_EQ(owner_of(savings_account(i)), i);
    EXPECT_EQ(t.shard_of(checking_account(i)), static_cast<std::size_t>(i % 3));
    EXPECT_EQ(t.representative_of(checking_account(i)), t.representative_of(savings_account(i)));
  }
}

}  // namespace
}  // namespace brbpay

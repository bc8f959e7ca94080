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

#include <random>

#include "brbpay/brb/fifo_gate.hpp"
#include "brbpay/engine/client.hpp"
#include "brbpay/engine/payment_engine.hpp"
#include "brbpay/shard/topology.hpp"
#include "brbpay/sim/oracle.hpp"
#include "local_net.hpp"

namespace brbpay {
namespace {

using testing::payment;

class EngineTest : public ::testing::Test {
 protected:
  EngineTest() : EngineTest(SystemConfig::single_shard(4, 1, 4, 100)) {}
  explicit EngineTest(SystemConfig cfg)
      : config_(std::move(cfg)),
        topology_(std::make_shared<ShardTopology>(config_)),
        keys_(CryptoBackend::kSim, config_.replicas, config_.clients()) {}

  PaymentEngine make(ReplicaId self, BrbVariant v) {
    return PaymentEngine(self, topology_, keys_, config_.initial_balances, {v, true});
  }

  std::shared_ptr<const CreditProof> proof(ReplicaId signer, std::vector<PaymentTuple> tuples) {
    auto p = std::make_shared<CreditProof>();
    p->signer = signer;
    p->tuples = std::move(tuples);
    p->sig = keys_.sign(Principal::of(signer), credit_signing_bytes(p->tuples));
    return p;
  }

  Signature client_sig(const Payment& p) {
    return keys_.sign(Principal::of(p.spender()), submission_signing_bytes(p));
  }

  SystemConfig config_;
  std::shared_ptr<const ShardTopology> topology_;
  KeyRegistry keys_;
};

TEST_F(EngineTest, EchoSettleMovesFunds) {
  PaymentEngine e = make(ReplicaId{1}, BrbVariant::kEcho);
  std::vector<Payment> settled;
  e.on_settle = [&](const Payment& p) { settled.push_back(p); };
  e.deliver(payment(0, 0, 1, 30));
  EXPECT_EQ(e.account(ClientId{0}).balance, 70u);
  EXPECT_EQ(e.account(ClientId{1}).balance, 130u);
  EXPECT_EQ(e.account(ClientId{0}).next_seq, 1u);
  EXPECT_EQ(e.log(ClientId{0}).size(), 1u);
  EXPECT_EQ(settled.size(), 1u);
  EXPECT_EQ(e.balance_sum(), 400u);
}

TEST_F(EngineTest, EchoWaitsForFunds) {
  PaymentEngine e = make(ReplicaId{1}, BrbVariant::kEcho);
  e.deliver(payment(0, 0, 1, 150));
  e.deliver(payment(0, 1, 2, 1));
  EXPECT_EQ(e.account(ClientId{0}).next_seq, 0u);
  EXPECT_EQ(e.blocked(), 2u);
  e.deliver(payment(3, 0, 0, 60));
  EXPECT_EQ(e.account(ClientId{0}).next_seq, 2u);
  EXPECT_EQ(e.account(ClientId{0}).balance, 9u);
  EXPECT_EQ(e.blocked(), 0u);
  EXPECT_EQ(e.balance_sum(), 400u);
}

TEST_F(EngineTest, EchoChainOfUnblocks) {
  PaymentEngine e = make(ReplicaId{0}, BrbVariant::kEcho);
  e.deliver(payment(2, 0, 3, 180));  // needs c1's payment
  e.deliver(payment(1, 0, 2, 150));  // needs c0's payment
  EXPECT_EQ(e.blocked(), 2u);
  e.deliver(payment(0, 0, 1, 50));
  EXPECT_EQ(e.blocked(), 0u);
  EXPECT_EQ(e.account(ClientId{3}).balance, 280u);
  EXPECT_EQ(e.settled_count(), 3u);
}

TEST_F(EngineTest, EchoIgnoresReplays) {
  PaymentEngine e = make(ReplicaId{0}, BrbVariant::kEcho);
  e.deliver(payment(0, 0, 1, 10));
  e.deliver(payment(0, 0, 1, 10));
  EXPECT_EQ(e.account(ClientId{0}).balance, 90u);
  EXPECT_EQ(e.settled_count(), 1u);
}

TEST_F(EngineTest, SubmitStatuses) {
  PaymentEngine e = make(ReplicaId{0}, BrbVariant::kEcho);
  const ReplicaId rep0 = topology_->representative_of(ClientId{0});
  ASSERT_EQ(rep0, ReplicaId{0});
  Client alice(ClientId{0}, rep0);
  const SubmitMsg first = alice.pay(ClientId{1}, 10, keys_);
  EXPECT_EQ(e.submit(first.payment, first.client_sig), SubmitStatus::kAccepted);
  EXPECT_EQ(e.submit(first.payment, first.client_sig), SubmitStatus::kOutOfOrder);
  const SubmitMsg second = alice.pay(ClientId{1}, 10, keys_);
  Signature stolen = client_sig(payment(1, 1, 0, 10));
  EXPECT_EQ(e.submit(second.payment, stolen), SubmitStatus::kBadSignature);
  const Payment stranger = payment(9, 0, 1, 1);
  EXPECT_EQ(e.submit(stranger, Signature{}), SubmitStatus::kUnknownClient);
  const Payment elsewhere = payment(1, 0, 0, 1);
  EXPECT_EQ(e.submit(elsewhere, client_sig(elsewhere)), SubmitStatus::kWrongRepresentative);
  EXPECT_EQ(e.submit(second.payment, second.client_sig), SubmitStatus::kAccepted);
  const auto ready = e.take_ready();
  ASSERT_EQ(ready.size(), 2u);
  EXPECT_EQ(ready[1].id.seq, 1u);
  EXPECT_TRUE(e.take_ready().empty());
  EXPECT_EQ(e.expected(ClientId{0}), 2u);
  EXPECT_EQ(e.released(ClientId{0}).size(), 2u);
}

TEST_F(EngineTest, ConflictingSubmissionKeepsFirst) {
  PaymentEngine e = make(ReplicaId{0}, BrbVariant::kEcho);
  Client alice(ClientId{0}, ReplicaId{0});
  const SubmitMsg a = alice.pay(ClientId{1}, 10, keys_);
  const SubmitMsg b = alice.conflicting(a, ClientId{2}, keys_);
  EXPECT_EQ(b.payment.id, a.payment.id);
  EXPECT_EQ(e.submit(a.payment, a.client_sig), SubmitStatus::kAccepted);
  EXPECT_EQ(e.submit(b.payment, b.client_sig), SubmitStatus::kOutOfOrder);
  EXPECT_EQ(e.take_ready().at(0).beneficiary, ClientId{1});
}

TEST_F(EngineTest, SigSettleDebitsOnly) {
  PaymentEngine e = make(ReplicaId{2}, BrbVariant::kSig);
  e.deliver(payment(0, 0, 1, 30));
  EXPECT_EQ(e.account(ClientId{0}).balance, 70u);
  EXPECT_EQ(e.account(ClientId{1}).balance, 100u);
  const auto credits = e.take_credits();
  ASSERT_EQ(credits.size(), 1u);
  EXPECT_EQ(credits[0].to, topology_->representative_of(ClientId{1}));
  EXPECT_TRUE(credits[0].proof->covers(payment(0, 0, 1, 30).tuple()));
  EXPECT_TRUE(verify_credit_proof(*credits[0].proof, *topology_, keys_));
}

TEST_F(EngineTest, SigRepresentativeHoldsUnfundedSubmissions) {
  const ClientId bob{1};
  const ReplicaId rep = topology_->representative_of(bob);
  PaymentEngine e = make(rep, BrbVariant::kSig);
  const Payment big = payment(1, 0, 2, 160);
  EXPECT_EQ(e.submit(big, client_sig(big)), SubmitStatus::kAccepted);
  EXPECT_FALSE(e.has_ready());
  EXPECT_EQ(e.held_submissions(), 1u);

  const PaymentTuple incoming = payment(0, 0, 1, 60).tuple();
  e.on_credit(proof(ReplicaId{0}, {incoming}));
  EXPECT_EQ(e.pending_credit(bob), 0u);
  e.on_credit(proof(ReplicaId{0}, {incoming}));  // same signer twice
  EXPECT_FALSE(e.has_ready());
  e.on_credit(proof(ReplicaId{3}, {incoming}));
  ASSERT_TRUE(e.has_ready());
  const auto ready = e.take_ready();
  ASSERT_EQ(ready.size(), 1u);
  ASSERT_EQ(ready[0].deps.size(), 1u);
  EXPECT_EQ(ready[0].deps[0].tuple, incoming);
  EXPECT_TRUE(verify_cross_shard_certificate(ready[0].deps[0], *topology_, keys_));
}

TEST_F(EngineTest, SigMaterializesCertificateOnce) {
  PaymentEngine e = make(ReplicaId{3}, BrbVariant::kSig);
  std::vector<PaymentId> materialized;
  e.on_materialize = [&](ClientId, const DependencyCertificate& d) { materialized.push_back(d.tuple.id); };
  DependencyCertificate cert;
  cert.tuple = payment(0, 0, 1, 60).tuple();
  cert.proofs = {proof(ReplicaId{0}, {cert.tuple}), proof(ReplicaId{2}, {cert.tuple})};
  Payment p = payment(1, 0, 2, 150);
  p.deps = {cert};
  Payment again = payment(1, 1, 2, 10);
  again.deps = {cert};
  e.deliver(p);
  e.deliver(again);
  EXPECT_EQ(e.account(ClientId{1}).balance, 0u);
  EXPECT_EQ(e.account(ClientId{1}).used_deps.size(), 1u);
  EXPECT_EQ(materialized.size(), 1u);
  EXPECT_EQ(e.account(ClientId{1}).next_seq, 2u);
}

TEST_F(EngineTest, SigRejectsThinCertificates) {
  PaymentEngine e = make(ReplicaId{3}, BrbVariant::kSig);
  DependencyCertificate cert;
  cert.tuple = payment(0, 0, 1, 60).tuple();
  cert.proofs = {proof(ReplicaId{0}, {cert.tuple}), proof(ReplicaId{0}, {cert.tuple})};
  Payment p = payment(1, 0, 2, 150);
  p.deps = {cert};
  e.deliver(p);
  EXPECT_EQ(e.account(ClientId{1}).next_seq, 0u);
  EXPECT_EQ(e.rejected_deps(), 1u);
  EXPECT_EQ(e.blocked(), 1u);
}

TEST_F(EngineTest, SigRejectsCertificatesForSomeoneElse) {
  PaymentEngine e = make(ReplicaId{3}, BrbVariant::kSig);
  DependencyCertificate cert;
  cert.tuple = payment(0, 0, 2, 60).tuple();  // pays c2, not the spender below
  cert.proofs = {proof(ReplicaId{0}, {cert.tuple}), proof(ReplicaId{1}, {cert.tuple})};
  Payment p = payment(1, 0, 3, 150);
  p.deps = {cert};
  e.deliver(p);
  EXPECT_EQ(e.account(ClientId{1}).next_seq, 0u);
  EXPECT_EQ(e.rejected_deps(), 1u);
}

TEST_F(EngineTest, EchoRefusesShardedTopology) {
  const SystemConfig two = SystemConfig::uniform(2, 1, 4, 10);
  auto topology = std::make_shared<ShardTopology>(two);
  KeyRegistry keys(CryptoBackend::kSim, two.replicas, two.clients());
  EXPECT_THROW(PaymentEngine(ReplicaId{0}, topology, keys, two.initial_balances, {BrbVariant::kEcho, true}),
               ConfigError);
}

// Settling is order-insensitive across spenders: whatever interleaving the
// network produces, the final state is the sequential fixpoint.
TEST_F(EngineTest, EchoMatchesOracleUnderRandomInterleavings) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    std::mt19937_64 rng(seed);
    std::map<ClientId, SeqNo> next;
    std::vector<Payment> all;
    const int count = 5 + static_cast<int>(rng() % 40);
    for (int i = 0; i < count; ++i) {
      const auto s = static_cast<std::uint32_t>(rng() % 4);
      auto b = static_cast<std::uint32_t>(rng() % 3);
      if (b >= s) ++b;
      all.push_back(payment(s, next[ClientId{s}]++, b, 1 + rng() % 120));
    }
    std::vector<Payment> shuffled = all;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);

    PaymentEngine e = make(ReplicaId{1}, BrbVariant::kEcho);
    FifoGate gate;
    for (const auto& p : shuffled) {
      for (const auto& q : gate.offer(p)) e.deliver(q);
    }
    const OracleLedger want = oracle_fixpoint(all, config_.initial_balances);
    for (auto c : e.clients()) {
      EXPECT_EQ(e.account(c).balance, want.balances.at(c)) << "seed " << seed << " " << to_string(c);
      EXPECT_EQ(e.account(c).next_seq, want.next_seq.at(c)) << "seed " << seed << " " << to_string(c);
    }
    EXPECT_EQ(e.balance_sum(), config_.total_initial());
  }
}

}  // namespace
}  // namespace brbpay

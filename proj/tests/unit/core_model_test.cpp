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

#include "brbpay/core/config.hpp"
#include "brbpay/core/payment.hpp"
#include "brbpay/crypto/crypto.hpp"
#include "local_net.hpp"

namespace brbpay {
namespace {

using testing::payment;

TEST(Quorum, SizesForOptimalGroups) {
  EXPECT_EQ(quorum_size(4, 1), 3);
  EXPECT_EQ(quorum_size(7, 2), 5);
  EXPECT_EQ(quorum_size(100, 33), 67);
  EXPECT_EQ(quorum_size(1, 0), 1);
}

TEST(Quorum, RejectsNonOptimalGroups) {
  EXPECT_THROW(quorum_size(5, 1), ConfigError);
  EXPECT_THROW(quorum_size(3, 1), ConfigError);
}

TEST(Quorum, CertificateThreshold) {
  EXPECT_EQ(certificate_threshold(0), 1);
  EXPECT_EQ(certificate_threshold(1), 2);
  EXPECT_EQ(certificate_threshold(33), 34);
}

TEST(Quorum, ByzantineQuorumIntersects) {
  // any two quorums share at least f+1 members
  for (int f = 0; f <= 5; ++f) {
    for (int n = 3 * f + 1; n <= 3 * f + 6; ++n) {
      const int q = byzantine_quorum(n, f);
      EXPECT_GE(2 * q - n, f + 1) << "n=" << n << " f=" << f;
      EXPECT_LE(q, n - f) << "n=" << n << " f=" << f;
    }
    EXPECT_EQ(byzantine_quorum(3 * f + 1, f), 2 * f + 1);
  }
  EXPECT_EQ(byzantine_quorum(5, 1), 4);
  EXPECT_THROW(byzantine_quorum(3, 1), ConfigError);
}

TEST(XLog, AppendsInSequence) {
  XLog log(ClientId{1});
  log.append(payment(1, 0, 2, 5));
  log.append(payment(1, 1, 3, 7));
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[1].beneficiary, ClientId{3});
  for (std::size_t k = 0; k < log.size(); ++k) EXPECT_EQ(log[k].id.seq, k);
}

TEST(XLog, RejectsGapsAndForeignEntries) {
  XLog log(ClientId{1});
  EXPECT_THROW(log.append(payment(1, 1, 2, 5)), XLogGapError);
  EXPECT_THROW(log.append(payment(2, 0, 1, 5)), XLogOwnerError);
  log.append(payment(1, 0, 2, 5));
  EXPECT_THROW(log.append(payment(1, 0, 3, 5)), XLogGapError);
  EXPECT_EQ(log.size(), 1u);
}

TEST(XLog, ValueAppendLeavesOriginal) {
  const XLog empty(ClientId{4});
  const XLog one = append_to_xlog(empty, payment(4, 0, 1, 1));
  EXPECT_EQ(empty.size(), 0u);
  EXPECT_EQ(one.size(), 1u);
}

TEST(PaymentWire, SubmissionIsAboutOneHundredBytes) {
  KeyRegistry keys(CryptoBackend::kEcdsaP256, {}, testing::clients(2));
  const Payment p = payment(0, 3, 1, 250);
  const Signature sig = keys.sign(Principal::of(ClientId{0}), submission_signing_bytes(p));
  const Bytes wire = encode_submission(p, sig);
  EXPECT_EQ(wire.size(), 101u);
  auto [back, back_sig] = decode_submission(wire);
  EXPECT_TRUE(same_payload(back, p));
  EXPECT_EQ(back_sig, sig);
  EXPECT_TRUE(keys.verify(Principal::of(ClientId{0}), submission_signing_bytes(back), back_sig));
}

TEST(PaymentWire, TruncatedSubmissionFails) {
  KeyRegistry keys(CryptoBackend::kSim, {}, testing::clients(2));
  const Payment p = payment(0, 0, 1, 1);
  Bytes wire = encode_submission(p, keys.sign(Principal::of(ClientId{0}), submission_signing_bytes(p)));
  wire.resize(wire.size() - 10);
  EXPECT_THROW(decode_submission(wire), DecodeError);
}

TEST(PaymentWire, RoundTripWithCertificates) {
  KeyRegistry keys(CryptoBackend::kSim, testing::replicas(4), testing::clients(3));
  Payment p = payment(1, 2, 2, 40);
  DependencyCertificate cert;
  cert.tuple = payment(0, 0, 1, 40).tuple();
  for (std::uint32_t r = 0; r < 2; ++r) {
    auto proof = std::make_shared<CreditProof>();
    proof->signer = ReplicaId{r};
    proof->tuples = {cert.tuple};
    proof->sig = keys.sign(Principal::of(ReplicaId{r}), credit_signing_bytes(proof->tuples));
    cert.proofs.push_back(proof);
  }
  p.deps.push_back(cert);
  ByteWriter w;
  encode_payment(w, p);
  ByteReader r(w.bytes());
  const Payment back = decode_payment(r);
  EXPECT_TRUE(r.done());
  EXPECT_TRUE(same_payload(back, p));
  EXPECT_EQ(payment_digest(back), payment_digest(p));
}

TEST(PaymentWire, DigestSeparatesPayloads) {
  const Payment a = payment(0, 0, 1, 10);
  Payment b = a;
  b.beneficiary = ClientId{2};
  Payment c = a;
  c.amount = 11;
  EXPECT_NE(payment_digest(a), payment_digest(b));
  EXPECT_NE(payment_digest(a), payment_digest(c));
  EXPECT_FALSE(same_payload(a, b));
  EXPECT_TRUE(same_payload(a, a));
}

TEST(SystemConfig, SingleShardIsValid) {
  const SystemConfig cfg = SystemConfig::single_shard(4, 1, 6, 100);
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.clients().size(), 6u);
  EXPECT_EQ(cfg.total_initial(), 600u);
  for (const auto& [c, rep] : cfg.representative_of) EXPECT_LT(rep.value, 4u) << to_string(c);
}

TEST(SystemConfig, UniformShardsAreDisjoint) {
  const SystemConfig cfg = SystemConfig::uniform(3, 1, 9, 10);
  EXPECT_NO_THROW(cfg.validate());
  ASSERT_EQ(cfg.shards.size(), 3u);
  std::set<ReplicaId> seen;
  for (const auto& s : cfg.shards) {
    EXPECT_EQ(s.members.size(), 4u);
    for (auto r : s.members) EXPECT_TRUE(seen.insert(r).second);
  }
}

TEST(SystemConfig, ValidationCatchesBreaches) {
  SystemConfig cfg = SystemConfig::single_shard(4, 1, 2, 10);
  SystemConfig missing_balance = cfg;
  missing_balance.initial_balances.erase(ClientId{1});
  EXPECT_THROW(missing_balance.validate(), ConfigError);

  SystemConfig stray_rep = cfg;
  stray_rep.representative_of[ClientId{0}] = ReplicaId{99};
  EXPECT_THROW(stray_rep.validate(), ConfigError);

  SystemConfig small_shard = cfg;
  small_shard.shards[0].members.pop_back();
  EXPECT_THROW(small_shard.validate(), ConfigError);

  EXPECT_THROW(SystemConfig::single_shard(5, 1, 2, 10), ConfigError);
}

}  // namespace
}  // namespace brbpay

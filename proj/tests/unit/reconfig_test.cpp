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

#include "brbpay/reconfig/view.hpp"
#include "local_net.hpp"

namespace brbpay {
namespace {

using testing::payment;

class ReconfigTest : public ::testing::Test {
 protected:
  ReconfigTest() : keys_(CryptoBackend::kSim, testing::replicas(6), {}) {}

  Signature join_sig(ReplicaId joiner, std::uint64_t view) {
    return keys_.sign(Principal::of(joiner), join_signing_bytes(joiner, view));
  }

  KeyRegistry keys_;
  GroupView v0_{0, testing::replicas(4), 1};
};

TEST_F(ReconfigTest, InstallRecordAddsOneMember) {
  const InstallRecord r = make_install_record(v0_, ReplicaId{4}, join_sig(ReplicaId{4}, 0));
  EXPECT_EQ(r.new_view, 1u);
  EXPECT_EQ(r.members, testing::replicas(5));
  EXPECT_TRUE(valid_successor(v0_, r, keys_));
  const GroupView v1 = successor(r);
  EXPECT_EQ(v1.id, 1u);
  EXPECT_EQ(v1.size(), 5);
  EXPECT_EQ(v1.quorum(), 4);
}

TEST_F(ReconfigTest, SuccessorMustBeExact) {
  const InstallRecord good = make_install_record(v0_, ReplicaId{4}, join_sig(ReplicaId{4}, 0));

  InstallRecord skips = good;
  skips.new_view = 2;
  EXPECT_FALSE(valid_successor(v0_, skips, keys_));

  InstallRecord extra = good;
  extra.members.push_back(ReplicaId{5});
  EXPECT_FALSE(valid_successor(v0_, extra, keys_));

  InstallRecord member = make_install_record(v0_, ReplicaId{2}, join_sig(ReplicaId{2}, 0));
  EXPECT_FALSE(valid_successor(v0_, member, keys_));

  InstallRecord stale_sig = make_install_record(v0_, ReplicaId{4}, join_sig(ReplicaId{4}, 7));
  EXPECT_FALSE(valid_successor(v0_, stale_sig, keys_));

  InstallRecord impostor = make_install_record(v0_, ReplicaId{4}, join_sig(ReplicaId{5}, 0));
  EXPECT_FALSE(valid_successor(v0_, impostor, keys_));

  InstallRecord refault = good;
  refault.f = 2;
  EXPECT_FALSE(valid_successor(v0_, refault, keys_));

  EXPECT_NE(install_digest(good), install_digest(skips));
}

TEST_F(ReconfigTest, ViewsFormASequence) {
  GroupView v = v0_;
  for (std::uint32_t j = 4; j < 6; ++j) {
    const InstallRecord r = make_install_record(v, ReplicaId{j}, join_sig(ReplicaId{j}, v.id));
    ASSERT_TRUE(valid_successor(v, r, keys_));
    const GroupView next = successor(r);
    EXPECT_EQ(next.id, v.id + 1);
    for (auto m : v.members) EXPECT_TRUE(next.contains(m));
    v = next;
  }
  EXPECT_EQ(v.size(), 6);
}

std::shared_ptr<const LogMap> snapshot(std::initializer_list<Payment> entries) {
  auto m = std::make_shared<LogMap>();
  for (const auto& p : entries) (*m)[p.spender()].push_back(p);
  return m;
}

TEST(AdoptLogs, TakesPrefixVouchedByEnough) {
  const Payment a0 = payment(0, 0, 1, 5), a1 = payment(0, 1, 1, 6), a2 = payment(0, 2, 1, 7);
  const Payment b0 = payment(1, 0, 0, 3);
  std::vector<std::shared_ptr<const LogMap>> snaps{snapshot({a0, a1, a2, b0}), snapshot({a0, a1}), snapshot({a0}),
                                                   snapshot({})};
  const LogMap two = adopt_logs(snaps, 2);
  ASSERT_EQ(two.at(ClientId{0}).size(), 2u);
  EXPECT_FALSE(two.contains(ClientId{1}));
  const LogMap one = adopt_logs(snaps, 1);
  EXPECT_EQ(one.at(ClientId{0}).size(), 3u);
  EXPECT_EQ(one.at(ClientId{1}).size(), 1u);
  EXPECT_TRUE(adopt_logs(snaps, 4).empty());
}

TEST(AdoptLogs, ForgedEntriesNeedAccomplices) {
  const Payment a0 = payment(0, 0, 1, 5), a1 = payment(0, 1, 1, 6);
  Payment fake = a1;
  fake.amount = 600;
  const Payment fake_tail = payment(0, 2, 2, 1);
  std::vector<std::shared_ptr<const LogMap>> snaps{snapshot({a0, fake, fake_tail}), snapshot({a0, a1}),
                                                   snapshot({a0, a1})};
  const LogMap out = adopt_logs(snaps, 2);
  ASSERT_EQ(out.at(ClientId{0}).size(), 2u);
  EXPECT_TRUE(same_payload(out.at(ClientId{0})[1], a1));
}

TEST(ResumeGate, NeedsQuorumOfNewView) {
  ResumeGate gate(GroupView{1, testing::replicas(5), 1});
  EXPECT_FALSE(gate.add(ReplicaId{9}, {}));
  EXPECT_TRUE(gate.add(ReplicaId{0}, {{ClientId{0}, 5}}));
  EXPECT_FALSE(gate.add(ReplicaId{0}, {{ClientId{0}, 1}}));
  EXPECT_TRUE(gate.add(ReplicaId{1}, {{ClientId{0}, 3}}));
  EXPECT_TRUE(gate.add(ReplicaId{2}, {{ClientId{0}, 4}, {ClientId{1}, 2}}));
  EXPECT_FALSE(gate.ready());
  EXPECT_THROW(gate.resume(), ReconfigError);
  EXPECT_TRUE(gate.add(ReplicaId{4}, {{ClientId{0}, 6}}));
  EXPECT_TRUE(gate.ready());
  gate.resume();
  EXPECT_TRUE(gate.resumed());
  EXPECT_EQ(gate.min_delivered(ClientId{0}), 3u);
  EXPECT_EQ(gate.min_delivered(ClientId{1}), 0u);
}

}  // namespace
}  // namespace brbpay

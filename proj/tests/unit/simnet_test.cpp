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

#include <sstream>

#include "brbpay/bench/workload_gen.hpp"
#include "brbpay/shard/topology.hpp"
#include "brbpay/sim/harness.hpp"
#include "brbpay/sim/oracle.hpp"
#include "brbpay/sim/scheduler.hpp"
#include "brbpay/sim/trace.hpp"
#include "local_net.hpp"

namespace brbpay {
namespace {

using testing::payment;

TEST(Scheduler, TimeThenInsertionOrder) {
  Scheduler s;
  std::string order;
  s.at(20, [&] { order += 'c'; });
  s.at(10, [&] { order += 'a'; });
  s.at(10, [&] { order += 'b'; });
  s.at(10, [&] {
    order += 'd';
    s.after(0, [&] { order += 'e'; });
  });
  s.run(100);
  EXPECT_EQ(order, "abdec");
  EXPECT_EQ(s.now(), 20);
  EXPECT_EQ(s.executed(), 5u);
}

TEST(Scheduler, StopsAtHorizon) {
  Scheduler s;
  int fired = 0;
  s.at(5, [&] { ++fired; });
  s.at(50, [&] { ++fired; });
  s.run(10);
  EXPECT_EQ(fired, 1);
  EXPECT_EQ(s.pending(), 1u);
  s.at(1, [&] { ++fired; });  // in the past: clamped to now
  EXPECT_TRUE(s.step(100));
  EXPECT_EQ(fired, 2);
}

TEST(Oracle, SettlesWhatIsFunded) {
  const std::map<ClientId, Amount> initial{{ClientId{0}, 10}, {ClientId{1}, 0}, {ClientId{2}, 0}};
  const std::vector<Payment> ps{payment(0, 0, 1, 8), payment(1, 0, 2, 5), payment(1, 1, 2, 5), payment(2, 0, 0, 1)};
  const OracleLedger out = oracle_fixpoint(ps, initial);
  EXPECT_EQ(out.balances.at(ClientId{0}), 3u);
  EXPECT_EQ(out.balances.at(ClientId{1}), 3u);
  EXPECT_EQ(out.balances.at(ClientId{2}), 4u);
  EXPECT_EQ(out.next_seq.at(ClientId{1}), 1u);  // second payment stays blocked
  EXPECT_EQ(out.xlogs.at(ClientId{2}).size(), 1u);
}

TEST(Oracle, RejectsGapsAndStrangers) {
  const std::map<ClientId, Amount> initial{{ClientId{0}, 10}, {ClientId{1}, 0}};
  EXPECT_THROW(oracle_apply({payment(0, 1, 1, 1)}, initial), ConfigError);
  EXPECT_THROW(oracle_apply({payment(0, 0, 7, 1)}, initial), ConfigError);
}

TEST(Oracle, RetryOrderDoesNotMatter) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    const Workload w = gen_uniform(UniformParams{6, 60, 100, 1, 150, true, 0}, seed);
    std::map<ClientId, Amount> initial;
    for (std::uint32_t c = 0; c < 6; ++c) initial[ClientId{c}] = 100 * (seed % 3);
    const auto ps = w.payments();
    EXPECT_TRUE(oracle_apply(ps, initial, RetryOrder::kAscending) == oracle_apply(ps, initial, RetryOrder::kDescending))
        << "seed " << seed;
  }
}

TEST(Trace, DigestIsStableAndJsonRoundTrips) {
  auto fill = [](Trace& t) {
    t.record({5, TraceEvent::kSend, MsgKind::kPrepare, Principal::of(ReplicaId{0}), Principal::of(ReplicaId{1}),
              {PaymentId{ClientId{2}, 3}}, 0, BatchKey{0, ReplicaId{0}, 7}});
    t.record({9, TraceEvent::kSettle, std::nullopt, Principal::of(ReplicaId{1}), std::nullopt,
              {PaymentId{ClientId{2}, 3}}, std::nullopt, std::nullopt});
  };
  Trace a(TraceMode::kFull), b(TraceMode::kDigest);
  fill(a);
  fill(b);
  EXPECT_EQ(a.digest(), b.digest());
  EXPECT_EQ(a.count(), 2u);
  std::stringstream io;
  a.write_jsonl(io);
  const auto back = read_jsonl(io);
  ASSERT_EQ(back.size(), 2u);
  Trace c(TraceMode::kDigest);
  for (const auto& r : back) c.record(r);
  EXPECT_EQ(c.digest(), a.digest());
  std::stringstream bad("{\"t\":1,\"ev\":\"warp\"}\n");
  EXPECT_THROW(read_jsonl(bad), DecodeError);
}

TEST(FaultPlan, ValidatesAgainstTopology) {
  const SystemConfig cfg = SystemConfig::single_shard(4, 1, 2, 10);
  const ShardTopology t(cfg);
  FaultPlan ok;
  ok.byzantine[ReplicaId{0}] = Behavior::kEquivocate;
  ok.double_spenders.insert(ClientId{1});
  EXPECT_NO_THROW(ok.validate(t));
  FaultPlan too_many = ok;
  too_many.crashes[ReplicaId{1}] = kSecond;
  EXPECT_THROW(too_many.validate(t), ConfigError);
  too_many.beyond_f = true;
  EXPECT_NO_THROW(too_many.validate(t));
  FaultPlan stranger;
  stranger.delays[ReplicaId{9}] = {0, kMillisecond};
  EXPECT_THROW(stranger.validate(t), ConfigError);
  EXPECT_EQ(parse_behavior("withhold"), Behavior::kWithhold);
  EXPECT_THROW(parse_behavior("sneaky"), ConfigError);
}

RunSpec small_run(BrbVariant v, std::uint64_t seed) {
  RunSpec s;
  s.system = SystemConfig::single_shard(4, 1, 6, 200);
  s.variant = v;
  s.seed = seed;
  s.workload = gen_uniform(UniformParams{6, 80, 150, 1, 120, true, 0}, seed);
  s.trace = TraceMode::kDigest;
  s.check_oracle = true;
  return s;
}

class Variants : public ::testing::TestWithParam<BrbVariant> {};

TEST_P(Variants, AllCorrectRunsMatchOracle) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const RunResult r = run(small_run(GetParam(), seed));
    EXPECT_TRUE(r.quiescent) << "seed " << seed;
    EXPECT_TRUE(r.oracle_checked);
    EXPECT_TRUE(r.violations.empty()) << "seed " << seed << ": " << r.violations.front();
    EXPECT_TRUE(r.oracle_mismatches.empty()) << "seed " << seed << ": " << r.oracle_mismatches.front();
    EXPECT_GT(r.conservation_checks, 0u);
    EXPECT_EQ(r.mac_failures, 0u);
  }
}

TEST_P(Variants, SameSeedSameTrace) {
  const RunResult a = run(small_run(GetParam(), 42));
  const RunResult b = run(small_run(GetParam(), 42));
  const RunResult c = run(small_run(GetParam(), 43));
  EXPECT_EQ(a.trace_digest, b.trace_digest);
  EXPECT_EQ(a.events, b.events);
  EXPECT_NE(a.trace_digest, c.trace_digest);
}

TEST_P(Variants, CrashedReplicaDoesNotStopOthers) {
  RunSpec s = small_run(GetParam(), 5);
  s.faults.crashes[ReplicaId{3}] = 100 * kMillisecond;
  s.check_oracle = false;
  const RunResult r = run(s);
  EXPECT_TRUE(r.violations.empty());
  // the three survivors end in the same state
  std::size_t settled_somewhere = 0;
  for (const auto& p : r.payments) {
    if (p.settles > 0) ++settled_somewhere;
    EXPECT_TRUE(p.settles == 0 || p.settles >= 3) << to_string(p.id) << " settled at " << p.settles;
  }
  EXPECT_GT(settled_somewhere, 10u);
  const ReplicaFinal* first = nullptr;
  for (const auto& f : r.finals) {
    if (f.crashed) continue;
    if (!first) first = &f;
    EXPECT_EQ(f.xlogs, first->xlogs) << to_string(f.replica);
  }
}

TEST_P(Variants, ForgedCreditsSettleNothing) {
  RunSpec s = small_run(GetParam(), 6);
  s.faults.byzantine[ReplicaId{1}] = Behavior::kForgeCredit;
  s.check_oracle = false;
  const RunResult r = run(s);
  EXPECT_TRUE(r.violations.empty()) << r.violations.front();
}

TEST_P(Variants, SilentReplicaTolerated) {
  RunSpec s = small_run(GetParam(), 8);
  s.faults.byzantine[ReplicaId{2}] = Behavior::kSilent;
  s.check_oracle = false;
  const RunResult r = run(s);
  EXPECT_TRUE(r.violations.empty());
}

TEST_P(Variants, EquivocatingRepresentativeCannotDoubleSpend) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RunSpec s = small_run(GetParam(), seed);
    s.faults.byzantine[ReplicaId{0}] = Behavior::kEquivocate;
    s.faults.double_spenders = {ClientId{0}, ClientId{4}};
    s.latency.kind = LatencyModel::Kind::kAdversarial;
    s.check_oracle = false;
    const RunResult r = run(s);
    EXPECT_TRUE(r.violations.empty()) << "seed " << seed << ": " << r.violations.front();
  }
}

INSTANTIATE_TEST_SUITE_P(Sim, Variants, ::testing::Values(BrbVariant::kEcho, BrbVariant::kSig),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(Harness, MessageCountsForOnePayment) {
  for (auto v : {BrbVariant::kEcho, BrbVariant::kSig}) {
    for (int f : {1, 2, 3}) {
      const int n = 3 * f + 1;
      RunSpec s;
      s.system = SystemConfig::single_shard(n, f, 2, 100);
      s.variant = v;
      s.workload.entries.push_back({0, ClientId{0}, ClientId{1}, 10, OpKind::kUniform, std::nullopt});
      const RunResult r = run(s);
      const std::uint64_t got = r.message_count({MsgKind::kPrepare, MsgKind::kEcho, MsgKind::kReady, MsgKind::kAck,
                                                 MsgKind::kCommit, MsgKind::kPayloadRequest,
                                                 MsgKind::kPayloadResponse});
      const auto un = static_cast<std::uint64_t>(n);
      EXPECT_EQ(got, v == BrbVariant::kEcho ? (un - 1) + 2 * un * (un - 1) : 3 * (un - 1))
          << to_string(v) << " n=" << n;
    }
  }
}

TEST(Harness, JoinAddsReplica) {
  RunSpec s;
  s.system = SystemConfig::single_shard(4, 1, 6, 500);
  s.variant = BrbVariant::kSig;
  s.workload = gen_uniform(UniformParams{6, 150, 150, 1, 50, true, 0}, 3);
  s.join = JoinPlan{ReplicaId{4}, 300 * kMillisecond};
  s.check_oracle = true;
  const RunResult r = run(s);
  EXPECT_TRUE(r.join.completed);
  EXPECT_TRUE(r.violations.empty()) << r.violations.front();
  EXPECT_TRUE(r.oracle_mismatches.empty()) << r.oracle_mismatches.front();
  bool joiner_final = false;
  for (const auto& f : r.finals) joiner_final = joiner_final || (f.replica == ReplicaId{4} && f.member && f.view == 1);
  EXPECT_TRUE(joiner_final);
}

TEST(Harness, RejectsBadSpecs) {
  RunSpec s;
  s.system = SystemConfig::single_shard(4, 1, 2, 10);
  s.workload.entries.push_back({0, ClientId{0}, ClientId{7}, 1, OpKind::kUniform, std::nullopt});
  EXPECT_THROW(run(s), ConfigError);
  RunSpec join_member;
  join_member.system = SystemConfig::single_shard(4, 1, 2, 10);
  join_member.join = JoinPlan{ReplicaId{2}, 0};
  EXPECT_THROW(run(join_member), ConfigError);
}

}  // namespace
}  // namespace brbpay

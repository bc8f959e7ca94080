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

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "brbpay/bench/config_file.hpp"
#include "brbpay/bench/report.hpp"
#include "brbpay/bench/scenarios.hpp"
#include "brbpay/bench/workload_gen.hpp"
#include "brbpay/shard/topology.hpp"

namespace brbpay {
namespace {

TEST(GenUniform, ShapeAndDeterminism) {
  const Workload w = gen_uniform(2, 4, 9);
  ASSERT_EQ(w.entries.size(), 4u);
  std::map<ClientId, SeqNo> next;
  for (const auto& p : w.payments()) EXPECT_EQ(p.id.seq, next[p.spender()]++);

  UniformParams u;
  u.clients = 5;
  u.payments = 500;
  u.max_amount = 40;
  const Workload a = gen_uniform(u, 3), b = gen_uniform(u, 3), c = gen_uniform(u, 4);
  SimTime last = 0;
  for (const auto& e : a.entries) {
    EXPECT_NE(e.spender, e.beneficiary);
    EXPECT_GE(e.amount, 1u);
    EXPECT_LE(e.amount, 40u);
    EXPECT_GE(e.at, last);
    last = e.at;
  }
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].at, b.entries[i].at);
    EXPECT_EQ(a.entries[i].beneficiary, b.entries[i].beneficiary);
    EXPECT_EQ(a.entries[i].amount, b.entries[i].amount);
  }
  bool differs = false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) differs = differs || a.entries[i].amount != c.entries[i].amount;
  EXPECT_TRUE(differs);
}

TEST(GenUniform, OfferedRate) {
  UniformParams u;
  u.payments = 2000;
  u.rate = 250;
  const Workload w = gen_uniform(u, 11);
  const double seconds = static_cast<double>(w.entries.back().at) / kSecond;
  EXPECT_NEAR(2000 / seconds, 250, 25);
  u.poisson = false;
  const Workload even = gen_uniform(u, 11);
  EXPECT_EQ(even.entries[1].at - even.entries[0].at, even.entries[2].at - even.entries[1].at);
}

double cross_share(const Workload& w, const ShardTopology& t) {
  std::size_t cross = 0;
  for (const auto& e : w.entries) cross += t.shard_of(e.spender) != t.shard_of(e.beneficiary);
  return static_cast<double>(cross) / static_cast<double>(w.entries.size());
}

TEST(GenSmallbank, OneShardHasNoCrossTraffic) {
  const Workload w = gen_smallbank(8, 400, 1, 5);
  const ShardTopology t(smallbank_system(8, 1, 1, 100));
  EXPECT_EQ(cross_share(w, t), 0.0);
}

TEST(GenSmallbank, CrossShardShare) {
  for (int shards : {2, 3, 4}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Workload w = gen_smallbank(8 * shards, 10000, shards, seed);
      const ShardTopology t(smallbank_system(8 * shards, shards, 1, 100));
      const double share = cross_share(w, t);
      EXPECT_GE(share, 0.115) << shards << " shards, seed " << seed;
      EXPECT_LE(share, 0.135) << shards << " shards, seed " << seed;
    }
  }
}

TEST(GenSmallbank, SameOwnerOpsStayHome) {
  const Workload w = gen_smallbank(16, 2000, 4, 2);
  const ShardTopology t(smallbank_system(16, 4, 1, 100));
  std::size_t transfers = 0;
  for (const auto& e : w.entries) {
    if (owner_of(e.spender) == owner_of(e.beneficiary)) {
      EXPECT_EQ(e.kind, OpKind::kTransfer);
      EXPECT_EQ(t.shard_of(e.spender), t.shard_of(e.beneficiary));
      ++transfers;
    } else {
      EXPECT_EQ(e.kind, OpKind::kSendPayment);
    }
  }
  EXPECT_GT(transfers, 0u);
  EXPECT_NO_THROW(w.validate(t));
}

TEST(Workload, ValidateCatchesStrangersAndTimeTravel) {
  const ShardTopology t(SystemConfig::single_shard(4, 1, 2, 10));
  Workload w;
  w.entries.push_back({5, ClientId{0}, ClientId{1}, 1, OpKind::kUniform, std::nullopt});
  w.entries.push_back({4, ClientId{1}, ClientId{0}, 1, OpKind::kUniform, std::nullopt});
  EXPECT_THROW(w.validate(t), ConfigError);
  w.entries[1].at = 6;
  EXPECT_NO_THROW(w.validate(t));
  w.entries[1].twin_beneficiary = ClientId{5};
  EXPECT_THROW(w.validate(t), ConfigError);
}

TEST(Report, NearestRank) {
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  EXPECT_EQ(nearest_rank(v, 50), 5);
  EXPECT_EQ(nearest_rank(v, 95), 10);
  EXPECT_EQ(nearest_rank(v, 10), 1);
  EXPECT_EQ(nearest_rank(v, 100), 10);
  const LatencyStats s = latency_stats({4, 1, 3, 2});
  EXPECT_EQ(s.count, 4u);
  EXPECT_DOUBLE_EQ(s.avg, 2.5);
  EXPECT_EQ(s.min, 1);
  EXPECT_EQ(s.max, 4);
  EXPECT_EQ(latency_stats({}).count, 0u);
}

TEST(Report, EmptyRunIsZeroFilled) {
  const MetricsReport m = make_report(RunResult{});
  EXPECT_EQ(m.submitted, 0u);
  EXPECT_EQ(m.settled, 0u);
  EXPECT_EQ(m.settles_per_second, 0);
  EXPECT_EQ(m.quorum_latency.count, 0u);
  const auto j = nlohmann::json::parse(report_json(m));
  EXPECT_EQ(j["settled"], 0);
}

TEST(Report, OrderStatisticsOfARealRun) {
  RunSpec s = make_custom_run(ScenarioOptions{});
  const RunResult r = run(s);
  const MetricsReport m = make_report(r);
  EXPECT_EQ(m.settled, m.submitted);
  EXPECT_GE(m.quorum_latency.p95, m.quorum_latency.avg);
  EXPECT_GE(m.quorum_latency.avg, m.quorum_latency.min);
  EXPECT_GE(m.quorum_latency.p99, m.quorum_latency.p95);
  EXPECT_LE(m.rep_latency.avg, m.quorum_latency.avg + 1e-9);
  std::uint64_t in_timeline = 0;
  for (auto v : m.timeline) in_timeline += v;
  EXPECT_EQ(in_timeline, m.settled);

  const auto dir = std::filesystem::temp_directory_path() / "brbpay_report_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_outputs(dir, r, m);
  for (const char* f : {"report.json", "summary.csv", "timeline.csv", "messages.csv", "replicas.csv",
                        "final_state.jsonl", "violations.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::ifstream in(dir / "violations.json");
  const auto v = nlohmann::json::parse(in);
  EXPECT_TRUE(v["violations"].empty());
  std::filesystem::remove_all(dir);
}

TEST(Report, SameSeedSameReport) {
  ScenarioOptions o;
  o.seed = 77;
  const std::string a = report_json(make_report(run(make_custom_run(o))));
  const std::string b = report_json(make_report(run(make_custom_run(o))));
  EXPECT_EQ(a, b);
}

TEST(Scenarios, EveryNameBuilds) {
  for (const auto& name : scenario_names()) {
    ScenarioOptions o;
    EXPECT_NO_THROW(make_scenario(name, o)) << name;
  }
  EXPECT_THROW(make_scenario("warp-speed", ScenarioOptions{}), ConfigError);
  ScenarioOptions bad;
  bad.n = 5;
  EXPECT_THROW(make_scenario("equivocation", bad), ConfigError);
  ScenarioOptions echo_shards;
  echo_shards.shards = 2;
  echo_shards.variant = BrbVariant::kEcho;
  EXPECT_THROW(make_custom_run(echo_shards), ConfigError);
}

TEST(ConfigFile, ReadsSections) {
  ScenarioOptions o;
  apply_run_config(R"(
# a comment
[topology]
n = 7
f = 2
brb = "sig"
[workload]
kind = smallbank
payments = 300   # inline comment
rate = 12.5
horizon_ms = 9000
seed = 4
[faults]
crash = "r3@30000, r4@1000"
delay = ["r5@200+100"]
byzantine = "r0=equivocate"
double_spenders = c1,c2
)",
                   o);
  EXPECT_EQ(o.n, 7);
  EXPECT_EQ(o.f, 2);
  EXPECT_EQ(o.variant, BrbVariant::kSig);
  EXPECT_EQ(o.workload, "smallbank");
  EXPECT_EQ(o.payments, 300);
  EXPECT_DOUBLE_EQ(*o.rate, 12.5);
  EXPECT_EQ(o.horizon, 9 * kSecond);
  EXPECT_EQ(o.seed, 4u);
  ASSERT_TRUE(o.faults);
  EXPECT_EQ(o.faults->crashes.at(ReplicaId{3}), 30 * kSecond);
  EXPECT_EQ(o.faults->crashes.at(ReplicaId{4}), kSecond);
  EXPECT_EQ(o.faults->delays.at(ReplicaId{5}).from, 200 * kMillisecond);
  EXPECT_EQ(o.faults->delays.at(ReplicaId{5}).extra, 100 * kMillisecond);
  EXPECT_EQ(o.faults->byzantine.at(ReplicaId{0}), Behavior::kEquivocate);
  EXPECT_EQ(o.faults->double_spenders.size(), 2u);
}

TEST(ConfigFile, RejectsJunk) {
  ScenarioOptions o;
  EXPECT_THROW(apply_run_config("[topology]\nsize = 4\n", o), ConfigError);
  EXPECT_THROW(apply_run_config("[topology]\nn = four\n", o), ConfigError);
  EXPECT_THROW(apply_run_config("[weather]\nrain = 1\n", o), ConfigError);
  EXPECT_THROW(apply_run_config("[faults]\ncrash = r3\n", o), ConfigError);
  EXPECT_THROW(apply_run_config("[faults]\nbyzantine = r0=sneaky\n", o), ConfigError);
  EXPECT_THROW(parse_variant("paxos"), ConfigError);
}

TEST(ConfigFile, FaultPlanAcceptsBareKeys) {
  const FaultPlan p = parse_fault_plan("crash = 2@500\nwithhold_commit_reach = 2\n");
  EXPECT_EQ(p.crashes.at(ReplicaId{2}), 500 * kMillisecond);
  EXPECT_EQ(p.withhold_commit_reach, 2);
  const FaultPlan q = parse_fault_plan("[faults]\nbeyond_f = true\nextra_latency_ms = 3\n");
  EXPECT_TRUE(q.beyond_f);
  EXPECT_EQ(q.global_extra_latency, 3 * kMillisecond);
  EXPECT_THROW(parse_fault_plan("[topology]\nn = 4\n"), ConfigError);
}

}  // namespace
}  // namespace brbpay

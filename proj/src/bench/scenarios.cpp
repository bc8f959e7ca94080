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


#include "brbpay/bench/scenarios.hpp"

#include <random>

#include "brbpay/bench/workload_gen.hpp"

namespace brbpay {

namespace {

int fault_bound(const ScenarioOptions& o, int n) {
  const int f = o.f.value_or((n - 1) / 3);
  if (n != 3 * f + 1) throw ConfigError("shards must have n = 3f+1 replicas, got n=" + std::to_string(n) + " f=" + std::to_string(f));
  return f;
}

RunSpec base(const ScenarioOptions& o) {
  RunSpec s;
  s.seed = o.seed;
  s.trace = o.trace;
  if (o.batch_interval) s.node.batch_interval = *o.batch_interval;
  return s;
}

RunSpec robustness(const ScenarioOptions& o, bool crash) {
  RunSpec s = base(o);
  const int n = o.n.value_or(49);
  const int f = fault_bound(o, n);
  const int clients = o.clients.value_or(10);
  if (clients > n) throw ConfigError("robustness scenarios place one client per representative");
  s.system = SystemConfig::single_shard(n, f, clients, o.initial_balance.value_or(1'000'000'000));
  s.variant = o.variant.value_or(BrbVariant::kEcho);
  s.horizon = o.horizon.value_or(40 * kSecond);
  s.node.batch_interval = o.batch_interval.value_or(200 * kMillisecond);

  // fixed arrivals, each client at rate/clients, phases staggered
  const double per_client = o.rate.value_or(50.0) / clients;
  const auto gap = static_cast<SimTime>(kSecond / per_client);
  for (SimTime t = 0; t < s.horizon; t += gap) {
    for (int c = 0; c < clients; ++c) {
      const SimTime at = t + c * gap / clients;
      if (at >= s.horizon) continue;
      WorkloadEntry e;
      e.at = at;
      e.spender = ClientId{static_cast<std::uint32_t>(c)};
      e.beneficiary = ClientId{static_cast<std::uint32_t>((c + 1) % clients)};
      e.amount = 1;
      s.workload.entries.push_back(e);
    }
  }
  if (o.faults) {
    s.faults = *o.faults;
  } else {
    const ReplicaId victim = s.system.representative_of.at(ClientId{0});
    if (crash) {
      s.faults.crashes[victim] = 30 * kSecond;
    } else {
      s.faults.delays[victim] = {30 * kSecond, 100 * kMillisecond};
    }
  }
  return s;
}

RunSpec partial_payment(const ScenarioOptions& o) {
  RunSpec s = base(o);
  const int n = o.n.value_or(4);
  const int f = fault_bound(o, n);
  s.system = SystemConfig::single_shard(n, f, 4, 0);
  const ClientId payer{0}, middle{1}, last{2};
  s.system.initial_balances[payer] = 100;
  s.variant = o.variant.value_or(BrbVariant::kSig);
  s.horizon = o.horizon.value_or(30 * kSecond);
  s.latency.kind = LatencyModel::Kind::kAdversarial;
  // the payer's representative lets its Commit reach one correct replica
  const ReplicaId rogue = s.system.representative_of.at(payer);
  if (o.faults) {
    s.faults = *o.faults;
  } else {
    s.faults.byzantine[rogue] = Behavior::kWithhold;
    s.faults.withhold_commit_reach = 1;
  }
  s.workload.entries.push_back({10 * kMillisecond, payer, middle, 60, OpKind::kUniform, std::nullopt});
  s.workload.entries.push_back({2 * kSecond, middle, last, 60, OpKind::kUniform, std::nullopt});
  return s;
}

RunSpec equivocation(const ScenarioOptions& o) {
  RunSpec s = base(o);
  const int n = o.n.value_or(4);
  const int f = fault_bound(o, n);
  const int clients = o.clients.value_or(10);
  s.system = SystemConfig::single_shard(n, f, clients, o.initial_balance.value_or(500));
  s.variant = o.variant.value_or(BrbVariant::kSig);
  s.horizon = o.horizon.value_or(60 * kSecond);
  s.latency.kind = LatencyModel::Kind::kAdversarial;
  UniformParams u;
  u.clients = clients;
  u.payments = o.payments.value_or(100);
  u.rate = o.rate.value_or(200);
  s.workload = gen_uniform(u, o.seed);
  if (o.faults) {
    s.faults = *o.faults;
  } else {
    std::mt19937_64 rng(o.seed ^ 0x5EED);
    std::vector<ReplicaId> members = s.system.shards[0].members;
    std::shuffle(members.begin(), members.end(), rng);
    for (int i = 0; i < f; ++i) {
      s.faults.byzantine[members[static_cast<std::size_t>(i)]] = rng() % 4 == 0 ? Behavior::kWithhold : Behavior::kEquivocate;
    }
    const int spenders = std::max(1, clients / 10);
    for (int i = 0; i < spenders; ++i) s.faults.double_spenders.insert(ClientId{static_cast<std::uint32_t>(i)});
  }
  return s;
}

RunSpec sharded_smallbank(const ScenarioOptions& o) {
  RunSpec s = base(o);
  const int shards = o.shards.value_or(2);
  const int f = o.f.value_or(1);
  if (o.n && *o.n != 3 * f + 1) throw ConfigError("--n is the per-shard size and must be 3f+1");
  SmallbankParams p;
  p.shards = shards;
  p.owners = o.clients.value_or(8 * shards);
  p.payments = o.payments.value_or(1000);
  p.rate = o.rate.value_or(200);
  s.system = smallbank_system(p.owners, shards, f, o.initial_balance.value_or(1000));
  s.variant = o.variant.value_or(BrbVariant::kSig);
  if (s.variant != BrbVariant::kSig && shards > 1) throw ConfigError("sharding needs the signature variant");
  s.horizon = o.horizon.value_or(120 * kSecond);
  s.workload = gen_smallbank(p, o.seed);
  if (o.faults) s.faults = *o.faults;
  return s;
}

RunSpec join(const ScenarioOptions& o) {
  RunSpec s = base(o);
  const int n = o.n.value_or(4);
  const int f = fault_bound(o, n);
  const ReplicaId idle{0};
  const int clients = o.clients.value_or(9);
  s.system = single_shard_except(n, f, clients, o.initial_balance.value_or(1000), idle);
  s.variant = o.variant.value_or(BrbVariant::kSig);
  s.horizon = o.horizon.value_or(120 * kSecond);
  UniformParams u;
  u.clients = clients;
  u.payments = o.payments.value_or(1000);
  u.rate = o.rate.value_or(200);
  s.workload = gen_uniform(u, o.seed);
  const SimTime join_at = s.workload.entries.empty() ? 0 : s.workload.entries[s.workload.entries.size() / 3].at;
  s.join = JoinPlan{ReplicaId{static_cast<std::uint32_t>(n)}, join_at};
  const std::string fault = o.join_fault.value_or("none");
  if (o.faults) {
    s.faults = *o.faults;
  } else if (fault == "crash") {
    s.faults.crashes[idle] = join_at;
  } else if (fault == "forge-snapshot") {
    s.faults.byzantine[idle] = Behavior::kForgeSnapshot;
  } else if (fault != "none") {
    throw ConfigError("unknown join fault '" + fault + "'");
  }
  return s;
}

}  // namespace

SystemConfig single_shard_except(int n, int f, int clients, Amount initial_balance, ReplicaId idle) {
  SystemConfig cfg = SystemConfig::single_shard(n, f, clients, initial_balance);
  std::vector<ReplicaId> reps;
  for (auto r : cfg.shards[0].members) {
    if (r != idle) reps.push_back(r);
  }
  for (int c = 0; c < clients; ++c) {
    cfg.representative_of[ClientId{static_cast<std::uint32_t>(c)}] = reps[static_cast<std::size_t>(c) % reps.size()];
  }
  return cfg;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"robust-crash", "robust-async",      "partial-payment",
                                              "equivocation", "sharded-smallbank", "join"};
  return names;
}

RunSpec make_scenario(const std::string& name, const ScenarioOptions& o) {
  if (name == "robust-crash") return robustness(o, true);
  if (name == "robust-async") return robustness(o, false);
  if (name == "partial-payment") return partial_payment(o);
  if (name == "equivocation") return equivocation(o);
  if (name == "sharded-smallbank") return sharded_smallbank(o);
  if (name == "join") return join(o);
  throw ConfigError("unknown scenario '" + name + "'");
}

RunSpec make_custom_run(const ScenarioOptions& o) {
  RunSpec s = base(o);
  const int shards = o.shards.value_or(1);
  const int n = o.n.value_or(4);
  const int f = fault_bound(o, n);
  s.variant = o.variant.value_or(shards > 1 ? BrbVariant::kSig : BrbVariant::kEcho);
  if (s.variant == BrbVariant::kEcho && shards > 1) throw ConfigError("sharding needs the signature variant");
  s.horizon = o.horizon.value_or(60 * kSecond);
  const std::string kind = o.workload.value_or("uniform");
  const Amount initial = o.initial_balance.value_or(1000);
  if (kind == "uniform") {
    UniformParams u;
    u.clients = o.clients.value_or(8);
    u.payments = o.payments.value_or(200);
    u.rate = o.rate.value_or(100);
    s.system = SystemConfig::uniform(shards, f, u.clients, initial);
    s.workload = gen_uniform(u, o.seed);
  } else if (kind == "smallbank") {
    SmallbankParams p;
    p.shards = shards;
    p.owners = o.clients.value_or(8 * shards);
    p.payments = o.payments.value_or(200);
    p.rate = o.rate.value_or(100);
    s.system = smallbank_system(p.owners, shards, f, initial);
    s.workload = gen_smallbank(p, o.seed);
  } else {
    throw ConfigError("unknown workload '" + kind + "'");
  }
  if (o.faults) s.faults = *o.faults;
  return s;
}

}  // namespace brbpay

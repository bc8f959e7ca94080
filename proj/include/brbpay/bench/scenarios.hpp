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


#ifndef BRBPAY_BENCH_SCENARIOS_HPP_
#define BRBPAY_BENCH_SCENARIOS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "brbpay/sim/harness.hpp"

namespace brbpay {

/// Knobs shared by the named scenarios and plain runs. Unset values take
/// the scenario's own default.
struct ScenarioOptions {
  std::optional<int> n;
  std::optional<int> f;
  std::optional<int> shards;
  std::optional<BrbVariant> variant;
  std::optional<std::string> workload;  // "uniform" or "smallbank"
  std::optional<int> payments;
  std::optional<double> rate;
  std::optional<int> clients;
  std::optional<Amount> initial_balance;
  std::optional<SimTime> horizon;
  std::optional<FaultPlan> faults;
  std::optional<SimTime> batch_interval;
  /// join scenario: "none", "crash" or "forge-snapshot" for replica 0.
  std::optional<std::string> join_fault;
  std::uint64_t seed = 1;
  TraceMode trace = TraceMode::kNone;
};

const std::vector<std::string>& scenario_names();

/// Throws ConfigError for unknown names or inconsistent options.
RunSpec make_scenario(const std::string& name, const ScenarioOptions& o);
/// A run built from the options alone.
RunSpec make_custom_run(const ScenarioOptions& o);

/// Single shard of n = 3f+1 replicas whose clients are represented
/// round-robin by every replica but `idle`.
SystemConfig single_shard_except(int n, int f, int clients, Amount initial_balance, ReplicaId idle);

}  // namespace brbpay

#endif  // BRBPAY_BENCH_SCENARIOS_HPP_

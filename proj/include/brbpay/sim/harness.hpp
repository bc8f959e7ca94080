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


#ifndef BRBPAY_SIM_HARNESS_HPP_
#define BRBPAY_SIM_HARNESS_HPP_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "brbpay/sim/fault_plan.hpp"
#include "brbpay/sim/replica_node.hpp"
#include "brbpay/sim/trace.hpp"
#include "brbpay/sim/workload.hpp"

namespace brbpay {

struct LatencyModel {
  enum class Kind {
    kNormal,       // one-way latency ~ N(mean, stddev), floored
    kAdversarial,  // uniform over [adversarial_min, adversarial_max]
  };
  Kind kind = Kind::kNormal;
  SimTime mean = 10 * kMillisecond;
  SimTime stddev = 2 * kMillisecond;
  SimTime floor = 1 * kMillisecond;
  SimTime adversarial_min = 1 * kMillisecond;
  SimTime adversarial_max = 100 * kMillisecond;
};

struct JoinPlan {
  ReplicaId joiner;
  SimTime at = 0;
};

struct RunSpec {
  SystemConfig system;
  BrbVariant variant = BrbVariant::kEcho;
  /// Template for every node; behavior, seed and variant are filled in.
  NodeOptions node;
  FaultPlan faults;
  Workload workload;
  LatencyModel latency;
  std::uint64_t seed = 1;
  SimTime horizon = 60 * kSecond;
  TraceMode trace = TraceMode::kNone;
  CryptoBackend crypto = CryptoBackend::kSim;
  /// MAC every replica-to-replica envelope and check it on arrival.
  bool authenticate_links = true;
  /// Single-shard systems only.
  std::optional<JoinPlan> join;
  /// Compare every correct replica's final state with the oracle; only
  /// meaningful when the run drains before the horizon.
  bool check_oracle = false;
};

struct PaymentRecord {
  PaymentId id;
  ClientId beneficiary;
  Amount amount = 0;
  std::size_t shard = 0;
  bool cross_shard = false;
  bool contested = false;  // a conflicting twin was also submitted
  SimTime submitted = 0;
  std::optional<SimTime> at_rep;     // settled at the spender's representative
  std::optional<SimTime> at_quorum;  // settled at 2f+1 correct replicas of the shard
  int settles = 0;                   // correct replicas that settled it
};

struct ReplicaFinal {
  ReplicaId replica;
  std::size_t shard = 0;
  Behavior behavior = Behavior::kCorrect;
  bool crashed = false;
  bool member = true;
  std::uint64_t view = 0;
  std::map<ClientId, AccountState> accounts;
  std::map<ClientId, std::vector<PaymentTuple>> xlogs;
  std::size_t settled = 0;
  std::size_t blocked = 0;
  std::size_t evidence = 0;
};

struct CrossShardAudit {
  std::size_t payments = 0;
  std::size_t cross_payments = 0;
  /// Per cross-shard payment: messages crossing a shard boundary that
  /// carry it, and the longest causal chain of such messages.
  std::map<PaymentId, int> messages;
  std::map<PaymentId, int> rounds;

  double cross_fraction() const { return payments == 0 ? 0.0 : static_cast<double>(cross_payments) / payments; }
};

struct JoinOutcome {
  bool requested = false;
  bool completed = false;
  SimTime requested_at = 0;
  std::optional<SimTime> installed_at;
  std::optional<SimTime> resumed_at;
};

struct RunResult {
  SimTime end_time = 0;
  bool quiescent = false;
  std::uint64_t events = 0;
  std::vector<PaymentRecord> payments;
  std::array<std::uint64_t, kMsgKindCount> messages{};
  std::map<ReplicaId, std::size_t> settles_per_replica;
  std::vector<ReplicaFinal> finals;
  std::vector<std::string> violations;
  std::vector<std::string> oracle_mismatches;
  bool oracle_checked = false;
  std::size_t conservation_checks = 0;
  std::size_t mac_failures = 0;
  std::size_t evidence = 0;
  CrossShardAudit cross;
  JoinOutcome join;
  std::string trace_digest;
  std::vector<TraceRecord> trace;

  std::uint64_t message_count(std::initializer_list<MsgKind> kinds) const;
};

/// Runs one simulation to the horizon or until nothing is left to do.
RunResult run(const RunSpec& spec);

}  // namespace brbpay

#endif  // BRBPAY_SIM_HARNESS_HPP_

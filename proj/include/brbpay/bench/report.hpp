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


#ifndef BRBPAY_BENCH_REPORT_HPP_
#define BRBPAY_BENCH_REPORT_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "brbpay/sim/harness.hpp"

namespace brbpay {

/// Latencies in simulated milliseconds; percentiles by nearest rank.
struct LatencyStats {
  std::size_t count = 0;
  double min = 0, avg = 0, p50 = 0, p95 = 0, p99 = 0, max = 0;
};

LatencyStats latency_stats(std::vector<double> samples);
/// Nearest-rank percentile of sorted, non-empty samples; pct in (0, 100].
double nearest_rank(const std::vector<double>& sorted, double pct);

struct MetricsReport {
  double duration_s = 0;
  std::size_t submitted = 0;
  std::size_t settled = 0;  // at 2f+1 correct replicas
  std::size_t stalled = 0;  // submitted, never settled at 2f+1
  double settles_per_second = 0;
  std::vector<double> shard_settles_per_second;
  LatencyStats quorum_latency;
  LatencyStats rep_latency;
  std::map<std::string, std::uint64_t> messages;
  std::uint64_t total_messages = 0;
  std::map<ReplicaId, std::size_t> replica_settles;
  /// Settles at 2f+1 per bucket, bucket k covering [k, k+1) * bucket width.
  std::vector<std::uint64_t> timeline;
  SimTime bucket = kSecond;
  double cross_fraction = 0;
  int max_cross_messages = 0;
  int max_cross_rounds = 0;
  std::size_t violations = 0;
  bool join_completed = false;
  double join_latency_ms = 0;
};

MetricsReport make_report(const RunResult& r, SimTime bucket = kSecond);

/// Times (ascending) at which payments reached 2f+1 correct replicas.
std::vector<SimTime> quorum_settle_times(const RunResult& r);
/// Quorum settles per simulated second over [from, to).
double settle_rate(const RunResult& r, SimTime from, SimTime to);
/// Longest stretch within [from, to] with no quorum settle.
SimTime longest_gap(const RunResult& r, SimTime from, SimTime to);

std::string report_json(const MetricsReport& m);
void write_violations(const std::filesystem::path& file, const RunResult& r);

/// report.json, summary.csv, timeline.csv, messages.csv, replicas.csv,
/// final_state.jsonl, violations.json, plus trace.jsonl when the run kept
/// full records.
void write_outputs(const std::filesystem::path& dir, const RunResult& r, const MetricsReport& m);

}  // namespace brbpay

#endif  // BRBPAY_BENCH_REPORT_HPP_

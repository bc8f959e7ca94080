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


#include "brbpay/bench/report.hpp"

#include <fmt/format.h>
#include <fmt/os.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

namespace brbpay {

double nearest_rank(const std::vector<double>& sorted, double pct) {
  if (sorted.empty()) throw Error("percentile of an empty sample");
  const auto n = sorted.size();
  auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

LatencyStats latency_stats(std::vector<double> samples) {
  LatencyStats s;
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  s.count = samples.size();
  s.min = samples.front();
  s.max = samples.back();
  double sum = 0;
  for (double x : samples) sum += x;
  s.avg = sum / static_cast<double>(s.count);
  s.p50 = nearest_rank(samples, 50);
  s.p95 = nearest_rank(samples, 95);
  s.p99 = nearest_rank(samples, 99);
  return s;
}

std::vector<SimTime> quorum_settle_times(const RunResult& r) {
  std::vector<SimTime> out;
  for (const auto& p : r.payments) {
    if (p.at_quorum) out.push_back(*p.at_quorum);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double settle_rate(const RunResult& r, SimTime from, SimTime to) {
  if (to <= from) return 0;
  std::size_t n = 0;
  for (SimTime t : quorum_settle_times(r)) n += (t >= from && t < to) ? 1 : 0;
  return static_cast<double>(n) / (static_cast<double>(to - from) / kSecond);
}

SimTime longest_gap(const RunResult& r, SimTime from, SimTime to) {
  SimTime last = from, gap = 0;
  for (SimTime t : quorum_settle_times(r)) {
    if (t < from || t > to) continue;
    gap = std::max(gap, t - last);
    last = t;
  }
  return std::max(gap, to - last);
}

MetricsReport make_report(const RunResult& r, SimTime bucket) {
  MetricsReport m;
  m.bucket = bucket;
  m.duration_s = static_cast<double>(r.end_time) / kSecond;
  std::vector<double> quorum, rep;
  std::map<std::size_t, std::size_t> per_shard;
  std::size_t shards = 0;
  for (const auto& f : r.finals) shards = std::max(shards, f.shard + 1);
  for (const auto& p : r.payments) {
    ++m.submitted;
    if (p.at_quorum) {
      ++m.settled;
      ++per_shard[p.shard];
      quorum.push_back(static_cast<double>(*p.at_quorum - p.submitted) / kMillisecond);
      const auto k = static_cast<std::size_t>(*p.at_quorum / bucket);
      if (m.timeline.size() <= k) m.timeline.resize(k + 1, 0);
      ++m.timeline[k];
    } else {
      ++m.stalled;
    }
    if (p.at_rep) rep.push_back(static_cast<double>(*p.at_rep - p.submitted) / kMillisecond);
  }
  if (m.duration_s > 0) {
    m.settles_per_second = static_cast<double>(m.settled) / m.duration_s;
    for (std::size_t s = 0; s < shards; ++s) {
      m.shard_settles_per_second.push_back(static_cast<double>(per_shard[s]) / m.duration_s);
    }
  }
  m.quorum_latency = latency_stats(std::move(quorum));
  m.rep_latency = latency_stats(std::move(rep));
  for (std::size_t k = 0; k < kMsgKindCount; ++k) {
    m.messages[to_string(static_cast<MsgKind>(k))] = r.messages[k];
    m.total_messages += r.messages[k];
  }
  m.replica_settles = r.settles_per_replica;
  m.cross_fraction = r.cross.cross_fraction();
  for (const auto& [_, n] : r.cross.messages) m.max_cross_messages = std::max(m.max_cross_messages, n);
  for (const auto& [_, n] : r.cross.rounds) m.max_cross_rounds = std::max(m.max_cross_rounds, n);
  m.violations = r.violations.size();
  m.join_completed = r.join.completed;
  if (r.join.completed) m.join_latency_ms = static_cast<double>(*r.join.resumed_at - r.join.requested_at) / kMillisecond;
  return m;
}

namespace {

nlohmann::ordered_json latency_json(const LatencyStats& s) {
  return {{"count", s.count}, {"min", s.min}, {"avg", s.avg}, {"p50", s.p50},
          {"p95", s.p95},     {"p99", s.p99}, {"max", s.max}};
}

}  // namespace

std::string report_json(const MetricsReport& m) {
  nlohmann::ordered_json j;
  j["duration_s"] = m.duration_s;
  j["submitted"] = m.submitted;
  j["settled"] = m.settled;
  j["stalled"] = m.stalled;
  j["settles_per_second"] = m.settles_per_second;
  j["shard_settles_per_second"] = m.shard_settles_per_second;
  j["latency_quorum_ms"] = latency_json(m.quorum_latency);
  j["latency_rep_ms"] = latency_json(m.rep_latency);
  j["messages"] = m.messages;
  j["total_messages"] = m.total_messages;
  auto& reps = j["replica_settles"] = nlohmann::ordered_json::object();
  for (const auto& [r, n] : m.replica_settles) reps[to_string(r)] = n;
  j["timeline_bucket_ms"] = m.bucket / kMillisecond;
  j["timeline"] = m.timeline;
  j["cross_shard_fraction"] = m.cross_fraction;
  j["max_cross_shard_messages"] = m.max_cross_messages;
  j["max_cross_shard_rounds"] = m.max_cross_rounds;
  j["violations"] = m.violations;
  j["join_completed"] = m.join_completed;
  j["join_latency_ms"] = m.join_latency_ms;
  return j.dump(2);
}

void write_violations(const std::filesystem::path& file, const RunResult& r) {
  nlohmann::ordered_json j;
  j["violations"] = r.violations;
  j["oracle_mismatches"] = r.oracle_mismatches;
  std::ofstream out(file);
  out << j.dump(2) << '\n';
}

void write_outputs(const std::filesystem::path& dir, const RunResult& r, const MetricsReport& m) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json");
    out << report_json(m) << '\n';
  }
  {
    auto out = fmt::output_file((dir / "summary.csv").string());
    out.print("submitted,settled,stalled,duration_s,settles_per_second,lat_avg_ms,lat_p95_ms,lat_p99_ms,"
              "rep_lat_avg_ms,rep_lat_p95_ms,rep_lat_p99_ms,total_messages,violations\n");
    out.print("{},{},{},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{},{}\n", m.submitted, m.settled,
              m.stalled, m.duration_s, m.settles_per_second, m.quorum_latency.avg, m.quorum_latency.p95,
              m.quorum_latency.p99, m.rep_latency.avg, m.rep_latency.p95, m.rep_latency.p99, m.total_messages,
              m.violations);
  }
  {
    auto out = fmt::output_file((dir / "timeline.csv").string());
    out.print("t_start_ms,settles\n");
    for (std::size_t k = 0; k < m.timeline.size(); ++k) {
      out.print("{},{}\n", static_cast<SimTime>(k) * m.bucket / kMillisecond, m.timeline[k]);
    }
  }
  {
    auto out = fmt::output_file((dir / "messages.csv").string());
    out.print("kind,count\n");
    for (const auto& [k, n] : m.messages) out.print("{},{}\n", k, n);
  }
  {
    auto out = fmt::output_file((dir / "replicas.csv").string());
    out.print("replica,shard,behavior,crashed,member,view,settled,blocked,evidence\n");
    for (const auto& f : r.finals) {
      out.print("{},{},{},{},{},{},{},{},{}\n", to_string(f.replica), f.shard, to_string(f.behavior), f.crashed ? 1 : 0,
                f.member ? 1 : 0, f.view, f.settled, f.blocked, f.evidence);
    }
  }
  {
    std::ofstream out(dir / "final_state.jsonl");
    for (const auto& f : r.finals) {
      for (const auto& [c, a] : f.accounts) {
        nlohmann::ordered_json j;
        j["replica"] = to_string(f.replica);
        j["client"] = to_string(c);
        j["balance"] = a.balance;
        j["next_seq"] = a.next_seq;
        j["used_deps"] = a.used_deps.size();
        auto& log = j["xlog"] = nlohmann::ordered_json::array();
        for (const auto& t : f.xlogs.at(c)) log.push_back({t.id.seq, to_string(t.beneficiary), t.amount});
        out << j.dump() << '\n';
      }
    }
  }
  write_violations(dir / "violations.json", r);
  if (!r.trace.empty()) {
    std::ofstream out(dir / "trace.jsonl");
    for (const auto& rec : r.trace) out << Trace::json_line(rec) << '\n';
  }
}

}  // namespace brbpay

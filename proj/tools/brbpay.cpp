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

// brbpay: runs a named scenario or a custom configuration in the simulator
// and reports settle rates, latencies and invariant checks.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "brbpay/bench/config_file.hpp"
#include "brbpay/bench/report.hpp"
#include "brbpay/bench/scenarios.hpp"

namespace {

using namespace brbpay;

struct Outcome {
  std::uint64_t seed = 0;
  RunResult result;
  MetricsReport report;
  std::string error;
};

void print_summary(const Outcome& o, bool with_seed) {
  const MetricsReport& m = o.report;
  if (with_seed) fmt::print("seed {}: ", o.seed);
  fmt::print("{}/{} settled in {:.3f}s sim ({:.1f} pps), {} stalled, latency avg {:.1f}ms p95 {:.1f}ms p99 {:.1f}ms, "
             "{} messages, {} violations",
             m.settled, m.submitted, m.duration_s, m.settles_per_second, m.stalled, m.quorum_latency.avg,
             m.quorum_latency.p95, m.quorum_latency.p99, m.total_messages, m.violations);
  if (o.result.oracle_checked) fmt::print(", {} oracle mismatches", o.result.oracle_mismatches.size());
  if (m.max_cross_rounds > 0) {
    fmt::print(", cross-shard {:.2f}% (max {} msgs, {} round)", 100.0 * m.cross_fraction, m.max_cross_messages,
               m.max_cross_rounds);
  }
  if (o.result.join.requested) {
    if (o.result.join.completed) {
      fmt::print(", join done in {:.1f}ms", m.join_latency_ms);
    } else {
      fmt::print(", join incomplete");
    }
  }
  if (!o.result.trace_digest.empty()) fmt::print(", trace {}", o.result.trace_digest.substr(0, 16));
  fmt::print("\n");
  for (std::size_t i = 0; i < o.result.violations.size() && i < 10; ++i) {
    fmt::print("  violation: {}\n", o.result.violations[i]);
  }
  for (std::size_t i = 0; i < o.result.oracle_mismatches.size() && i < 10; ++i) {
    fmt::print("  oracle: {}\n", o.result.oracle_mismatches[i]);
  }
}

bool clean(const RunResult& r) { return r.violations.empty() && r.oracle_mismatches.empty(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulates broadcast-based payments without consensus."};
  app.set_version_flag("--version", "brbpay 0.1.0");

  std::string scenario = "run";
  ScenarioOptions o;
  std::optional<int> n, f, shards, payments, clients;
  std::optional<double> rate;
  std::optional<std::int64_t> horizon_ms, initial;
  std::optional<std::string> brb, workload, fault_file, config_file, join_fault;
  std::string out_dir, trace = "digest";
  int repeat = 1, threads = 0;
  bool oracle = false, list = false;

  std::string names = "run";
  for (const auto& s : scenario_names()) names += ", " + s;
  app.add_option("scenario", scenario, "One of: " + names);
  app.add_flag("--list", list, "Print scenario names and exit");
  app.add_option("--config", config_file, "Run file with [topology], [workload], [faults]")->check(CLI::ExistingFile);
  app.add_option("--n", n, "Replicas per shard (3f+1)");
  app.add_option("--f", f, "Fault bound per shard");
  app.add_option("--shards", shards, "Number of shards");
  app.add_option("--brb", brb, "Broadcast variant")->check(CLI::IsMember({"echo", "sig"}));
  app.add_option("--workload", workload, "Workload generator")->check(CLI::IsMember({"uniform", "smallbank"}));
  app.add_option("--payments", payments, "Number of payments");
  app.add_option("--rate", rate, "Offered load in payments per simulated second");
  app.add_option("--clients", clients, "Number of clients (smallbank: owners)");
  app.add_option("--initial-balance", initial, "Starting balance of every client");
  app.add_option("--seed", o.seed, "Seed of the first run");
  app.add_option("--fault-plan", fault_file, "Fault plan file")->check(CLI::ExistingFile);
  app.add_option("--join-fault", join_fault, "join scenario: none, crash or forge-snapshot");
  app.add_option("--horizon-ms", horizon_ms, "Simulated time limit");
  app.add_option("--out", out_dir, "Directory for reports and CSV files");
  app.add_option("--repeat", repeat, "Independent runs with consecutive seeds")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "Worker threads for --repeat (0: one per core)");
  app.add_option("--trace", trace, "Trace recording")->check(CLI::IsMember({"none", "digest", "full"}));
  app.add_flag("--oracle", oracle, "Compare final states with the sequential reference");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    fmt::print("run\n");
    for (const auto& s : scenario_names()) fmt::print("{}\n", s);
    return 0;
  }

  std::vector<Outcome> outcomes(static_cast<std::size_t>(repeat));
  try {
    if (config_file) load_run_config(*config_file, o);
    if (n) o.n = n;
    if (f) o.f = f;
    if (shards) o.shards = shards;
    if (brb) o.variant = parse_variant(*brb);
    if (workload) o.workload = workload;
    if (payments) o.payments = payments;
    if (rate) o.rate = rate;
    if (clients) o.clients = clients;
    if (initial) o.initial_balance = *initial;
    if (horizon_ms) o.horizon = *horizon_ms * kMillisecond;
    if (join_fault) o.join_fault = join_fault;
    if (fault_file) o.faults = load_fault_plan(*fault_file);
    o.trace = trace == "full" ? TraceMode::kFull : trace == "digest" ? TraceMode::kDigest : TraceMode::kNone;

    std::vector<RunSpec> specs;
    for (int i = 0; i < repeat; ++i) {
      ScenarioOptions oi = o;
      oi.seed = o.seed + static_cast<std::uint64_t>(i);
      RunSpec spec = scenario == "run" ? make_custom_run(oi) : make_scenario(scenario, oi);
      spec.check_oracle = oracle;
      specs.push_back(std::move(spec));
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < specs.size(); i = next++) {
        outcomes[i].seed = specs[i].seed;
        try {
          outcomes[i].result = run(specs[i]);
        } catch (const ConfigError& e) {
          outcomes[i].error = e.what();
          continue;
        }
        outcomes[i].report = make_report(outcomes[i].result);
      }
    };
    const unsigned cores = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<unsigned>(cores, static_cast<unsigned>(repeat)); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& out : outcomes) {
      if (!out.error.empty()) throw ConfigError(out.error);
    }
  } catch (const ConfigError& e) {
    fmt::print(stderr, "brbpay: {}\n", e.what());
    return 2;
  }

  bool ok = true;
  for (const auto& out : outcomes) {
    print_summary(out, repeat > 1);
    ok = ok && clean(out.result);
    if (!out_dir.empty()) {
      std::filesystem::path dir = out_dir;
      if (repeat > 1) dir /= fmt::format("seed-{}", out.seed);
      std::filesystem::create_directories(dir);
      write_outputs(dir, out.result, out.report);
    } else if (!clean(out.result)) {
      const std::string file = repeat > 1 ? fmt::format("violations-seed-{}.json", out.seed) : "violations.json";
      write_violations(file, out.result);
      fmt::print(stderr, "brbpay: invariant violations written to {}\n", file);
    }
  }
  return ok ? 0 : 1;
}

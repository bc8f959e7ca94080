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

#ifndef BRBPAY_BENCH_CONFIG_FILE_HPP_
#define BRBPAY_BENCH_CONFIG_FILE_HPP_

#include <filesystem>
#include <string>

#include "brbpay/bench/scenarios.hpp"

namespace brbpay {

// Run files are flat key = value pairs under [topology], [workload] and
// [faults]. List values are comma separated, optionally quoted:
//
//   [faults]
//   crash = "r3@30000"            # replica@ms
//   delay = "r3@30000+100"        # replica@ms+extra_ms
//   byzantine = "r0=equivocate, r1=withhold"
//   double_spenders = "c0, c1"

/// Fills the options the text sets; throws ConfigError on unknown keys or
/// malformed values.
void apply_run_config(const std::string& text, ScenarioOptions& o);
void load_run_config(const std::filesystem::path& file, ScenarioOptions& o);

/// Reads the [faults] section, or bare top-level keys, of a fault plan.
FaultPlan parse_fault_plan(const std::string& text);
FaultPlan load_fault_plan(const std::filesystem::path& file);

ReplicaId parse_replica(const std::string& token);
ClientId parse_client(const std::string& token);
BrbVariant parse_variant(const std::string& s);

}  // namespace brbpay

#endif  // BRBPAY_BENCH_CONFIG_FILE_HPP_

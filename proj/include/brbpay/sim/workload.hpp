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

#ifndef BRBPAY_SIM_WORKLOAD_HPP_
#define BRBPAY_SIM_WORKLOAD_HPP_

#include <optional>
#include <string>
#include <vector>

#include "brbpay/core/payment.hpp"

namespace brbpay {

class ShardTopology;

enum class OpKind : std::uint8_t {
  kUniform,
  kSendPayment,  // smallbank: checking to another owner's checking
  kTransfer,     // smallbank: between one owner's checking and savings
};

const char* to_string(OpKind k);

struct WorkloadEntry {
  SimTime at = 0;
  ClientId spender;
  ClientId beneficiary;
  Amount amount = 0;
  OpKind kind = OpKind::kUniform;
  /// Set for double-spend attempts: a second payment with the same
  /// sequence number to this beneficiary.
  std::optional<ClientId> twin_beneficiary;
};

/// Entries in submission order. A client's sequence numbers follow the
/// order of its entries.
struct Workload {
  std::vector<WorkloadEntry> entries;

  /// The payments the entries denote, with sequence numbers assigned.
  std::vector<Payment> payments() const;
  /// Second payments of double-spend attempts.
  std::vector<Payment> twins() const;
  /// Throws ConfigError unless every client is configured and submit
  /// times are non-decreasing.
  void validate(const ShardTopology& topology) const;
};

}  // namespace brbpay

#endif  // BRBPAY_SIM_WORKLOAD_HPP_

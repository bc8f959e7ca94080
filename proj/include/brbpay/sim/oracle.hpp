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


#ifndef BRBPAY_SIM_ORACLE_HPP_
#define BRBPAY_SIM_ORACLE_HPP_

#include <map>
#include <vector>

#include "brbpay/core/payment.hpp"

namespace brbpay {

/// Ground truth: the state every correct replica must reach once all
/// traffic has drained.
struct OracleLedger {
  std::map<ClientId, Amount> balances;
  std::map<ClientId, SeqNo> next_seq;
  std::map<ClientId, std::vector<Payment>> xlogs;
};

enum class RetryOrder { kAscending, kDescending };

/// Settles `payments` (each client's in seq order, seqs contiguous) under
/// head-of-line blocking: a client's next payment waits until its balance
/// covers it. Iterates to the fixpoint, visiting blocked clients in `order`.
/// Throws ConfigError on gaps or unknown clients.
OracleLedger oracle_apply(const std::vector<Payment>& payments, const std::map<ClientId, Amount>& initial,
                          RetryOrder order = RetryOrder::kAscending);

/// Both retry orders; throws Error if they disagree.
OracleLedger oracle_fixpoint(const std::vector<Payment>& payments, const std::map<ClientId, Amount>& initial);

bool operator==(const OracleLedger& a, const OracleLedger& b);

}  // namespace brbpay

#endif  // BRBPAY_SIM_ORACLE_HPP_

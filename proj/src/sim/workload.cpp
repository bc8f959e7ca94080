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

#include "brbpay/sim/workload.hpp"

#include <unordered_map>

#include "brbpay/shard/topology.hpp"

namespace brbpay {

const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::kUniform: return "uniform";
    case OpKind::kSendPayment: return "send-payment";
    case OpKind::kTransfer: return "transfer";
  }
  return "?";
}

std::vector<Payment> Workload::payments() const {
  std::unordered_map<ClientId, SeqNo> next;
  std::vector<Payment> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back({{e.spender, next[e.spender]++}, e.beneficiary, e.amount, {}});
  return out;
}

std::vector<Payment> Workload::twins() const {
  std::unordered_map<ClientId, SeqNo> next;
  std::vector<Payment> out;
  for (const auto& e : entries) {
    const SeqNo seq = next[e.spender]++;
    if (e.twin_beneficiary) out.push_back({{e.spender, seq}, *e.twin_beneficiary, e.amount, {}});
  }
  return out;
}

void Workload::validate(const ShardTopology& topology) const {
  SimTime last = 0;
  for (const auto& e : entries) {
    if (!topology.knows(e.spender)) throw ConfigError("workload names unknown client " + to_string(e.spender));
    if (!topology.knows(e.beneficiary)) throw ConfigError("workload names unknown client " + to_string(e.beneficiary));
    if (e.twin_beneficiary && !topology.knows(*e.twin_beneficiary)) {
      throw ConfigError("workload names unknown client " + to_string(*e.twin_beneficiary));
    }
    if (e.at < last) throw ConfigError("workload submit times must be non-decreasing");
    last = e.at;
  }
}

}  // namespace brbpay

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


#include "brbpay/sim/oracle.hpp"

#include <deque>

namespace brbpay {

OracleLedger oracle_apply(const std::vector<Payment>& payments, const std::map<ClientId, Amount>& initial,
                          RetryOrder order) {
  OracleLedger out;
  std::map<ClientId, std::deque<const Payment*>> queues;
  for (const auto& [c, amount] : initial) {
    out.balances[c] = amount;
    out.next_seq[c] = 0;
    out.xlogs[c];
  }
  std::map<ClientId, SeqNo> expect;
  for (const auto& p : payments) {
    if (!initial.contains(p.spender()) || !initial.contains(p.beneficiary)) {
      throw ConfigError("oracle: payment " + to_string(p.id) + " names an unknown client");
    }
    if (p.id.seq != expect[p.spender()]++) throw ConfigError("oracle: gap before " + to_string(p.id));
    queues[p.spender()].push_back(&p);
  }

  auto drain = [&](ClientId c) {
    bool any = false;
    auto& q = queues[c];
    while (!q.empty() && out.balances[c] >= q.front()->amount) {
      const Payment& p = *q.front();
      q.pop_front();
      out.balances[c] -= p.amount;
      out.balances[p.beneficiary] += p.amount;
      ++out.next_seq[c];
      out.xlogs[c].push_back(p);
      any = true;
    }
    return any;
  };

  for (bool progress = true; progress;) {
    progress = false;
    if (order == RetryOrder::kAscending) {
      for (auto it = queues.begin(); it != queues.end(); ++it) progress = drain(it->first) || progress;
    } else {
      for (auto it = queues.rbegin(); it != queues.rend(); ++it) progress = drain(it->first) || progress;
    }
  }
  return out;
}

OracleLedger oracle_fixpoint(const std::vector<Payment>& payments, const std::map<ClientId, Amount>& initial) {
  OracleLedger a = oracle_apply(payments, initial, RetryOrder::kAscending);
  if (!(a == oracle_apply(payments, initial, RetryOrder::kDescending))) {
    throw Error("oracle fixpoint depends on retry order");
  }
  return a;
}

bool operator==(const OracleLedger& a, const OracleLedger& b) {
  if (a.balances != b.balances || a.next_seq != b.next_seq || a.xlogs.size() != b.xlogs.size()) return false;
  for (auto ia = a.xlogs.begin(), ib = b.xlogs.begin(); ia != a.xlogs.end(); ++ia, ++ib) {
    if (ia->first != ib->first || ia->second.size() != ib->second.size()) return false;
    for (std::size_t k = 0; k < ia->second.size(); ++k) {
      if (ia->second[k].tuple() != ib->second[k].tuple()) return false;
    }
  }
  return true;
}

}  // namespace brbpay

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

#ifndef BRBPAY_BRB_FIFO_GATE_HPP_
#define BRBPAY_BRB_FIFO_GATE_HPP_

#include <map>
#include <unordered_map>
#include <vector>

#include "brbpay/core/payment.hpp"

namespace brbpay {

/// Per-spender FIFO delivery: (s, n) is released only after (s, n-1), and
/// each payment id at most once.
class FifoGate {
 public:
  /// Payments that became deliverable because of `p`, in order. Duplicates
  /// and ids below the delivered prefix yield nothing.
  std::vector<Payment> offer(const Payment& p);

  /// Number of payments of `c` released so far.
  SeqNo delivered(ClientId c) const;
  std::map<ClientId, SeqNo> delivered_prefixes() const;

  std::size_t held() const;
  std::size_t duplicates() const { return duplicates_; }
  std::size_t conflicts() const { return conflicts_; }

 private:
  std::unordered_map<ClientId, SeqNo> next_;
  std::unordered_map<ClientId, std::map<SeqNo, Payment>> held_;
  std::size_t duplicates_ = 0;
  std::size_t conflicts_ = 0;
};

}  // namespace brbpay

#endif  // BRBPAY_BRB_FIFO_GATE_HPP_

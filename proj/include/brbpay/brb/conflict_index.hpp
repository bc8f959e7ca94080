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

#ifndef BRBPAY_BRB_CONFLICT_INDEX_HPP_
#define BRBPAY_BRB_CONFLICT_INDEX_HPP_

#include <unordered_map>
#include <vector>

#include "brbpay/brb/messages.hpp"

namespace brbpay {

/// First payload this replica vouched for under each payment id. Lives for
/// the replica's lifetime, across views.
class ConflictIndex {
 public:
  /// Records every payment of `batch` and returns true, unless one of them
  /// clashes with an earlier payload; then nothing is recorded, the clashing
  /// ids go to `conflicts` and the result is false.
  bool admit(const PaymentBatch& batch, std::vector<PaymentId>* conflicts = nullptr);

  /// Unconditional record, used for payloads that were delivered.
  void record(const Payment& p);

  bool conflicts_with(const Payment& p) const;
  std::size_t size() const { return first_.size(); }

 private:
  std::unordered_map<PaymentId, Digest> first_;
};

}  // namespace brbpay

#endif  // BRBPAY_BRB_CONFLICT_INDEX_HPP_

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

#include "brbpay/brb/conflict_index.hpp"

namespace brbpay {

bool ConflictIndex::admit(const PaymentBatch& batch, std::vector<PaymentId>* conflicts) {
  std::vector<std::pair<PaymentId, Digest>> fresh;
  bool ok = true;
  batch.for_each([&](const Payment& p) {
    const Digest d = payment_digest(p);
    auto it = first_.find(p.id);
    if (it != first_.end()) {
      if (it->second != d) {
        ok = false;
        if (conflicts) conflicts->push_back(p.id);
      }
      return;
    }
    for (const auto& [id, other] : fresh) {
      // the same batch naming one id twice with different payloads
      if (id == p.id && other != d) {
        ok = false;
        if (conflicts) conflicts->push_back(p.id);
        return;
      }
    }
    fresh.emplace_back(p.id, d);
  });
  if (!ok) return false;
  for (auto& [id, d] : fresh) first_.emplace(id, d);
  return true;
}

void ConflictIndex::record(const Payment& p) { first_[p.id] = payment_digest(p); }

bool ConflictIndex::conflicts_with(const Payment& p) const {
  auto it = first_.find(p.id);
  return it != first_.end() && it->second != payment_digest(p);
}

}  // namespace brbpay

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

#include "brbpay/brb/fifo_gate.hpp"

namespace brbpay {

std::vector<Payment> FifoGate::offer(const Payment& p) {
  std::vector<Payment> out;
  const ClientId c = p.spender();
  SeqNo& next = next_[c];
  if (p.id.seq < next) {
    ++duplicates_;
    return out;
  }
  auto& held = held_[c];
  if (p.id.seq > next) {
    auto [it, inserted] = held.emplace(p.id.seq, p);
    if (!inserted) {
      if (same_payload(it->second, p)) {
        ++duplicates_;
      } else {
        ++conflicts_;
      }
    }
    return out;
  }
  out.push_back(p);
  ++next;
  for (auto it = held.begin(); it != held.end() && it->first == next; it = held.erase(it)) {
    out.push_back(std::move(it->second));
    ++next;
  }
  return out;
}

SeqNo FifoGate::delivered(ClientId c) const {
  auto it = next_.find(c);
  return it == next_.end() ? 0 : it->second;
}

std::map<ClientId, SeqNo> FifoGate::delivered_prefixes() const {
  std::map<ClientId, SeqNo> out;
  for (const auto& [c, n] : next_) {
    if (n > 0) out[c] = n;
  }
  return out;
}

std::size_t FifoGate::held() const {
  std::size_t n = 0;
  for (const auto& [_, h] : held_) n += h.size();
  return n;
}

}  // namespace brbpay

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

#ifndef BRBPAY_BRB_REPLICA_SET_HPP_
#define BRBPAY_BRB_REPLICA_SET_HPP_

#include <bit>
#include <cstdint>
#include <vector>

#include "brbpay/core/ids.hpp"

namespace brbpay {

/// Grow-only bitset of replica ids; quorum counting is on the hot path.
class ReplicaSet {
 public:
  /// False if `r` was already present.
  bool insert(ReplicaId r) {
    const std::size_t word = r.value / 64;
    if (word >= words_.size()) words_.resize(word + 1, 0);
    const std::uint64_t bit = std::uint64_t{1} << (r.value % 64);
    if (words_[word] & bit) return false;
    words_[word] |= bit;
    ++count_;
    return true;
  }

  bool contains(ReplicaId r) const {
    const std::size_t word = r.value / 64;
    return word < words_.size() && (words_[word] >> (r.value % 64)) & 1;
  }

  int size() const { return count_; }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      for (std::uint64_t bits = words_[w]; bits != 0; bits &= bits - 1) {
        f(ReplicaId{static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits))});
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
  int count_ = 0;
};

}  // namespace brbpay

#endif  // BRBPAY_BRB_REPLICA_SET_HPP_

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

#ifndef BRBPAY_ENGINE_CLIENT_HPP_
#define BRBPAY_ENGINE_CLIENT_HPP_

#include "brbpay/brb/messages.hpp"

namespace brbpay {

/// Client side of the payment protocol: numbers its own payments and signs
/// submissions for its representative.
class Client {
 public:
  Client(ClientId id, ReplicaId representative) : id_(id), representative_(representative) {}

  ClientId id() const { return id_; }
  ReplicaId representative() const { return representative_; }
  SeqNo next_seq() const { return next_seq_; }

  /// Next payment, signed; advances the sequence counter.
  SubmitMsg pay(ClientId beneficiary, Amount amount, const KeyRegistry& keys);

  /// A conflicting payment reusing the sequence number of `original`.
  SubmitMsg conflicting(const SubmitMsg& original, ClientId beneficiary, const KeyRegistry& keys) const;

 private:
  ClientId id_;
  ReplicaId representative_;
  SeqNo next_seq_ = 0;
};

}  // namespace brbpay

#endif  // BRBPAY_ENGINE_CLIENT_HPP_

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

#include "brbpay/engine/client.hpp"

namespace brbpay {

SubmitMsg Client::pay(ClientId beneficiary, Amount amount, const KeyRegistry& keys) {
  Payment p{{id_, next_seq_++}, beneficiary, amount, {}};
  Signature sig = keys.sign(Principal::of(id_), submission_signing_bytes(p));
  return {std::move(p), sig};
}

SubmitMsg Client::conflicting(const SubmitMsg& original, ClientId beneficiary, const KeyRegistry& keys) const {
  Payment p{original.payment.id, beneficiary, original.payment.amount, {}};
  Signature sig = keys.sign(Principal::of(id_), submission_signing_bytes(p));
  return {std::move(p), sig};
}

}  // namespace brbpay

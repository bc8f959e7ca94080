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

#include "brbpay/brb/sig_brb.hpp"

namespace brbpay {

bool verify_commit_certificate(const CommitCertificate& cert, const GroupView& view, const KeyRegistry& keys) {
  const Bytes msg = ack_signing_bytes(cert.domain, cert.key, cert.digest);
  ReplicaSet signers;
  for (const auto& sig : cert.acks) {
    if (sig.signer.kind != Principal::Kind::kReplica) continue;
    const ReplicaId r{sig.signer.id};
    if (!view.contains(r) || signers.contains(r)) continue;
    if (!keys.verify(sig.signer, msg, sig)) continue;
    signers.insert(r);
  }
  return signers.size() >= view.quorum();
}

}  // namespace brbpay

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

#include "brbpay/core/payment.hpp"

#include <algorithm>

namespace brbpay {

bool CreditProof::covers(const PaymentTuple& t) const {
  return std::find(tuples.begin(), tuples.end(), t) != tuples.end();
}

Bytes credit_signing_bytes(std::span<const PaymentTuple> tuples) {
  ByteWriter w(8 + tuples.size() * 24);
  w.raw(as_bytes("CREDIT"));
  w.u32(static_cast<std::uint32_t>(tuples.size()));
  for (const auto& t : tuples) encode_tuple(w, t);
  return std::move(w).take();
}

void encode_tuple(ByteWriter& w, const PaymentTuple& t) {
  w.u32(t.id.spender.value);
  w.u64(t.id.seq);
  w.u32(t.beneficiary.value);
  w.u64(t.amount);
}

void encode_signature(ByteWriter& w, const Signature& s) {
  w.u8(static_cast<std::uint8_t>(s.signer.kind));
  w.u32(s.signer.id);
  w.blob(s.view());
}

Signature decode_signature(ByteReader& r) {
  Signature s;
  auto kind = r.u8();
  if (kind > 1) throw DecodeError("bad principal kind");
  s.signer.kind = static_cast<Principal::Kind>(kind);
  s.signer.id = r.u32();
  auto bytes = r.blob();
  if (bytes.size() > kMaxSignatureSize) throw DecodeError("oversized signature");
  std::copy(bytes.begin(), bytes.end(), s.bytes.begin());
  s.size = static_cast<std::uint8_t>(bytes.size());
  return s;
}

namespace {

PaymentTuple decode_tuple(ByteReader& r) {
  PaymentTuple t;
  t.id.spender.value = r.u32();
  t.id.seq = r.u64();
  t.beneficiary.value = r.u32();
  t.amount = r.u64();
  return t;
}

}  // namespace

void encode_certificate(ByteWriter& w, const DependencyCertificate& c) {
  encode_tuple(w, c.tuple);
  w.u32(static_cast<std::uint32_t>(c.proofs.size()));
  for (const auto& p : c.proofs) {
    w.u32(p->signer.value);
    w.u32(static_cast<std::uint32_t>(p->tuples.size()));
    for (const auto& t : p->tuples) encode_tuple(w, t);
    encode_signature(w, p->sig);
  }
}

void encode_payment(ByteWriter& w, const Payment& p) {
  encode_tuple(w, p.tuple());
  w.u32(static_cast<std::uint32_t>(p.deps.size()));
  for (const auto& d : p.deps) encode_certificate(w, d);
}

Payment decode_payment(ByteReader& r) {
  Payment p;
  auto t = decode_tuple(r);
  p.id = t.id;
  p.beneficiary = t.beneficiary;
  p.amount = t.amount;
  auto ndeps = r.u32();
  for (std::uint32_t i = 0; i < ndeps; ++i) {
    DependencyCertificate c;
    c.tuple = decode_tuple(r);
    auto nproofs = r.u32();
    for (std::uint32_t j = 0; j < nproofs; ++j) {
      auto proof = std::make_shared<CreditProof>();
      proof->signer.value = r.u32();
      auto ntuples = r.u32();
      if (ntuples > r.remaining() / 24) throw DecodeError("tuple count exceeds input");
      for (std::uint32_t k = 0; k < ntuples; ++k) proof->tuples.push_back(decode_tuple(r));
      proof->sig = decode_signature(r);
      c.proofs.push_back(std::move(proof));
    }
    p.deps.push_back(std::move(c));
  }
  return p;
}

bool same_payload(const Payment& a, const Payment& b) {
  if (a.tuple() != b.tuple() || a.deps.size() != b.deps.size()) return false;
  if (a.deps.empty()) return true;
  return payment_digest(a) == payment_digest(b);
}

Digest payment_digest(const Payment& p) {
  ByteWriter w(64);
  encode_payment(w, p);
  return digest(w.bytes());
}

Bytes submission_signing_bytes(const Payment& p) {
  ByteWriter w(32);
  w.raw(as_bytes("SUBMIT"));
  encode_tuple(w, p.tuple());
  return std::move(w).take();
}

Bytes encode_submission(const Payment& p, const Signature& client_sig) {
  ByteWriter w(128);
  encode_payment(w, p);
  w.u8(client_sig.size);
  w.raw(client_sig.view());
  w.zeros(kAuthenticatorSlot - client_sig.size);
  return std::move(w).take();
}

std::pair<Payment, Signature> decode_submission(ByteView bytes) {
  ByteReader r(bytes);
  Payment p = decode_payment(r);
  Signature s;
  s.signer = Principal::of(p.id.spender);
  s.size = r.u8();
  if (s.size > kAuthenticatorSlot) throw DecodeError("oversized authenticator");
  auto slot = r.raw(kAuthenticatorSlot);
  std::copy(slot.begin(), slot.begin() + s.size, s.bytes.begin());
  if (!r.done()) throw DecodeError("trailing bytes after submission");
  return {std::move(p), s};
}

void XLog::append(Payment p) {
  if (p.id.spender != owner_) {
    throw XLogOwnerError("payment of " + to_string(p.id.spender) + " appended to log of " + to_string(owner_));
  }
  if (p.id.seq != entries_.size()) {
    throw XLogGapError("append of seq " + std::to_string(p.id.seq) + " to log of length " +
                       std::to_string(entries_.size()));
  }
  entries_.push_back(std::move(p));
}

XLog append_to_xlog(XLog log, Payment p) {
  log.append(std::move(p));
  return log;
}

}  // namespace brbpay

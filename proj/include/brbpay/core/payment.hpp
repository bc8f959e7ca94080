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

#ifndef BRBPAY_CORE_PAYMENT_HPP_
#define BRBPAY_CORE_PAYMENT_HPP_

#include <memory>
#include <set>
#include <vector>

#include "brbpay/core/bytes.hpp"
#include "brbpay/core/ids.hpp"
#include "brbpay/crypto/crypto.hpp"

namespace brbpay {

/// The four fields every replica agrees on for a payment.
struct PaymentTuple {
  PaymentId id;
  ClientId beneficiary;
  Amount amount = 0;
  auto operator<=>(const PaymentTuple&) const = default;
};

/// A settling replica's signed attestation over one sub-batch of settled
/// payments. A single-payment sub-batch is exactly a (tuple, signature) pair.
struct CreditProof {
  ReplicaId signer;
  std::vector<PaymentTuple> tuples;
  Signature sig;

  bool covers(const PaymentTuple& t) const;
};

/// Bytes a replica signs when attesting `tuples`.
Bytes credit_signing_bytes(std::span<const PaymentTuple> tuples);

/// f+1 credit proofs from distinct replicas of the spender's shard.
struct DependencyCertificate {
  PaymentTuple tuple;
  std::vector<std::shared_ptr<const CreditProof>> proofs;

  Amount amount() const { return tuple.amount; }
};

struct Payment {
  PaymentId id;
  ClientId beneficiary;
  Amount amount = 0;
  std::vector<DependencyCertificate> deps;

  PaymentTuple tuple() const { return {id, beneficiary, amount}; }
  ClientId spender() const { return id.spender; }
};

/// Payload equality: tuple and attached certificates (by content).
bool same_payload(const Payment& a, const Payment& b);

void encode_tuple(ByteWriter& w, const PaymentTuple& t);
void encode_signature(ByteWriter& w, const Signature& s);
Signature decode_signature(ByteReader& r);
void encode_certificate(ByteWriter& w, const DependencyCertificate& c);
void encode_payment(ByteWriter& w, const Payment& p);
Payment decode_payment(ByteReader& r);

Digest payment_digest(const Payment& p);

/// Size of the fixed authenticator slot in a client submission; a DER
/// ECDSA P-256 signature fits.
inline constexpr std::size_t kAuthenticatorSlot = kMaxSignatureSize;

/// Client -> representative wire image: payment fields, then a fixed-size
/// authenticator slot. A dependency-free submission takes 101 bytes.
Bytes encode_submission(const Payment& p, const Signature& client_sig);
std::pair<Payment, Signature> decode_submission(ByteView bytes);

/// Bytes a client signs when submitting `p` (tuple only).
Bytes submission_signing_bytes(const Payment& p);

class XLogGapError : public Error {
 public:
  using Error::Error;
};

class XLogOwnerError : public Error {
 public:
  using Error::Error;
};

/// Append-only log of one client's outgoing payments; entry k has seq k.
class XLog {
 public:
  XLog() = default;
  explicit XLog(ClientId owner) : owner_(owner) {}

  ClientId owner() const { return owner_; }
  const std::vector<Payment>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const Payment& operator[](std::size_t k) const { return entries_[k]; }

  /// Throws XLogOwnerError on spender mismatch, XLogGapError unless
  /// p.id.seq == size().
  void append(Payment p);

 private:
  ClientId owner_;
  std::vector<Payment> entries_;
};

/// Value-returning form of XLog::append.
XLog append_to_xlog(XLog log, Payment p);

struct AccountState {
  Amount balance = 0;
  SeqNo next_seq = 0;
  std::set<PaymentId> used_deps;
};

}  // namespace brbpay

#endif  // BRBPAY_CORE_PAYMENT_HPP_

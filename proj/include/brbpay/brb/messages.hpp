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

// Every message kind exchanged between clients and replicas. Large bodies
// (batches, certificates, snapshots) are shared immutably so one broadcast
// fans out without copies.

#ifndef BRBPAY_BRB_MESSAGES_HPP_
#define BRBPAY_BRB_MESSAGES_HPP_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "brbpay/core/payment.hpp"
#include "brbpay/crypto/crypto.hpp"

namespace brbpay {

class ShardTopology;

enum class MsgKind : std::uint8_t {
  kSubmit,
  kBalanceQuery,
  kBalanceReply,
  kPrepare,
  kEcho,
  kReady,
  kPayloadRequest,
  kPayloadResponse,
  kAck,
  kCommit,
  kCredit,
  kJoinRequest,
  kJoinRedirect,
  kInstallPrepare,
  kInstallAck,
  kInstallCommit,
  kStateSnapshot,
  kResumeAck,
};

inline constexpr std::size_t kMsgKindCount = 18;
const char* to_string(MsgKind k);

/// Names one broadcast instance: the view it runs in, its broadcaster and
/// the broadcaster's running counter.
struct BatchKey {
  std::uint64_t view = 0;
  ReplicaId broadcaster;
  std::uint64_t seq = 0;
  auto operator<=>(const BatchKey&) const = default;
};

/// Payments of one batch whose beneficiaries share a representative.
struct SubBatch {
  ReplicaId beneficiary_rep;
  std::vector<Payment> payments;
  /// Spender signatures over each payment's submission, same order.
  std::vector<Signature> client_sigs;
};

struct PaymentBatch {
  std::vector<SubBatch> sub_batches;

  std::size_t size() const;
  template <class F>
  void for_each(F&& f) const {
    for (const auto& sb : sub_batches)
      for (const auto& p : sb.payments) f(p);
  }
};

Digest batch_digest(const PaymentBatch& batch);

/// Splits `pending` (in order) into batches of at most `max_batch` payments,
/// each grouped into sub-batches by the beneficiary's representative.
/// `sig_of` supplies client signatures; without it they are left empty.
std::vector<PaymentBatch> make_batches(const std::vector<Payment>& pending, const ShardTopology& topology,
                                       std::size_t max_batch = 256,
                                       const std::function<Signature(const Payment&)>& sig_of = {});

enum class SigDomain : std::uint8_t { kPayments = 0, kInstall = 1 };

struct CommitCertificate {
  SigDomain domain = SigDomain::kPayments;
  BatchKey key;
  Digest digest{};
  std::vector<Signature> acks;
};

Bytes ack_signing_bytes(SigDomain domain, const BatchKey& key, const Digest& d);
Bytes prepare_signing_bytes(SigDomain domain, const BatchKey& key, const Digest& d);

/// Membership change record broadcast inside the old view.
struct InstallRecord {
  std::uint64_t new_view = 0;
  std::vector<ReplicaId> members;
  int f = 0;
  ReplicaId joiner;
  Signature join_sig;  // joiner's signature over join_signing_bytes
};

Digest install_digest(const InstallRecord& r);
Bytes join_signing_bytes(ReplicaId joiner, std::uint64_t view);

struct SubmitMsg {
  Payment payment;
  Signature client_sig;
};

struct BalanceQueryMsg {
  ClientId client;
};

struct BalanceReplyMsg {
  ClientId client;
  Amount balance = 0;
  Amount pending_credit = 0;  // certificates formed but not yet spent
  SeqNo settled = 0;
};

template <class P>
struct PrepareOf {
  BatchKey key;
  std::shared_ptr<const P> payload;
  Digest digest{};
  std::optional<Signature> broadcaster_sig;
};

template <class P>
struct CommitOf {
  BatchKey key;
  std::shared_ptr<const P> payload;
  std::shared_ptr<const CommitCertificate> cert;
};

using PrepareMsg = PrepareOf<PaymentBatch>;
using CommitMsg = CommitOf<PaymentBatch>;
using InstallPrepareMsg = PrepareOf<InstallRecord>;
using InstallCommitMsg = CommitOf<InstallRecord>;

struct EchoMsg {
  BatchKey key;
  Digest digest{};
};

struct ReadyMsg {
  BatchKey key;
  Digest digest{};
};

struct PayloadRequestMsg {
  BatchKey key;
  Digest digest{};
};

struct PayloadResponseMsg {
  BatchKey key;
  std::shared_ptr<const PaymentBatch> payload;
  Digest digest{};
};

struct AckMsg {
  SigDomain domain = SigDomain::kPayments;
  BatchKey key;
  Digest digest{};
  Signature sig;
};

struct CreditMsg {
  std::shared_ptr<const CreditProof> proof;
};

struct JoinRequestMsg {
  ReplicaId joiner;
  std::uint64_t attempt = 0;
  Signature sig;
};

struct JoinRedirectMsg {
  std::uint64_t view_id = 0;
  std::vector<ReplicaId> members;
  int f = 0;
};

using LogMap = std::map<ClientId, std::vector<Payment>>;

struct StateSnapshotMsg {
  std::uint64_t view = 0;
  std::shared_ptr<const LogMap> logs;
};

struct ResumeAckMsg {
  std::uint64_t view = 0;
  std::shared_ptr<const std::map<ClientId, SeqNo>> delivered;
};

using Message = std::variant<SubmitMsg, BalanceQueryMsg, BalanceReplyMsg, PrepareMsg, EchoMsg, ReadyMsg,
                             PayloadRequestMsg, PayloadResponseMsg, AckMsg, CommitMsg, CreditMsg, JoinRequestMsg,
                             JoinRedirectMsg, InstallPrepareMsg, InstallCommitMsg, StateSnapshotMsg, ResumeAckMsg>;

MsgKind kind_of(const Message& m);

/// Canonical (kind, fields) image that link MACs cover. Bodies that travel
/// with their own digest are represented by that digest.
Bytes auth_bytes(const Message& m, std::uint64_t view);

/// Payment ids a message is about, for trace records. Empty when the message
/// names a batch instance only.
std::vector<PaymentId> payment_ids_of(const Message& m);

}  // namespace brbpay

#endif  // BRBPAY_BRB_MESSAGES_HPP_

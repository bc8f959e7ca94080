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

#include "brbpay/brb/messages.hpp"

#include <algorithm>

#include "brbpay/shard/topology.hpp"

namespace brbpay {

const char* to_string(MsgKind k) {
  switch (k) {
    case MsgKind::kSubmit: return "SUBMIT";
    case MsgKind::kBalanceQuery: return "BALANCE_QUERY";
    case MsgKind::kBalanceReply: return "BALANCE_REPLY";
    case MsgKind::kPrepare: return "PREPARE";
    case MsgKind::kEcho: return "ECHO";
    case MsgKind::kReady: return "READY";
    case MsgKind::kPayloadRequest: return "PAYLOAD_REQ";
    case MsgKind::kPayloadResponse: return "PAYLOAD_RESP";
    case MsgKind::kAck: return "ACK";
    case MsgKind::kCommit: return "COMMIT";
    case MsgKind::kCredit: return "CREDIT";
    case MsgKind::kJoinRequest: return "JOIN_REQ";
    case MsgKind::kJoinRedirect: return "JOIN_REDIRECT";
    case MsgKind::kInstallPrepare: return "INSTALL_PREPARE";
    case MsgKind::kInstallAck: return "INSTALL_ACK";
    case MsgKind::kInstallCommit: return "INSTALL";
    case MsgKind::kStateSnapshot: return "STATE_SNAPSHOT";
    case MsgKind::kResumeAck: return "RESUME_ACK";
  }
  return "?";
}

std::size_t PaymentBatch::size() const {
  std::size_t n = 0;
  for (const auto& sb : sub_batches) n += sb.payments.size();
  return n;
}

Digest batch_digest(const PaymentBatch& batch) {
  ByteWriter w(64 + batch.size() * 32);
  w.raw(as_bytes("BATCH"));
  w.u32(static_cast<std::uint32_t>(batch.sub_batches.size()));
  for (const auto& sb : batch.sub_batches) {
    w.u32(sb.beneficiary_rep.value);
    w.u32(static_cast<std::uint32_t>(sb.payments.size()));
    for (const auto& p : sb.payments) encode_payment(w, p);
    w.u32(static_cast<std::uint32_t>(sb.client_sigs.size()));
    for (const auto& s : sb.client_sigs) encode_signature(w, s);
  }
  return digest(w.bytes());
}

std::vector<PaymentBatch> make_batches(const std::vector<Payment>& pending, const ShardTopology& topology,
                                       std::size_t max_batch,
                                       const std::function<Signature(const Payment&)>& sig_of) {
  if (max_batch == 0) throw ConfigError("max batch size must be positive");
  std::vector<PaymentBatch> out;
  for (std::size_t start = 0; start < pending.size(); start += max_batch) {
    const std::size_t end = std::min(pending.size(), start + max_batch);
    std::map<ReplicaId, std::vector<Payment>> groups;
    for (std::size_t i = start; i < end; ++i) {
      groups[topology.representative_of(pending[i].beneficiary)].push_back(pending[i]);
    }
    PaymentBatch batch;
    for (auto& [rep, payments] : groups) {
      SubBatch sb{rep, std::move(payments), {}};
      if (sig_of) {
        sb.client_sigs.reserve(sb.payments.size());
        for (const auto& p : sb.payments) sb.client_sigs.push_back(sig_of(p));
      }
      batch.sub_batches.push_back(std::move(sb));
    }
    out.push_back(std::move(batch));
  }
  return out;
}

namespace {

void encode_key(ByteWriter& w, const BatchKey& k) {
  w.u64(k.view);
  w.u32(k.broadcaster.value);
  w.u64(k.seq);
}

Bytes signing_bytes(std::string_view tag, SigDomain domain, const BatchKey& key, const Digest& d) {
  ByteWriter w(64);
  w.raw(as_bytes(tag));
  w.u8(static_cast<std::uint8_t>(domain));
  encode_key(w, key);
  w.raw(d);
  return std::move(w).take();
}

}  // namespace

Bytes ack_signing_bytes(SigDomain domain, const BatchKey& key, const Digest& d) {
  return signing_bytes("ACK", domain, key, d);
}

Bytes prepare_signing_bytes(SigDomain domain, const BatchKey& key, const Digest& d) {
  return signing_bytes("PREPARE", domain, key, d);
}

Digest install_digest(const InstallRecord& r) {
  ByteWriter w(64);
  w.raw(as_bytes("INSTALL"));
  w.u64(r.new_view);
  w.u32(static_cast<std::uint32_t>(r.members.size()));
  for (auto m : r.members) w.u32(m.value);
  w.u32(static_cast<std::uint32_t>(r.f));
  w.u32(r.joiner.value);
  encode_signature(w, r.join_sig);
  return digest(w.bytes());
}

Bytes join_signing_bytes(ReplicaId joiner, std::uint64_t view) {
  ByteWriter w(24);
  w.raw(as_bytes("JOIN"));
  w.u32(joiner.value);
  w.u64(view);
  return std::move(w).take();
}

MsgKind kind_of(const Message& m) {
  struct Visitor {
    MsgKind operator()(const SubmitMsg&) const { return MsgKind::kSubmit; }
    MsgKind operator()(const BalanceQueryMsg&) const { return MsgKind::kBalanceQuery; }
    MsgKind operator()(const BalanceReplyMsg&) const { return MsgKind::kBalanceReply; }
    MsgKind operator()(const PrepareMsg&) const { return MsgKind::kPrepare; }
    MsgKind operator()(const EchoMsg&) const { return MsgKind::kEcho; }
    MsgKind operator()(const ReadyMsg&) const { return MsgKind::kReady; }
    MsgKind operator()(const PayloadRequestMsg&) const { return MsgKind::kPayloadRequest; }
    MsgKind operator()(const PayloadResponseMsg&) const { return MsgKind::kPayloadResponse; }
    MsgKind operator()(const AckMsg& a) const {
      return a.domain == SigDomain::kInstall ? MsgKind::kInstallAck : MsgKind::kAck;
    }
    MsgKind operator()(const CommitMsg&) const { return MsgKind::kCommit; }
    MsgKind operator()(const CreditMsg&) const { return MsgKind::kCredit; }
    MsgKind operator()(const JoinRequestMsg&) const { return MsgKind::kJoinRequest; }
    MsgKind operator()(const JoinRedirectMsg&) const { return MsgKind::kJoinRedirect; }
    MsgKind operator()(const InstallPrepareMsg&) const { return MsgKind::kInstallPrepare; }
    MsgKind operator()(const InstallCommitMsg&) const { return MsgKind::kInstallCommit; }
    MsgKind operator()(const StateSnapshotMsg&) const { return MsgKind::kStateSnapshot; }
    MsgKind operator()(const ResumeAckMsg&) const { return MsgKind::kResumeAck; }
  };
  return std::visit(Visitor{}, m);
}

Bytes auth_bytes(const Message& m, std::uint64_t view) {
  ByteWriter w(96);
  w.u8(static_cast<std::uint8_t>(kind_of(m)));
  w.u64(view);
  struct Visitor {
    ByteWriter& w;
    void operator()(const SubmitMsg& s) const { encode_payment(w, s.payment); }
    void operator()(const BalanceQueryMsg& q) const { w.u32(q.client.value); }
    void operator()(const BalanceReplyMsg& r) const {
      w.u32(r.client.value);
      w.u64(r.balance);
      w.u64(r.pending_credit);
      w.u64(r.settled);
    }
    void operator()(const PrepareMsg& p) const {
      encode_key(w, p.key);
      w.raw(p.digest);
    }
    void operator()(const EchoMsg& e) const {
      encode_key(w, e.key);
      w.raw(e.digest);
    }
    void operator()(const ReadyMsg& r) const {
      encode_key(w, r.key);
      w.raw(r.digest);
    }
    void operator()(const PayloadRequestMsg& r) const {
      encode_key(w, r.key);
      w.raw(r.digest);
    }
    void operator()(const PayloadResponseMsg& r) const {
      encode_key(w, r.key);
      w.raw(r.digest);
    }
    void operator()(const AckMsg& a) const {
      encode_key(w, a.key);
      w.raw(a.digest);
      encode_signature(w, a.sig);
    }
    void operator()(const CommitMsg& c) const {
      encode_key(w, c.key);
      w.raw(c.cert ? c.cert->digest : Digest{});
    }
    void operator()(const CreditMsg& c) const {
      w.u32(c.proof->signer.value);
      encode_signature(w, c.proof->sig);
    }
    void operator()(const JoinRequestMsg& j) const {
      w.u32(j.joiner.value);
      w.u64(j.attempt);
    }
    void operator()(const JoinRedirectMsg& j) const {
      w.u64(j.view_id);
      for (auto r : j.members) w.u32(r.value);
    }
    void operator()(const InstallPrepareMsg& p) const {
      encode_key(w, p.key);
      w.raw(p.digest);
    }
    void operator()(const InstallCommitMsg& c) const {
      encode_key(w, c.key);
      w.raw(c.cert ? c.cert->digest : Digest{});
    }
    void operator()(const StateSnapshotMsg& s) const {
      w.u64(s.view);
      w.u32(static_cast<std::uint32_t>(s.logs ? s.logs->size() : 0));
    }
    void operator()(const ResumeAckMsg& r) const {
      w.u64(r.view);
      if (r.delivered) {
        for (const auto& [c, n] : *r.delivered) {
          w.u32(c.value);
          w.u64(n);
        }
      }
    }
  };
  std::visit(Visitor{w}, m);
  return std::move(w).take();
}

std::vector<PaymentId> payment_ids_of(const Message& m) {
  std::vector<PaymentId> ids;
  if (const auto* s = std::get_if<SubmitMsg>(&m)) {
    ids.push_back(s->payment.id);
  } else if (const auto* c = std::get_if<CreditMsg>(&m)) {
    for (const auto& t : c->proof->tuples) ids.push_back(t.id);
  }
  return ids;
}

}  // namespace brbpay

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

// Signature-based reliable broadcast with linear message cost: Prepare to
// all, signed Ack back to the broadcaster, Commit with a quorum certificate.
// No totality: a faulty broadcaster decides who gets the Commit.

#ifndef BRBPAY_BRB_SIG_BRB_HPP_
#define BRBPAY_BRB_SIG_BRB_HPP_

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "brbpay/brb/echo_brb.hpp"
#include "brbpay/brb/group.hpp"
#include "brbpay/brb/replica_set.hpp"

namespace brbpay {

struct PaymentBatchTraits {
  using Payload = PaymentBatch;
  static constexpr SigDomain kDomain = SigDomain::kPayments;
  static Digest digest_of(const Payload& p) { return batch_digest(p); }
  static std::vector<ReplicaId> extra_commit_targets(const Payload&) { return {}; }
};

struct InstallTraits {
  using Payload = InstallRecord;
  static constexpr SigDomain kDomain = SigDomain::kInstall;
  static Digest digest_of(const Payload& p) { return install_digest(p); }
  /// The joiner is outside the old view yet must learn the outcome.
  static std::vector<ReplicaId> extra_commit_targets(const Payload& p) { return {p.joiner}; }
};

/// True iff `cert` carries at least quorum() valid acks over (domain, key,
/// digest) from distinct members of `view`.
bool verify_commit_certificate(const CommitCertificate& cert, const GroupView& view, const KeyRegistry& keys);

template <class Traits>
class SigBrb {
 public:
  using Payload = typename Traits::Payload;
  using Prepare = PrepareOf<Payload>;
  using Commit = CommitOf<Payload>;
  using Admit = std::function<Admission(ReplicaId from, const BatchKey&, const Payload&)>;
  using Deliver = std::function<void(const BatchKey&, const std::shared_ptr<const Payload>&,
                                     const std::shared_ptr<const CommitCertificate>&)>;
  using TargetFilter = std::function<std::vector<ReplicaId>(const BatchKey&, const std::vector<ReplicaId>&)>;

  struct Options {
    /// Prepare retransmission to silent members while the quorum is short.
    SimTime retry_after = 1 * kSecond;
    int max_retries = 3;
    /// Byzantine knob: ack every payload, conflicting or not.
    bool ignore_conflicts = false;
    /// Byzantine knob: narrows who receives our Commits.
    TargetFilter commit_filter;
  };

  SigBrb(BrbTransport& transport, const KeyRegistry& keys, Admit admit, Deliver deliver, Options options)
      : transport_(transport),
        keys_(keys),
        admit_(std::move(admit)),
        deliver_(std::move(deliver)),
        options_(std::move(options)) {}

  void set_view(GroupView view) { view_ = std::move(view); }
  const GroupView& view() const { return view_; }
  Options& options() { return options_; }

  BatchKey broadcast(std::shared_ptr<const Payload> payload) {
    const BatchKey key{view_.id, transport_.self(), next_seq_++};
    broadcast(key, std::move(payload), view_.members);
    return key;
  }

  BatchKey next_key() { return {view_.id, transport_.self(), next_seq_++}; }

  /// Prepare under an explicit key to chosen targets.
  void broadcast(const BatchKey& key, std::shared_ptr<const Payload> payload, const std::vector<ReplicaId>& targets) {
    const Digest d = Traits::digest_of(*payload);
    Outgoing& out = outgoing_[key][d];
    out.payload = payload;
    Prepare m{key, payload, d, keys_.sign(Principal::of(transport_.self()), prepare_signing_bytes(Traits::kDomain, key, d))};
    transport_.multicast(targets, m);
    if (options_.max_retries > 0) arm_retry(key, d, 1);
  }

  void on_prepare(ReplicaId from, const Prepare& m) {
    if (from != m.key.broadcaster) {
      blame(from, m.key, "prepare relayed for another broadcaster");
      return;
    }
    Instance* inst = instance(m.key, from);
    if (!inst || !m.payload) return;
    const Digest d = Traits::digest_of(*m.payload);
    if (d != m.digest) {
      blame(from, m.key, "prepare digest mismatch");
      return;
    }
    if (!m.broadcaster_sig || m.broadcaster_sig->signer != Principal::of(from) ||
        !keys_.verify(Principal::of(from), prepare_signing_bytes(Traits::kDomain, m.key, d), *m.broadcaster_sig)) {
      blame(from, m.key, "bad prepare signature");
      return;
    }
    if (auto it = inst->acks.find(d); it != inst->acks.end()) {
      transport_.send(from, it->second);
      return;
    }
    if (!inst->acks.empty() && !options_.ignore_conflicts) {
      blame(from, m.key, "conflicting prepare");
      return;
    }
    const Admission a = admit_(from, m.key, *m.payload);
    if (a != Admission::kAccept && !options_.ignore_conflicts) {
      blame(from, m.key, a == Admission::kConflict ? "payment conflicts with earlier payload" : "invalid payload");
      return;
    }
    AckMsg ack{Traits::kDomain, m.key, d,
               keys_.sign(Principal::of(transport_.self()), ack_signing_bytes(Traits::kDomain, m.key, d))};
    inst->acks.emplace(d, ack);
    transport_.send(from, ack);
  }

  void on_ack(ReplicaId from, const AckMsg& m) {
    if (m.domain != Traits::kDomain || m.key.view != view_.id || !view_.contains(from)) return;
    auto kit = outgoing_.find(m.key);
    if (kit == outgoing_.end()) return;
    auto dit = kit->second.find(m.digest);
    if (dit == kit->second.end()) return;
    Outgoing& out = dit->second;
    if (out.committed || out.acks.contains(from)) return;
    if (m.sig.signer != Principal::of(from) ||
        !keys_.verify(Principal::of(from), ack_signing_bytes(Traits::kDomain, m.key, m.digest), m.sig)) {
      blame(from, m.key, "bad ack signature");
      return;
    }
    out.acks.emplace(from, m.sig);
    if (static_cast<int>(out.acks.size()) < view_.quorum()) return;

    out.committed = true;
    auto cert = std::make_shared<CommitCertificate>();
    cert->domain = Traits::kDomain;
    cert->key = m.key;
    cert->digest = m.digest;
    for (const auto& [_, sig] : out.acks) {
      cert->acks.push_back(sig);
      if (static_cast<int>(cert->acks.size()) == view_.quorum()) break;
    }
    std::vector<ReplicaId> targets = view_.members;
    for (auto r : Traits::extra_commit_targets(*out.payload)) {
      if (std::find(targets.begin(), targets.end(), r) == targets.end()) targets.push_back(r);
    }
    if (options_.commit_filter) targets = options_.commit_filter(m.key, targets);
    transport_.multicast(targets, Commit{m.key, out.payload, std::move(cert)});
  }

  void on_commit(ReplicaId from, const Commit& m) {
    Instance* inst = instance(m.key, from);
    if (!inst || inst->delivered || !m.payload || !m.cert) return;
    const CommitCertificate& cert = *m.cert;
    if (cert.domain != Traits::kDomain || cert.key != m.key || cert.digest != Traits::digest_of(*m.payload) ||
        !verify_commit_certificate(cert, view_, keys_)) {
      blame(from, m.key, "malformed commit certificate");
      return;
    }
    inst->delivered = true;
    deliver_(m.key, m.payload, m.cert);
  }

  bool delivered(const BatchKey& key) const {
    auto it = instances_.find(key);
    return it != instances_.end() && it->second.delivered;
  }
  bool committed(const BatchKey& key) const {
    auto it = outgoing_.find(key);
    if (it == outgoing_.end()) return false;
    for (const auto& [_, out] : it->second) {
      if (out.committed) return true;
    }
    return false;
  }
  /// Instances we broadcast whose quorum never formed.
  std::size_t uncommitted() const {
    std::size_t n = 0;
    for (const auto& [_, by_digest] : outgoing_) {
      bool any = false;
      for (const auto& [__, out] : by_digest) any = any || out.committed;
      n += any ? 0 : 1;
    }
    return n;
  }
  const std::vector<Misbehavior>& evidence() const { return evidence_; }

 private:
  struct Instance {
    std::map<Digest, AckMsg> acks;  // at most one entry unless ignore_conflicts
    bool delivered = false;
  };
  struct Outgoing {
    std::shared_ptr<const Payload> payload;
    std::map<ReplicaId, Signature> acks;
    bool committed = false;
  };

  Instance* instance(const BatchKey& key, ReplicaId from) {
    if (key.view != view_.id || !view_.contains(from) || !view_.contains(key.broadcaster)) return nullptr;
    return &instances_[key];
  }

  void blame(ReplicaId who, const BatchKey& key, std::string what) {
    evidence_.push_back({who, key, std::move(what)});
  }

  void arm_retry(const BatchKey& key, const Digest& d, int attempt) {
    transport_.schedule(options_.retry_after, [this, key, d, attempt] {
      if (key.view != view_.id) return;
      Outgoing& out = outgoing_[key][d];
      if (out.committed) return;
      std::vector<ReplicaId> silent;
      for (auto r : view_.members) {
        if (!out.acks.contains(r)) silent.push_back(r);
      }
      Prepare m{key, out.payload, d,
                keys_.sign(Principal::of(transport_.self()), prepare_signing_bytes(Traits::kDomain, key, d))};
      transport_.multicast(silent, m);
      if (attempt < options_.max_retries) arm_retry(key, d, attempt + 1);
    });
  }

  BrbTransport& transport_;
  const KeyRegistry& keys_;
  Admit admit_;
  Deliver deliver_;
  Options options_;
  GroupView view_;
  std::uint64_t next_seq_ = 0;
  std::map<BatchKey, Instance> instances_;
  std::map<BatchKey, std::map<Digest, Outgoing>> outgoing_;
  std::vector<Misbehavior> evidence_;
};

using PaymentSigBrb = SigBrb<PaymentBatchTraits>;
using InstallSigBrb = SigBrb<InstallTraits>;

}  // namespace brbpay

#endif  // BRBPAY_BRB_SIG_BRB_HPP_

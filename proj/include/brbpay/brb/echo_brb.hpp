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

// Bracha-style reliable broadcast over authenticated links: Prepare, then
// all-to-all Echo and Ready on the payload digest. Guarantees totality.

#ifndef BRBPAY_BRB_ECHO_BRB_HPP_
#define BRBPAY_BRB_ECHO_BRB_HPP_

#include <map>
#include <memory>
#include <vector>

#include "brbpay/brb/group.hpp"
#include "brbpay/brb/replica_set.hpp"

namespace brbpay {

enum class Admission { kAccept, kInvalid, kConflict };

class EchoBrb {
 public:
  /// Decides whether this replica may vouch for a payload. Should record
  /// the payload as seen when it accepts.
  using Admit = std::function<Admission(ReplicaId from, const BatchKey&, const PaymentBatch&)>;
  using Deliver = std::function<void(const BatchKey&, const std::shared_ptr<const PaymentBatch>&)>;

  struct Options {
    /// Wait before pulling a payload that reached Ready quorum without
    /// its Prepare.
    SimTime pull_delay = 100 * kMillisecond;
    /// Byzantine knob: echo and ready every payload, conflicting or not.
    bool ignore_conflicts = false;
  };

  EchoBrb(BrbTransport& transport, Admit admit, Deliver deliver, Options options);

  void set_view(GroupView view) { view_ = std::move(view); }
  const GroupView& view() const { return view_; }
  Options& options() { return options_; }

  /// Prepare to every member; returns the instance key.
  BatchKey broadcast(std::shared_ptr<const PaymentBatch> batch);
  BatchKey next_key() { return {view_.id, transport_.self(), next_seq_++}; }
  /// Prepare under an explicit key to chosen targets only.
  void send_prepare(const BatchKey& key, std::shared_ptr<const PaymentBatch> batch,
                    const std::vector<ReplicaId>& targets);

  void on_prepare(ReplicaId from, const PrepareMsg& m);
  void on_echo(ReplicaId from, const EchoMsg& m);
  void on_ready(ReplicaId from, const ReadyMsg& m);
  void on_payload_request(ReplicaId from, const PayloadRequestMsg& m);
  void on_payload_response(ReplicaId from, const PayloadResponseMsg& m);

  bool delivered(const BatchKey& key) const;
  std::size_t undelivered() const;
  const std::vector<Misbehavior>& evidence() const { return evidence_; }

 private:
  struct PerDigest {
    std::shared_ptr<const PaymentBatch> payload;
    ReplicaSet echoes;
    ReplicaSet readies;
    bool echoed = false;
    bool readied = false;
    bool pull_scheduled = false;
    std::vector<ReplicaId> waiting;  // pull requests we could not serve yet
  };
  struct Instance {
    std::map<Digest, PerDigest> digests;
    bool echoed_any = false;
    bool readied_any = false;
    bool delivered = false;
  };

  Instance* instance(const BatchKey& key, ReplicaId from);
  void maybe_ready(const BatchKey& key, Instance& inst, const Digest& d);
  void maybe_deliver(const BatchKey& key, Instance& inst, const Digest& d);
  void pull(const BatchKey& key, const Digest& d);
  void blame(ReplicaId who, const BatchKey& key, std::string what);

  BrbTransport& transport_;
  Admit admit_;
  Deliver deliver_;
  Options options_;
  GroupView view_;
  std::uint64_t next_seq_ = 0;
  std::map<BatchKey, Instance> instances_;
  std::vector<Misbehavior> evidence_;
};

}  // namespace brbpay

#endif  // BRBPAY_BRB_ECHO_BRB_HPP_

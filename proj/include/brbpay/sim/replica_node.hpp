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

#ifndef BRBPAY_SIM_REPLICA_NODE_HPP_
#define BRBPAY_SIM_REPLICA_NODE_HPP_

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "brbpay/brb/conflict_index.hpp"
#include "brbpay/brb/echo_brb.hpp"
#include "brbpay/brb/fifo_gate.hpp"
#include "brbpay/brb/sig_brb.hpp"
#include "brbpay/engine/payment_engine.hpp"
#include "brbpay/reconfig/view.hpp"
#include "brbpay/sim/fault_plan.hpp"

namespace brbpay {

/// What a node needs from its environment.
class NodeHost {
 public:
  virtual ~NodeHost() = default;
  virtual SimTime now() const = 0;
  /// `view` is the sender's current view, carried on the envelope.
  virtual void send(ReplicaId from, Principal to, std::uint64_t view, Message m) = 0;
  virtual void schedule(ReplicaId owner, SimTime delay, std::function<void()> fn) = 0;
};

class NodeObserver {
 public:
  virtual ~NodeObserver() = default;
  virtual void on_settle(ReplicaId, const Payment&) {}
  virtual void on_materialize(ReplicaId, ClientId, const DependencyCertificate&) {}
  virtual void on_install(ReplicaId, const GroupView&) {}
  virtual void on_resume(ReplicaId, const GroupView&) {}
};

struct NodeOptions {
  BrbVariant variant = BrbVariant::kEcho;
  SimTime batch_interval = 50 * kMillisecond;
  std::size_t max_batch = 256;
  SimTime pull_delay = 100 * kMillisecond;
  SimTime sig_retry = 1 * kSecond;
  SimTime join_retry = 3 * kSecond;
  Behavior behavior = Behavior::kCorrect;
  /// Withholding: how many other members get our Prepares (echo, -1 means
  /// f+1) or Commits (signature).
  int withhold_prepare_reach = -1;
  int withhold_commit_reach = 1;
  /// Fellow Byzantine replicas, never chosen as withholding targets.
  std::set<ReplicaId> accomplices;
  std::uint64_t seed = 0;
};

class ReplicaNode : private BrbTransport {
 public:
  /// A joiner is constructed with `member` false and the view it wants to
  /// join; `topology` must already include it.
  ReplicaNode(ReplicaId id, NodeHost& host, NodeObserver* observer, const KeyRegistry& keys,
              std::shared_ptr<const ShardTopology> topology, GroupView view, bool member,
              const std::map<ClientId, Amount>& initial_balances, NodeOptions options);

  ReplicaNode(const ReplicaNode&) = delete;
  ReplicaNode& operator=(const ReplicaNode&) = delete;

  /// Arms background scripts; call once at time zero.
  void start();
  void receive(Principal from, std::uint64_t view, const Message& m);
  /// Joiner side: asks the current members to add us.
  void request_join();

  ReplicaId id() const { return self_; }
  Behavior behavior() const { return options_.behavior; }
  bool member() const { return member_; }
  bool paused() const { return paused_; }
  bool joined() const { return member_ && !paused_ && adopted_; }
  const GroupView& view() const { return view_; }
  const PaymentEngine& engine() const { return engine_; }
  const FifoGate& gate() const { return gate_; }
  std::shared_ptr<const ShardTopology> topology() const { return topology_; }
  LogMap logs() const;
  std::size_t evidence() const;
  std::size_t undelivered_instances() const;
  std::size_t stale_dropped() const { return stale_dropped_; }
  std::size_t duplicate_joins() const { return duplicate_joins_; }

 private:
  struct Buffered {
    ReplicaId from;
    std::uint64_t view;
    Message m;
  };

  // BrbTransport
  ReplicaId self() const override { return self_; }
  SimTime now() const override { return host_.now(); }
  void send(ReplicaId to, Message m) override;
  void schedule(SimTime delay, std::function<void()> fn) override;

  void drain();
  void receive_from_replica(ReplicaId from, std::uint64_t view, const Message& m);
  void dispatch(ReplicaId from, const Message& m);
  void on_client(ClientId from, const Message& m);

  Admission admit_batch(ReplicaId from, const BatchKey& key, const PaymentBatch& batch);
  void on_batch(const BatchKey& key, const std::shared_ptr<const PaymentBatch>& batch);
  void flush_credits();
  void arm_flush();
  void flush();
  Signature client_sig(const Payment& p) const;
  void broadcast_batch(std::shared_ptr<const PaymentBatch> batch);
  void equivocate(std::shared_ptr<const PaymentBatch> batch);
  std::vector<ReplicaId> pick_targets(int count);
  void forge_credits();

  // reconfiguration
  void on_join_request(ReplicaId from, const JoinRequestMsg& m);
  void on_join_redirect(ReplicaId from, const JoinRedirectMsg& m);
  void send_join_request();
  void maybe_coordinate();
  Admission admit_install(ReplicaId from, const BatchKey& key, const InstallRecord& r);
  void on_install(const BatchKey& key, const std::shared_ptr<const InstallRecord>& r,
                  const std::shared_ptr<const CommitCertificate>& cert);
  void on_snapshot(ReplicaId from, const StateSnapshotMsg& m);
  void try_adopt();
  void on_resume_ack(ReplicaId from, const ResumeAckMsg& m);
  void resume();
  void send_resume_ack();
  void replay_buffered();

  ReplicaId self_;
  NodeHost& host_;
  NodeObserver* observer_;
  const KeyRegistry& keys_;
  std::shared_ptr<const ShardTopology> topology_;
  GroupView view_;
  NodeOptions options_;
  std::vector<ClientId> all_clients_;
  std::mt19937_64 rng_;

  PaymentEngine engine_;
  ConflictIndex conflicts_;
  FifoGate gate_;
  std::unique_ptr<EchoBrb> echo_;
  std::unique_ptr<PaymentSigBrb> sig_;
  InstallSigBrb install_;

  std::deque<std::pair<ReplicaId, Message>> loopback_;
  bool draining_ = false;
  bool flush_armed_ = false;
  std::vector<Payment> outbox_;
  std::map<PaymentId, Signature> client_sigs_;
  std::map<PaymentId, SubmitMsg> twins_;  // equivocation script only
  std::uint64_t forged_ = 0;

  bool member_;
  bool paused_ = false;
  bool adopted_ = true;
  std::vector<Buffered> future_;
  std::vector<Buffered> held_while_paused_;
  std::size_t stale_dropped_ = 0;

  // member side of joins
  struct PendingJoin {
    std::uint64_t attempt = 0;
    Signature sig;
  };
  std::map<ReplicaId, PendingJoin> pending_joins_;
  std::set<std::pair<std::uint64_t, std::uint64_t>> proposed_;  // (view, attempt)
  std::map<std::uint64_t, Digest> install_slots_;
  std::map<ReplicaId, InstallCommitMsg> install_commits_;
  std::size_t duplicate_joins_ = 0;
  std::optional<ResumeGate> resume_gate_;
  std::map<ClientId, SeqNo> rebroadcast_from_;

  // joiner side
  bool joining_ = false;
  std::uint64_t join_attempt_ = 0;
  std::optional<Signature> join_sig_;
  GroupView prior_view_;
  std::map<ReplicaId, std::shared_ptr<const LogMap>> snapshots_;
  std::map<std::pair<std::uint64_t, std::vector<ReplicaId>>, std::set<ReplicaId>> redirects_;
};

}  // namespace brbpay

#endif  // BRBPAY_SIM_REPLICA_NODE_HPP_

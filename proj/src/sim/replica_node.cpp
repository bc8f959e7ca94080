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

#include "brbpay/sim/replica_node.hpp"

#include <algorithm>

namespace brbpay {

namespace {

bool payment_brb_kind(MsgKind k) {
  switch (k) {
    case MsgKind::kPrepare:
    case MsgKind::kEcho:
    case MsgKind::kReady:
    case MsgKind::kPayloadRequest:
    case MsgKind::kPayloadResponse:
    case MsgKind::kAck:
    case MsgKind::kCommit:
      return true;
    default:
      return false;
  }
}

constexpr SimTime kForgeEvery = 500 * kMillisecond;
constexpr std::uint64_t kForgeLimit = 40;

}  // namespace

ReplicaNode::ReplicaNode(ReplicaId id, NodeHost& host, NodeObserver* observer, const KeyRegistry& keys,
                         std::shared_ptr<const ShardTopology> topology, GroupView view, bool member,
                         const std::map<ClientId, Amount>& initial_balances, NodeOptions options)
    : self_(id),
      host_(host),
      observer_(observer),
      keys_(keys),
      topology_(std::move(topology)),
      view_(std::move(view)),
      options_(std::move(options)),
      rng_(options_.seed * 0x9E3779B97F4A7C15ULL + id.value),
      engine_(id, topology_, keys, initial_balances, {options_.variant, true}),
      install_(
          *this, keys, [this](ReplicaId from, const BatchKey& k, const InstallRecord& r) { return admit_install(from, k, r); },
          [this](const BatchKey& k, const std::shared_ptr<const InstallRecord>& r,
                 const std::shared_ptr<const CommitCertificate>& c) { on_install(k, r, c); },
          {options_.sig_retry, 3, false, {}}),
      member_(member) {
  for (const auto& [c, _] : initial_balances) all_clients_.push_back(c);
  install_.set_view(view_);
  prior_view_ = view_;
  adopted_ = member_;

  const bool reckless = options_.behavior == Behavior::kEquivocate;
  auto admit = [this](ReplicaId from, const BatchKey& k, const PaymentBatch& b) { return admit_batch(from, k, b); };
  if (options_.variant == BrbVariant::kEcho) {
    echo_ = std::make_unique<EchoBrb>(
        static_cast<BrbTransport&>(*this), admit, [this](const BatchKey& k, const std::shared_ptr<const PaymentBatch>& b) { on_batch(k, b); },
        EchoBrb::Options{options_.pull_delay, reckless});
    echo_->set_view(view_);
  } else {
    PaymentSigBrb::Options o{options_.sig_retry, 3, reckless, {}};
    if (options_.behavior == Behavior::kWithhold) {
      o.commit_filter = [this](const BatchKey&, const std::vector<ReplicaId>& targets) {
        std::vector<ReplicaId> picks = pick_targets(options_.withhold_commit_reach);
        std::vector<ReplicaId> out{self_};
        for (auto r : targets) {
          if (std::find(picks.begin(), picks.end(), r) != picks.end()) out.push_back(r);
        }
        return out;
      };
    }
    sig_ = std::make_unique<PaymentSigBrb>(
        static_cast<BrbTransport&>(*this), keys, admit,
        [this](const BatchKey& k, const std::shared_ptr<const PaymentBatch>& b,
               const std::shared_ptr<const CommitCertificate>&) { on_batch(k, b); },
        std::move(o));
    sig_->set_view(view_);
  }

  engine_.on_settle = [this](const Payment& p) {
    if (observer_) observer_->on_settle(self_, p);
  };
  engine_.on_materialize = [this](ClientId c, const DependencyCertificate& d) {
    if (observer_) observer_->on_materialize(self_, c, d);
  };
}

void ReplicaNode::start() {
  if (options_.behavior == Behavior::kForgeCredit && options_.variant == BrbVariant::kSig) {
    schedule(kForgeEvery, [this] { forge_credits(); });
  }
}

// --- plumbing ---------------------------------------------------------------

void ReplicaNode::send(ReplicaId to, Message m) {
  if (to == self_) {
    loopback_.emplace_back(self_, std::move(m));
    return;
  }
  host_.send(self_, Principal::of(to), view_.id, std::move(m));
}

void ReplicaNode::schedule(SimTime delay, std::function<void()> fn) {
  host_.schedule(self_, delay, [this, fn = std::move(fn)] {
    if (options_.behavior == Behavior::kSilent) return;
    fn();
    drain();
  });
}

void ReplicaNode::drain() {
  if (draining_) return;
  draining_ = true;
  while (!loopback_.empty()) {
    auto [from, m] = std::move(loopback_.front());
    loopback_.pop_front();
    receive_from_replica(from, view_.id, m);
  }
  draining_ = false;
}

void ReplicaNode::receive(Principal from, std::uint64_t view, const Message& m) {
  if (options_.behavior == Behavior::kSilent) return;
  if (from.kind == Principal::Kind::kClient) {
    on_client(ClientId{from.id}, m);
  } else {
    receive_from_replica(ReplicaId{from.id}, view, m);
  }
  drain();
}

void ReplicaNode::receive_from_replica(ReplicaId from, std::uint64_t view, const Message& m) {
  const MsgKind k = kind_of(m);
  switch (k) {
    case MsgKind::kCredit:
    case MsgKind::kJoinRequest:
    case MsgKind::kJoinRedirect:
    case MsgKind::kStateSnapshot:
      dispatch(from, m);
      return;
    case MsgKind::kInstallCommit:
      // relays travel in the relayer's newer view; what counts is the
      // view the install was decided in
      view = std::get<InstallCommitMsg>(m).key.view;
      break;
    default:
      break;
  }
  if (view < view_.id) {
    ++stale_dropped_;
    return;
  }
  if (view > view_.id) {
    future_.push_back({from, view, m});
    return;
  }
  if (paused_ && payment_brb_kind(k)) {
    held_while_paused_.push_back({from, view, m});
    return;
  }
  dispatch(from, m);
}

void ReplicaNode::dispatch(ReplicaId from, const Message& m) {
  if (const auto* p = std::get_if<PrepareMsg>(&m)) {
    if (echo_) echo_->on_prepare(from, *p);
    if (sig_) sig_->on_prepare(from, *p);
  } else if (const auto* e = std::get_if<EchoMsg>(&m)) {
    if (echo_) echo_->on_echo(from, *e);
  } else if (const auto* r = std::get_if<ReadyMsg>(&m)) {
    if (echo_) echo_->on_ready(from, *r);
  } else if (const auto* q = std::get_if<PayloadRequestMsg>(&m)) {
    if (echo_) echo_->on_payload_request(from, *q);
  } else if (const auto* s = std::get_if<PayloadResponseMsg>(&m)) {
    if (echo_) echo_->on_payload_response(from, *s);
  } else if (const auto* a = std::get_if<AckMsg>(&m)) {
    if (a->domain == SigDomain::kInstall) {
      install_.on_ack(from, *a);
    } else if (sig_) {
      sig_->on_ack(from, *a);
    }
  } else if (const auto* c = std::get_if<CommitMsg>(&m)) {
    if (sig_) sig_->on_commit(from, *c);
  } else if (const auto* cr = std::get_if<CreditMsg>(&m)) {
    if (!member_) return;
    engine_.on_credit(cr->proof);
    if (engine_.has_ready()) arm_flush();
  } else if (const auto* jr = std::get_if<JoinRequestMsg>(&m)) {
    on_join_request(from, *jr);
  } else if (const auto* rd = std::get_if<JoinRedirectMsg>(&m)) {
    on_join_redirect(from, *rd);
  } else if (const auto* ip = std::get_if<InstallPrepareMsg>(&m)) {
    install_.on_prepare(from, *ip);
  } else if (const auto* ic = std::get_if<InstallCommitMsg>(&m)) {
    install_.on_commit(from, *ic);
  } else if (const auto* ss = std::get_if<StateSnapshotMsg>(&m)) {
    on_snapshot(from, *ss);
  } else if (const auto* ra = std::get_if<ResumeAckMsg>(&m)) {
    on_resume_ack(from, *ra);
  }
}

void ReplicaNode::on_client(ClientId from, const Message& m) {
  if (!member_) return;
  if (const auto* s = std::get_if<SubmitMsg>(&m)) {
    if (s->payment.spender() != from) return;
    const SubmitStatus status = engine_.submit(s->payment, s->client_sig);
    if (status == SubmitStatus::kAccepted) {
      client_sigs_.emplace(s->payment.id, s->client_sig);
      arm_flush();
    } else if (status == SubmitStatus::kOutOfOrder && options_.behavior == Behavior::kEquivocate &&
               s->payment.id.seq < engine_.expected(from) &&
               keys_.verify(Principal::of(from), submission_signing_bytes(s->payment), s->client_sig)) {
      twins_.emplace(s->payment.id, *s);
    }
  } else if (const auto* q = std::get_if<BalanceQueryMsg>(&m)) {
    if (q->client != from || !engine_.has_account(from) || topology_->representative_of(from) != self_) return;
    const AccountState& a = engine_.account(from);
    host_.send(self_, Principal::of(from), view_.id,
               BalanceReplyMsg{from, a.balance, engine_.pending_credit(from), a.next_seq});
  }
}

// --- payments ---------------------------------------------------------------

Admission ReplicaNode::admit_batch(ReplicaId from, const BatchKey& key, const PaymentBatch& batch) {
  if (key.broadcaster != from || batch.sub_batches.empty()) return Admission::kInvalid;
  const auto home = topology_->shard_of(self_);
  for (const auto& sb : batch.sub_batches) {
    if (sb.payments.empty() || sb.client_sigs.size() != sb.payments.size()) return Admission::kInvalid;
    for (std::size_t i = 0; i < sb.payments.size(); ++i) {
      const Payment& p = sb.payments[i];
      if (!topology_->knows(p.spender()) || !topology_->knows(p.beneficiary)) return Admission::kInvalid;
      if (topology_->shard_of(p.spender()) != home) return Admission::kInvalid;
      if (topology_->representative_of(p.spender()) != from) return Admission::kInvalid;
      if (topology_->representative_of(p.beneficiary) != sb.beneficiary_rep) return Admission::kInvalid;
      if (options_.variant == BrbVariant::kEcho && !p.deps.empty()) return Admission::kInvalid;
      if (!keys_.verify(Principal::of(p.spender()), submission_signing_bytes(p), sb.client_sigs[i])) {
        return Admission::kInvalid;
      }
    }
  }
  return conflicts_.admit(batch) ? Admission::kAccept : Admission::kConflict;
}

void ReplicaNode::on_batch(const BatchKey&, const std::shared_ptr<const PaymentBatch>& batch) {
  for (const auto& sb : batch->sub_batches) {
    for (std::size_t i = 0; i < sb.payments.size(); ++i) client_sigs_.emplace(sb.payments[i].id, sb.client_sigs[i]);
  }
  batch->for_each([&](const Payment& p) {
    if (!engine_.has_account(p.spender())) return;
    conflicts_.record(p);
    for (const auto& q : gate_.offer(p)) engine_.deliver(q);
  });
  flush_credits();
}

void ReplicaNode::flush_credits() {
  for (auto& oc : engine_.take_credits()) send(oc.to, CreditMsg{std::move(oc.proof)});
}

void ReplicaNode::arm_flush() {
  if (flush_armed_ || paused_ || !member_) return;
  flush_armed_ = true;
  schedule(options_.batch_interval, [this] {
    flush_armed_ = false;
    flush();
  });
}

void ReplicaNode::flush() {
  if (paused_ || !member_) return;
  for (auto& p : engine_.take_ready()) outbox_.push_back(std::move(p));
  if (outbox_.empty()) return;
  auto batches = make_batches(outbox_, *topology_, options_.max_batch, [this](const Payment& p) { return client_sig(p); });
  outbox_.clear();
  for (auto& b : batches) broadcast_batch(std::make_shared<const PaymentBatch>(std::move(b)));
}

Signature ReplicaNode::client_sig(const Payment& p) const {
  auto it = client_sigs_.find(p.id);
  return it == client_sigs_.end() ? Signature{} : it->second;
}

void ReplicaNode::broadcast_batch(std::shared_ptr<const PaymentBatch> batch) {
  if (options_.behavior == Behavior::kEquivocate) {
    equivocate(std::move(batch));
    return;
  }
  if (echo_) {
    if (options_.behavior == Behavior::kWithhold) {
      const int reach = options_.withhold_prepare_reach < 0 ? view_.f + 1 : options_.withhold_prepare_reach;
      std::vector<ReplicaId> targets = pick_targets(reach);
      targets.push_back(self_);
      echo_->send_prepare(echo_->next_key(), std::move(batch), targets);
      return;
    }
    echo_->broadcast(std::move(batch));
  } else {
    sig_->broadcast(std::move(batch));
  }
}

std::vector<ReplicaId> ReplicaNode::pick_targets(int count) {
  std::vector<ReplicaId> pool;
  for (auto r : view_.members) {
    if (r != self_ && !options_.accomplices.contains(r)) pool.push_back(r);
  }
  std::shuffle(pool.begin(), pool.end(), rng_);
  pool.resize(std::min<std::size_t>(pool.size(), std::max(count, 0)));
  return pool;
}

void ReplicaNode::equivocate(std::shared_ptr<const PaymentBatch> batch) {
  // Only payments the spender really signed twice can be forked.
  std::vector<Payment> alt;
  std::map<PaymentId, Signature> alt_sigs;
  bool forked = false;
  batch->for_each([&](const Payment& p) {
    Payment q = p;
    if (auto it = twins_.find(p.id); it != twins_.end()) {
      q = it->second.payment;
      q.deps = p.deps;
      alt_sigs[p.id] = it->second.client_sig;
      forked = true;
    }
    alt.push_back(std::move(q));
  });
  if (!forked) {
    if (echo_) {
      echo_->broadcast(std::move(batch));
    } else {
      sig_->broadcast(std::move(batch));
    }
    return;
  }
  auto alts = make_batches(alt, *topology_, std::max(options_.max_batch, alt.size()), [&](const Payment& p) {
    auto it = alt_sigs.find(p.id);
    return it == alt_sigs.end() ? client_sig(p) : it->second;
  });
  auto twin = std::make_shared<const PaymentBatch>(std::move(alts.front()));

  if (rng_() & 1) {
    // one instance, two payloads, each shown to half the group
    std::vector<ReplicaId> first{self_}, second;
    std::vector<ReplicaId> others = pick_targets(view_.size());
    for (std::size_t i = 0; i < others.size(); ++i) (i % 2 == 0 ? second : first).push_back(others[i]);
    if (echo_) {
      const BatchKey key = echo_->next_key();
      echo_->send_prepare(key, batch, first);
      echo_->send_prepare(key, twin, second);
    } else {
      const BatchKey key = sig_->next_key();
      sig_->broadcast(key, batch, first);
      sig_->broadcast(key, twin, second);
    }
  } else if (echo_) {
    echo_->broadcast(batch);
    echo_->broadcast(twin);
  } else {
    sig_->broadcast(batch);
    sig_->broadcast(twin);
  }
}

void ReplicaNode::forge_credits() {
  const auto home = topology_->shard_of(self_);
  std::vector<ClientId> local, remote;
  for (auto c : all_clients_) {
    (topology_->shard_of(c) == home ? local : remote).push_back(c);
  }
  if (remote.empty()) remote = local;
  if (!local.empty()) {
    const ClientId spender = local[rng_() % local.size()];
    const ClientId beneficiary = remote[rng_() % remote.size()];
    const PaymentTuple t{{spender, 1'000'000 + forged_}, beneficiary, 1'000'000};
    const ReplicaId to = topology_->representative_of(beneficiary);

    auto own = std::make_shared<CreditProof>();
    own->signer = self_;
    own->tuples = {t};
    own->sig = keys_.sign(Principal::of(self_), credit_signing_bytes(own->tuples));
    send(to, CreditMsg{own});

    // the same tuple attributed to a colleague, under our own signature
    for (auto r : topology_->shard(*home).members) {
      if (r == self_) continue;
      auto fake = std::make_shared<CreditProof>(*own);
      fake->signer = r;
      send(to, CreditMsg{fake});
      break;
    }
  }
  if (++forged_ < kForgeLimit) schedule(kForgeEvery, [this] { forge_credits(); });
}

// --- reconfiguration: member side -------------------------------------------

void ReplicaNode::on_join_request(ReplicaId from, const JoinRequestMsg& m) {
  if (!member_ || m.joiner != from) return;
  if (view_.contains(from)) {
    ++duplicate_joins_;
    if (auto it = install_commits_.find(from); it != install_commits_.end()) send(from, it->second);
    return;
  }
  if (m.sig.signer != Principal::of(from) || !keys_.verify(Principal::of(from), join_signing_bytes(from, view_.id), m.sig)) {
    send(from, JoinRedirectMsg{view_.id, view_.members, view_.f});
    return;
  }
  PendingJoin& pj = pending_joins_[from];
  if (m.attempt >= pj.attempt) pj = {m.attempt, m.sig};
  maybe_coordinate();
}

void ReplicaNode::maybe_coordinate() {
  while (member_ && !paused_ && !pending_joins_.empty()) {
    auto it = pending_joins_.begin();
    const ReplicaId joiner = it->first;
    const PendingJoin pj = it->second;
    if (!keys_.verify(Principal::of(joiner), join_signing_bytes(joiner, view_.id), pj.sig)) {
      // signed for a view we have left behind
      send(joiner, JoinRedirectMsg{view_.id, view_.members, view_.f});
      pending_joins_.erase(it);
      continue;
    }
    if (view_.members[pj.attempt % view_.members.size()] != self_) return;
    if (!proposed_.insert({view_.id, pj.attempt}).second) return;
    auto record = std::make_shared<const InstallRecord>(make_install_record(view_, joiner, pj.sig));
    install_.broadcast(BatchKey{view_.id, self_, view_.id + 1}, record, view_.members);
    return;
  }
}

Admission ReplicaNode::admit_install(ReplicaId from, const BatchKey& key, const InstallRecord& r) {
  if (key.broadcaster != from || key.seq != view_.id + 1 || r.new_view != view_.id + 1) return Admission::kInvalid;
  if (!valid_successor(view_, r, keys_)) return Admission::kInvalid;
  const Digest d = install_digest(r);
  auto [it, fresh] = install_slots_.emplace(r.new_view, d);
  if (!fresh && it->second != d) return Admission::kConflict;
  return Admission::kAccept;
}

void ReplicaNode::on_install(const BatchKey& key, const std::shared_ptr<const InstallRecord>& r,
                             const std::shared_ptr<const CommitCertificate>& cert) {
  if (r->new_view != view_.id + 1) return;
  const GroupView old = view_;
  const bool was_member = member_;
  const InstallCommitMsg commit{key, r, cert};

  view_ = successor(*r);
  topology_ = std::make_shared<const ShardTopology>(topology_->with_member(0, r->joiner, r->f));
  engine_.set_topology(topology_);
  if (echo_) echo_->set_view(view_);
  if (sig_) sig_->set_view(view_);
  install_.set_view(view_);
  install_commits_[r->joiner] = commit;
  pending_joins_.erase(r->joiner);
  if (r->joiner == self_) {
    member_ = true;
    joining_ = false;
  }
  paused_ = true;
  resume_gate_.emplace(view_);
  rebroadcast_from_.clear();
  if (observer_) observer_->on_install(self_, view_);

  for (auto m : view_.members) {
    if (m != self_) send(m, commit);
  }
  if (was_member) {
    auto logs = std::make_shared<LogMap>(this->logs());
    if (options_.behavior == Behavior::kForgeSnapshot) {
      for (auto& [c, log] : *logs) {
        log.back().amount += 1;
        log.push_back({{c, log.size()}, c, 1, {}});
      }
    }
    send(r->joiner, StateSnapshotMsg{old.id, std::move(logs)});
    send_resume_ack();
  } else {
    prior_view_ = old;
    try_adopt();
  }
  replay_buffered();
}

void ReplicaNode::send_resume_ack() {
  auto prefixes = std::make_shared<const std::map<ClientId, SeqNo>>(gate_.delivered_prefixes());
  multicast(view_.members, ResumeAckMsg{view_.id, std::move(prefixes)});
}

void ReplicaNode::on_resume_ack(ReplicaId from, const ResumeAckMsg& m) {
  if (!resume_gate_ || m.view != view_.id || !m.delivered) return;
  if (!resume_gate_->add(from, *m.delivered)) return;
  if (!resume_gate_->resumed()) {
    if (resume_gate_->ready() && adopted_) resume();
    return;
  }
  // a late report may reach further back than what we re-sent
  for (auto c : engine_.represented()) {
    const auto& released = engine_.released(c);
    const SeqNo low = resume_gate_->min_delivered(c);
    auto it = rebroadcast_from_.find(c);
    const SeqNo sent_from = it == rebroadcast_from_.end() ? released.size() : it->second;
    for (SeqNo s = low; s < sent_from && s < released.size(); ++s) outbox_.push_back(released[s]);
    if (low < sent_from) rebroadcast_from_[c] = low;
  }
  if (!outbox_.empty()) {
    std::stable_sort(outbox_.begin(), outbox_.end(), [](const Payment& a, const Payment& b) { return a.id < b.id; });
    arm_flush();
  }
}

void ReplicaNode::resume() {
  resume_gate_->resume();
  paused_ = false;
  if (observer_) observer_->on_resume(self_, view_);

  engine_.take_ready();  // already listed in released()
  outbox_.clear();
  for (auto c : engine_.represented()) {
    const auto& released = engine_.released(c);
    const SeqNo low = resume_gate_->min_delivered(c);
    for (SeqNo s = low; s < released.size(); ++s) outbox_.push_back(released[s]);
    rebroadcast_from_[c] = low;
  }
  flush();

  auto held = std::move(held_while_paused_);
  held_while_paused_.clear();
  for (auto& b : held) receive_from_replica(b.from, b.view, b.m);
  maybe_coordinate();
}

void ReplicaNode::replay_buffered() {
  auto pending = std::move(future_);
  future_.clear();
  for (auto& b : pending) receive_from_replica(b.from, b.view, b.m);
}

// --- reconfiguration: joiner side -------------------------------------------

void ReplicaNode::request_join() {
  joining_ = true;
  send_join_request();
  drain();
}

void ReplicaNode::send_join_request() {
  if (member_ || !joining_) return;
  if (!join_sig_) join_sig_ = keys_.sign(Principal::of(self_), join_signing_bytes(self_, view_.id));
  multicast(view_.members, JoinRequestMsg{self_, join_attempt_, *join_sig_});
  schedule(options_.join_retry, [this, attempt = join_attempt_] {
    if (member_ || attempt != join_attempt_) return;
    ++join_attempt_;
    send_join_request();
  });
}

void ReplicaNode::on_join_redirect(ReplicaId from, const JoinRedirectMsg& m) {
  if (member_ || !joining_ || m.view_id <= view_.id || !view_.contains(from)) return;
  auto& who = redirects_[{m.view_id, m.members}];
  who.insert(from);
  if (static_cast<int>(who.size()) < view_.f + 1) return;

  auto topology = topology_;
  for (auto r : m.members) {
    if (!topology->is_member(0, r)) topology = std::make_shared<const ShardTopology>(topology->with_member(0, r, m.f));
  }
  topology_ = topology;
  engine_.set_topology(topology_);
  view_ = GroupView{m.view_id, m.members, m.f};
  prior_view_ = view_;
  if (echo_) echo_->set_view(view_);
  if (sig_) sig_->set_view(view_);
  install_.set_view(view_);
  join_sig_.reset();
  snapshots_.clear();
  redirects_.clear();
  ++join_attempt_;
  send_join_request();
  replay_buffered();
}

void ReplicaNode::on_snapshot(ReplicaId from, const StateSnapshotMsg& m) {
  if (adopted_ || !m.logs) return;
  snapshots_.emplace(from, m.logs);
  try_adopt();
}

void ReplicaNode::try_adopt() {
  if (adopted_ || !member_) return;
  std::vector<std::shared_ptr<const LogMap>> vouched;
  for (const auto& [r, logs] : snapshots_) {
    if (prior_view_.contains(r)) vouched.push_back(logs);
  }
  if (static_cast<int>(vouched.size()) < 2 * prior_view_.f + 1) return;

  const LogMap adopted = adopt_logs(vouched, prior_view_.f + 1);
  engine_.set_emit_credits(false);
  for (const auto& [c, log] : adopted) {
    if (!engine_.has_account(c)) continue;
    for (const auto& p : log) {
      conflicts_.record(p);
      for (const auto& q : gate_.offer(p)) engine_.deliver(q);
    }
  }
  engine_.take_credits();
  engine_.set_emit_credits(true);
  adopted_ = true;
  snapshots_.clear();
  send_resume_ack();
  if (resume_gate_ && resume_gate_->ready() && !resume_gate_->resumed()) resume();
}

// --- introspection ----------------------------------------------------------

LogMap ReplicaNode::logs() const {
  LogMap out;
  for (auto c : engine_.clients()) {
    const auto& entries = engine_.log(c).entries();
    if (!entries.empty()) out[c] = entries;
  }
  return out;
}

std::size_t ReplicaNode::evidence() const {
  std::size_t n = install_.evidence().size();
  if (echo_) n += echo_->evidence().size();
  if (sig_) n += sig_->evidence().size();
  return n;
}

std::size_t ReplicaNode::undelivered_instances() const {
  if (echo_) return echo_->undelivered();
  return sig_->uncommitted();
}

}  // namespace brbpay

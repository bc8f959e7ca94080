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


#include "brbpay/sim/harness.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

#include "brbpay/engine/client.hpp"
#include "brbpay/sim/oracle.hpp"
#include "brbpay/sim/scheduler.hpp"

namespace brbpay {

std::uint64_t RunResult::message_count(std::initializer_list<MsgKind> kinds) const {
  std::uint64_t n = 0;
  for (auto k : kinds) n += messages[static_cast<std::size_t>(k)];
  return n;
}

namespace {

std::optional<BatchKey> key_of(const Message& m) {
  return std::visit(
      [](const auto& x) -> std::optional<BatchKey> {
        if constexpr (requires { x.key; }) {
          return x.key;
        } else {
          return std::nullopt;
        }
      },
      m);
}

std::string describe(const PaymentTuple& t) {
  return to_string(t.id) + "->" + to_string(t.beneficiary) + ":" + std::to_string(t.amount);
}

class Sim final : public NodeHost, public NodeObserver {
 public:
  explicit Sim(const RunSpec& spec);
  RunResult run();

  SimTime now() const override { return sched_.now(); }
  void send(ReplicaId from, Principal to, std::uint64_t view, Message m) override {
    transmit(Principal::of(from), to, view, std::move(m));
  }
  void schedule(ReplicaId owner, SimTime delay, std::function<void()> fn) override {
    sched_.after(delay, [this, owner, fn = std::move(fn)] {
      if (!crashed(owner, now())) fn();
    });
  }

  void on_settle(ReplicaId r, const Payment& p) override;
  void on_materialize(ReplicaId r, ClientId c, const DependencyCertificate& d) override;
  void on_install(ReplicaId r, const GroupView& v) override;
  void on_resume(ReplicaId r, const GroupView& v) override;

 private:
  bool crashed(ReplicaId r, SimTime t) const {
    auto it = spec_.faults.crashes.find(r);
    return it != spec_.faults.crashes.end() && t >= it->second;
  }
  bool correct(ReplicaId r) const { return !spec_.faults.is_byzantine(r); }
  std::optional<std::size_t> shard_of(ReplicaId r) const;
  SimTime latency(Principal from, Principal to);
  void transmit(Principal from, Principal to, std::uint64_t view, Message m);
  void deliver(Principal from, Principal to, std::uint64_t view, const Message& m, const std::optional<Mac>& tag,
               int depth);
  void submit(std::size_t entry);
  void trace(TraceRecord r) {
    if (trace_.enabled()) trace_.record(std::move(r));
  }
  void violation(std::string what) {
    if (result_.violations.size() < 100) result_.violations.push_back(std::move(what));
  }
  void finish();
  void check_oracle();

  const RunSpec& spec_;
  std::shared_ptr<const ShardTopology> topology_;
  std::unique_ptr<KeyRegistry> keys_;
  Scheduler sched_;
  Trace trace_;
  std::mt19937_64 rng_;
  std::map<ReplicaId, std::unique_ptr<ReplicaNode>> nodes_;
  std::map<ClientId, Client> clients_;
  std::unordered_map<std::uint64_t, SimTime> link_clock_;
  RunResult result_;

  std::vector<std::optional<ClientId>> twin_of_entry_;
  std::map<PaymentId, std::size_t> record_of_;
  std::map<PaymentId, std::vector<PaymentTuple>> issued_;
  std::map<PaymentId, std::pair<Digest, PaymentTuple>> agreed_;
  std::map<PaymentTuple, bool> settled_tuples_;
  Amount total_initial_ = 0;
  std::map<std::pair<ReplicaId, ClientId>, Amount> out_;
  std::map<std::pair<ReplicaId, ClientId>, Amount> materialized_;
  std::map<std::pair<ReplicaId, PaymentId>, int> credit_depth_;
};

Sim::Sim(const RunSpec& spec)
    : spec_(spec),
      topology_(std::make_shared<const ShardTopology>(spec.system)),
      trace_(spec.trace),
      rng_(spec.seed) {
  if (spec_.join && topology_->shard_count() != 1) throw ConfigError("joins are supported on single-shard systems only");
  std::vector<ReplicaId> extra;
  if (spec_.join) {
    if (topology_->shard_of(spec_.join->joiner)) throw ConfigError("joiner is already a member");
    extra.push_back(spec_.join->joiner);
  }
  spec_.faults.validate(*topology_, extra);
  spec_.workload.validate(*topology_);

  std::vector<ReplicaId> replicas;
  for (std::size_t s = 0; s < topology_->shard_count(); ++s) {
    for (auto r : topology_->shard(s).members) replicas.push_back(r);
  }
  replicas.insert(replicas.end(), extra.begin(), extra.end());
  const auto client_ids = spec_.system.clients();
  keys_ = std::make_unique<KeyRegistry>(spec_.crypto, replicas, client_ids, spec_.seed);
  total_initial_ = spec_.system.total_initial();

  auto make_node = [&](ReplicaId r, std::size_t s, std::shared_ptr<const ShardTopology> topo, bool member) {
    NodeOptions o = spec_.node;
    o.variant = spec_.variant;
    o.behavior = spec_.faults.behavior(r);
    o.withhold_prepare_reach = spec_.faults.withhold_prepare_reach;
    o.withhold_commit_reach = spec_.faults.withhold_commit_reach;
    o.seed = spec_.seed * 1'000'003 + r.value;
    for (auto other : topology_->shard(s).members) {
      if (other != r && spec_.faults.is_byzantine(other)) o.accomplices.insert(other);
    }
    GroupView view{0, topology_->shard(s).members, topology_->shard(s).f};
    nodes_.emplace(r, std::make_unique<ReplicaNode>(r, *this, this, *keys_, std::move(topo), std::move(view), member,
                                                    spec_.system.initial_balances, std::move(o)));
  };
  for (std::size_t s = 0; s < topology_->shard_count(); ++s) {
    for (auto r : topology_->shard(s).members) make_node(r, s, topology_, true);
  }
  if (spec_.join) {
    auto topo = std::make_shared<const ShardTopology>(
        topology_->with_member(0, spec_.join->joiner, topology_->shard(0).f));
    make_node(spec_.join->joiner, 0, topo, false);
  }
  for (auto c : client_ids) clients_.emplace(c, Client(c, topology_->representative_of(c)));

  // double-spending clients send a twin of every payment
  const auto& entries = spec_.workload.entries;
  twin_of_entry_.resize(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.twin_beneficiary) {
      twin_of_entry_[i] = e.twin_beneficiary;
    } else if (spec_.faults.double_spenders.contains(e.spender)) {
      auto it = std::upper_bound(client_ids.begin(), client_ids.end(), e.beneficiary);
      for (std::size_t k = 0; k < client_ids.size(); ++k, ++it) {
        if (it == client_ids.end()) it = client_ids.begin();
        if (*it != e.spender && *it != e.beneficiary) {
          twin_of_entry_[i] = *it;
          break;
        }
      }
    }
  }
}

std::optional<std::size_t> Sim::shard_of(ReplicaId r) const {
  if (auto s = topology_->shard_of(r)) return s;
  if (spec_.join && r == spec_.join->joiner) return 0;
  return std::nullopt;
}

SimTime Sim::latency(Principal from, Principal to) {
  const LatencyModel& m = spec_.latency;
  SimTime t;
  if (m.kind == LatencyModel::Kind::kNormal) {
    std::normal_distribution<double> d(static_cast<double>(m.mean), static_cast<double>(m.stddev));
    t = std::max<SimTime>(m.floor, static_cast<SimTime>(std::llround(d(rng_))));
  } else {
    t = std::uniform_int_distribution<SimTime>(m.adversarial_min, m.adversarial_max)(rng_);
  }
  t += spec_.faults.global_extra_latency;
  for (Principal p : {from, to}) {
    if (p.kind != Principal::Kind::kReplica) continue;
    auto it = spec_.faults.delays.find(ReplicaId{p.id});
    if (it != spec_.faults.delays.end() && now() >= it->second.from) t += it->second.extra;
  }
  return t;
}

void Sim::transmit(Principal from, Principal to, std::uint64_t view, Message m) {
  const bool from_replica = from.kind == Principal::Kind::kReplica;
  const bool to_replica = to.kind == Principal::Kind::kReplica;
  if (from_replica && crashed(ReplicaId{from.id}, now())) return;
  const MsgKind kind = kind_of(m);
  ++result_.messages[static_cast<std::size_t>(kind)];
  if (trace_.enabled()) trace({now(), TraceEvent::kSend, kind, from, to, payment_ids_of(m), view, key_of(m)});

  int depth = 0;
  if (kind == MsgKind::kCredit && from_replica && to_replica) {
    const auto a = shard_of(ReplicaId{from.id});
    const auto b = shard_of(ReplicaId{to.id});
    if (a && b && *a != *b) {
      for (const auto& t : std::get<CreditMsg>(m).proof->tuples) {
        ++result_.cross.messages[t.id];
        auto it = credit_depth_.find({ReplicaId{from.id}, t.id});
        const int d = 1 + (it == credit_depth_.end() ? 0 : it->second);
        depth = std::max(depth, d);
        int& rounds = result_.cross.rounds[t.id];
        rounds = std::max(rounds, d);
      }
    }
  }

  SimTime arrival = now() + latency(from, to);
  const std::uint64_t link = (static_cast<std::uint64_t>(from.kind) << 63) | (static_cast<std::uint64_t>(from.id) << 32) |
                             (static_cast<std::uint64_t>(to.kind) << 31) | to.id;
  SimTime& last = link_clock_[link];
  arrival = std::max(arrival, last);
  last = arrival;

  std::optional<Mac> tag;
  if (spec_.authenticate_links && from_replica && to_replica) {
    tag = keys_->mac(ReplicaId{from.id}, ReplicaId{to.id}, auth_bytes(m, view));
  }
  sched_.at(arrival, [this, from, to, view, m = std::move(m), tag, depth] { deliver(from, to, view, m, tag, depth); });
}

void Sim::deliver(Principal from, Principal to, std::uint64_t view, const Message& m, const std::optional<Mac>& tag,
                  int depth) {
  if (to.kind != Principal::Kind::kReplica) {
    if (trace_.enabled()) trace({now(), TraceEvent::kDeliver, kind_of(m), from, to, {}, view, std::nullopt});
    return;
  }
  const ReplicaId r{to.id};
  if (crashed(r, now()) ||
      (tag && !keys_->verify_mac(ReplicaId{from.id}, r, auth_bytes(m, view), *tag))) {
    if (!crashed(r, now())) ++result_.mac_failures;
    if (trace_.enabled()) trace({now(), TraceEvent::kDrop, kind_of(m), from, to, payment_ids_of(m), view, key_of(m)});
    return;
  }
  if (trace_.enabled()) trace({now(), TraceEvent::kDeliver, kind_of(m), from, to, payment_ids_of(m), view, key_of(m)});
  if (depth > 0) {
    for (const auto& t : std::get<CreditMsg>(m).proof->tuples) {
      int& d = credit_depth_[{r, t.id}];
      d = std::max(d, depth);
    }
  }
  nodes_.at(r)->receive(from, view, m);
}

void Sim::submit(std::size_t i) {
  const WorkloadEntry& e = spec_.workload.entries[i];
  Client& c = clients_.at(e.spender);
  SubmitMsg msg = c.pay(e.beneficiary, e.amount, *keys_);
  const PaymentId id = msg.payment.id;
  record_of_[id] = result_.payments.size();
  PaymentRecord rec;
  rec.id = id;
  rec.beneficiary = e.beneficiary;
  rec.amount = e.amount;
  rec.shard = topology_->shard_of(e.spender);
  rec.cross_shard = topology_->shard_of(e.beneficiary) != rec.shard;
  rec.contested = twin_of_entry_[i].has_value();
  rec.submitted = now();
  result_.payments.push_back(rec);
  issued_[id].push_back(msg.payment.tuple());

  const Principal from = Principal::of(e.spender);
  const Principal to = Principal::of(c.representative());
  std::optional<SubmitMsg> twin;
  if (twin_of_entry_[i]) {
    twin = c.conflicting(msg, *twin_of_entry_[i], *keys_);
    issued_[id].push_back(twin->payment.tuple());
  }
  transmit(from, to, 0, std::move(msg));
  if (twin) transmit(from, to, 0, std::move(*twin));
}

void Sim::on_settle(ReplicaId r, const Payment& p) {
  ++result_.settles_per_replica[r];
  if (trace_.enabled()) trace({now(), TraceEvent::kSettle, std::nullopt, Principal::of(r), std::nullopt, {p.id}, std::nullopt, std::nullopt});
  if (!correct(r)) return;

  const PaymentTuple t = p.tuple();
  auto iss = issued_.find(p.id);
  if (iss == issued_.end() || std::find(iss->second.begin(), iss->second.end(), t) == iss->second.end()) {
    violation("integrity: " + to_string(r) + " settled " + describe(t) + " which no client issued");
  }
  const Digest d = payment_digest(p);
  auto [agreed, fresh] = agreed_.emplace(p.id, std::make_pair(d, t));
  if (!fresh && agreed->second.first != d) {
    violation("agreement: " + to_string(r) + " settled " + describe(t) + " but another correct replica settled " +
              describe(agreed->second.second));
  }
  settled_tuples_[t] = true;

  if (auto it = record_of_.find(p.id); it != record_of_.end()) {
    PaymentRecord& rec = result_.payments[it->second];
    ++rec.settles;
    if (!rec.at_rep && r == topology_->representative_of(p.spender())) rec.at_rep = now();
    if (!rec.at_quorum && rec.settles == 2 * topology_->shard(rec.shard).f + 1) rec.at_quorum = now();
  }

  const PaymentEngine& engine = nodes_.at(r)->engine();
  ++result_.conservation_checks;
  if (spec_.variant == BrbVariant::kEcho) {
    const Amount sum = engine.balance_sum();
    if (sum != total_initial_) {
      violation("conservation: balances at " + to_string(r) + " sum to " + std::to_string(sum) + " after " +
                describe(t) + ", expected " + std::to_string(total_initial_));
    }
  } else {
    const ClientId c = p.spender();
    Amount& out = out_[{r, c}];
    out += p.amount;
    const Amount in = spec_.system.initial_balances.at(c) + materialized_[{r, c}];
    const Amount bal = engine.account(c).balance;
    if (in < out || bal != in - out) {
      violation("conservation: " + to_string(c) + " at " + to_string(r) + " holds " + std::to_string(bal) +
                " after " + describe(t) + ", inflow " + std::to_string(in) + " outflow " + std::to_string(out));
    }
  }
}

void Sim::on_materialize(ReplicaId r, ClientId c, const DependencyCertificate& d) {
  if (!correct(r)) return;
  materialized_[{r, c}] += d.amount();
  if (!settled_tuples_.contains(d.tuple)) {
    violation("conservation: " + to_string(r) + " credited " + to_string(c) + " with " + describe(d.tuple) +
              " which no correct replica settled");
  }
}

void Sim::on_install(ReplicaId r, const GroupView& v) {
  if (trace_.enabled()) trace({now(), TraceEvent::kInstall, std::nullopt, Principal::of(r), std::nullopt, {}, v.id, std::nullopt});
  if (spec_.join && r == spec_.join->joiner && !result_.join.installed_at) result_.join.installed_at = now();
}

void Sim::on_resume(ReplicaId r, const GroupView& v) {
  if (trace_.enabled()) trace({now(), TraceEvent::kResume, std::nullopt, Principal::of(r), std::nullopt, {}, v.id, std::nullopt});
  if (spec_.join && r == spec_.join->joiner && !result_.join.resumed_at) {
    result_.join.resumed_at = now();
    result_.join.completed = true;
  }
}

RunResult Sim::run() {
  for (const auto& [r, node] : nodes_) {
    ReplicaNode* n = node.get();
    sched_.at(0, [n] { n->start(); });
  }
  for (const auto& [r, t] : spec_.faults.crashes) {
    sched_.at(t, [this, r = r] {
      if (trace_.enabled()) trace({now(), TraceEvent::kCrash, std::nullopt, Principal::of(r), std::nullopt, {}, std::nullopt, std::nullopt});
    });
  }
  for (const auto& [r, d] : spec_.faults.delays) {
    sched_.at(d.from, [this, r = r] {
      if (trace_.enabled()) trace({now(), TraceEvent::kDelay, std::nullopt, Principal::of(r), std::nullopt, {}, std::nullopt, std::nullopt});
    });
  }
  for (std::size_t i = 0; i < spec_.workload.entries.size(); ++i) {
    sched_.at(spec_.workload.entries[i].at, [this, i] { submit(i); });
  }
  if (spec_.join) {
    result_.join.requested = true;
    result_.join.requested_at = spec_.join->at;
    sched_.at(spec_.join->at, [this] {
      if (!crashed(spec_.join->joiner, now())) nodes_.at(spec_.join->joiner)->request_join();
    });
  }

  sched_.run(spec_.horizon);
  result_.end_time = sched_.now();
  result_.quiescent = sched_.pending() == 0;
  result_.events = sched_.executed();
  finish();
  return std::move(result_);
}

void Sim::finish() {
  for (const auto& e : spec_.workload.entries) {
    ++result_.cross.payments;
    if (topology_->shard_of(e.spender) != topology_->shard_of(e.beneficiary)) ++result_.cross.cross_payments;
  }

  for (const auto& [r, node] : nodes_) {
    ReplicaFinal f;
    f.replica = r;
    f.shard = shard_of(r).value_or(0);
    f.behavior = node->behavior();
    f.crashed = crashed(r, result_.end_time);
    f.member = node->member();
    f.view = node->view().id;
    const PaymentEngine& engine = node->engine();
    for (auto c : engine.clients()) {
      f.accounts[c] = engine.account(c);
      auto& log = f.xlogs[c];
      for (const auto& p : engine.log(c).entries()) log.push_back(p.tuple());
    }
    f.settled = engine.settled_count();
    f.blocked = engine.blocked();
    f.evidence = node->evidence();
    result_.evidence += f.evidence;
    result_.finals.push_back(std::move(f));
  }

  // global conservation: each client as seen by the correct replica that
  // got furthest with it
  if (spec_.variant == BrbVariant::kSig && result_.quiescent) {
    std::map<ClientId, const ReplicaNode*> furthest;
    for (const auto& [r, node] : nodes_) {
      if (!correct(r) || !node->member() || node->paused()) continue;
      const PaymentEngine& engine = node->engine();
      for (auto c : engine.clients()) {
        auto [it, fresh] = furthest.emplace(c, node.get());
        if (fresh) continue;
        const PaymentEngine& best = it->second->engine();
        const auto mine = std::pair(engine.log(c).size(), engine.account(c).used_deps.size());
        const auto theirs = std::pair(best.log(c).size(), best.account(c).used_deps.size());
        if (mine > theirs) it->second = node.get();
      }
    }
    std::map<PaymentId, Amount> out;
    Amount balances = 0, used = 0, sent = 0;
    for (const auto& [c, node] : furthest) {
      balances += node->engine().account(c).balance;
      for (const auto& p : node->engine().log(c).entries()) {
        out[p.id] = p.amount;
        sent += p.amount;
      }
    }
    bool complete = furthest.size() == spec_.system.initial_balances.size();
    for (const auto& [c, node] : furthest) {
      for (const auto& id : node->engine().account(c).used_deps) {
        auto it = out.find(id);
        if (it == out.end()) {
          complete = false;
          violation("conservation: " + to_string(c) + " spent credit " + to_string(id) +
                    " that no correct replica settled");
        } else {
          used += it->second;
        }
      }
    }
    if (complete && balances + sent - used != total_initial_) {
      violation("conservation: balances " + std::to_string(balances) + " plus credits in flight " +
                std::to_string(sent - used) + " differ from the initial total " + std::to_string(total_initial_));
    }
  }

  if (spec_.check_oracle) check_oracle();

  if (trace_.enabled()) {
    result_.trace_digest = trace_.digest();
    if (trace_.mode() == TraceMode::kFull) result_.trace = trace_.records();
  }
}

void Sim::check_oracle() {
  if (!result_.quiescent) {
    result_.oracle_mismatches.push_back("run did not drain before the horizon");
    return;
  }
  result_.oracle_checked = true;

  // a contested slot resolves to whichever version correct replicas
  // settled; if neither settled, the client's log ends before it
  std::vector<Payment> payments;
  std::set<ClientId> cut;
  const auto planned = spec_.workload.payments();
  for (std::size_t i = 0; i < planned.size(); ++i) {
    Payment p = planned[i];
    if (cut.contains(p.spender())) continue;
    if (twin_of_entry_[i]) {
      auto it = agreed_.find(p.id);
      if (it == agreed_.end()) {
        cut.insert(p.spender());
        continue;
      }
      p.beneficiary = it->second.second.beneficiary;
    }
    payments.push_back(std::move(p));
  }
  const OracleLedger expect = oracle_fixpoint(payments, spec_.system.initial_balances);

  auto mismatch = [&](std::string s) {
    if (result_.oracle_mismatches.size() < 50) result_.oracle_mismatches.push_back(std::move(s));
  };
  for (const auto& [r, node] : nodes_) {
    if (!correct(r) || crashed(r, result_.end_time) || !node->member()) continue;
    const PaymentEngine& engine = node->engine();
    for (auto c : engine.clients()) {
      const AccountState& a = engine.account(c);
      Amount balance = a.balance;
      if (spec_.variant == BrbVariant::kSig) {
        // credits that reached the ledger but not yet the beneficiary's log
        for (const auto& [t, _] : settled_tuples_) {
          if (t.beneficiary == c && !a.used_deps.contains(t.id)) balance += t.amount;
        }
      }
      if (balance != expect.balances.at(c)) {
        mismatch(to_string(r) + ": " + to_string(c) + " balance " + std::to_string(balance) + ", oracle " +
                 std::to_string(expect.balances.at(c)));
      }
      if (a.next_seq != expect.next_seq.at(c)) {
        mismatch(to_string(r) + ": " + to_string(c) + " next seq " + std::to_string(a.next_seq) + ", oracle " +
                 std::to_string(expect.next_seq.at(c)));
      }
      const auto& got = engine.log(c).entries();
      const auto& want = expect.xlogs.at(c);
      for (std::size_t k = 0; k < std::min(got.size(), want.size()); ++k) {
        if (got[k].tuple() != want[k].tuple()) {
          mismatch(to_string(r) + ": " + to_string(c) + " log entry " + std::to_string(k) + " is " +
                   describe(got[k].tuple()) + ", oracle " + describe(want[k].tuple()));
          break;
        }
      }
    }
  }
}

}  // namespace

RunResult run(const RunSpec& spec) { return Sim(spec).run(); }

}  // namespace brbpay

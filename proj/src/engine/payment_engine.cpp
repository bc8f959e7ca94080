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

#include "brbpay/engine/payment_engine.hpp"

#include <cassert>

namespace brbpay {

const char* to_string(SubmitStatus s) {
  switch (s) {
    case SubmitStatus::kAccepted: return "accepted";
    case SubmitStatus::kUnknownClient: return "unknown-client";
    case SubmitStatus::kWrongRepresentative: return "wrong-representative";
    case SubmitStatus::kBadSignature: return "bad-signature";
    case SubmitStatus::kOutOfOrder: return "out-of-order";
  }
  return "?";
}

PaymentEngine::PaymentEngine(ReplicaId self, std::shared_ptr<const ShardTopology> topology, const KeyRegistry& keys,
                             const std::map<ClientId, Amount>& initial_balances, Options options)
    : self_(self), topology_(std::move(topology)), keys_(keys), options_(options) {
  if (options_.variant == BrbVariant::kEcho && topology_->shard_count() != 1) {
    throw ConfigError("the echo variant deposits locally and cannot run sharded");
  }
  const auto home = topology_->shard_of(self_);
  if (!home) throw ConfigError(to_string(self_) + " is in no shard");
  for (const auto& [c, amount] : initial_balances) {
    if (!topology_->knows(c) || topology_->shard_of(c) != *home) continue;
    Account& a = accounts_[c];
    a.state.balance = amount;
    a.log = XLog(c);
    if (topology_->representative_of(c) == self_) rep_[c].available = amount;
  }
}

const AccountState& PaymentEngine::account(ClientId c) const {
  auto it = accounts_.find(c);
  if (it == accounts_.end()) throw UnknownClientError(to_string(c) + " has no account at " + to_string(self_));
  return it->second.state;
}

const XLog& PaymentEngine::log(ClientId c) const {
  auto it = accounts_.find(c);
  if (it == accounts_.end()) throw UnknownClientError(to_string(c) + " has no account at " + to_string(self_));
  return it->second.log;
}

PaymentEngine::Account& PaymentEngine::account_mut(ClientId c) {
  auto it = accounts_.find(c);
  if (it == accounts_.end()) throw UnknownClientError(to_string(c) + " has no account at " + to_string(self_));
  return it->second;
}

std::vector<ClientId> PaymentEngine::clients() const {
  std::vector<ClientId> out;
  for (const auto& [c, _] : accounts_) out.push_back(c);
  return out;
}

Amount PaymentEngine::balance_sum() const {
  Amount sum = 0;
  for (const auto& [_, a] : accounts_) sum += a.state.balance;
  return sum;
}

std::size_t PaymentEngine::blocked() const {
  std::size_t n = 0;
  for (const auto& [_, a] : accounts_) n += a.pending.size();
  return n;
}

void PaymentEngine::deliver(const Payment& p) {
  Account& a = account_mut(p.spender());
  if (!a.pending.empty() && p.id.seq <= a.pending.back().id.seq) return;
  if (p.id.seq < a.state.next_seq) return;
  a.pending.push_back(p);
  settle_round(p.spender());
}

void PaymentEngine::settle_round(ClientId first) {
  bool progress = false;
  while (try_settle(first)) progress = true;
  if (accounts_[first].pending.empty()) {
    blocked_.erase(first);
  } else {
    blocked_.insert(first);
  }
  // a settle may have funded someone else's head; re-scan in client order
  while (progress) {
    progress = false;
    for (auto it = blocked_.begin(); it != blocked_.end();) {
      const ClientId c = *it;
      while (try_settle(c)) progress = true;
      it = accounts_[c].pending.empty() ? blocked_.erase(it) : std::next(it);
    }
  }
}

bool PaymentEngine::try_settle(ClientId c) {
  Account& a = accounts_[c];
  if (a.pending.empty()) return false;
  const Payment& p = a.pending.front();
  if (p.id.seq != a.state.next_seq) return false;

  if (options_.variant == BrbVariant::kEcho) {
    if (a.state.balance < p.amount) return false;
    Account& b = account_mut(p.beneficiary);
    a.state.balance -= p.amount;
    b.state.balance += p.amount;
  } else {
    for (const auto& dep : p.deps) {
      if (a.state.used_deps.contains(dep.tuple.id)) continue;
      if (dep.tuple.beneficiary != c || !verify_cross_shard_certificate(dep, *topology_, keys_)) {
        ++rejected_deps_;
        continue;
      }
      a.state.used_deps.insert(dep.tuple.id);
      a.state.balance += dep.amount();
      if (on_materialize) on_materialize(c, dep);
    }
    if (a.state.balance < p.amount) return false;
    a.state.balance -= p.amount;
    if (options_.emit_credits) credit_buffer_[topology_->representative_of(p.beneficiary)].push_back(p.tuple());
  }
  ++a.state.next_seq;
  a.log.append(p);
  ++settled_;
  Payment done = std::move(a.pending.front());
  a.pending.pop_front();
  if (on_settle) on_settle(done);
  return true;
}

std::vector<OutgoingCredit> PaymentEngine::take_credits() {
  std::vector<OutgoingCredit> out;
  for (auto& [to, tuples] : credit_buffer_) {
    auto proof = std::make_shared<CreditProof>();
    proof->signer = self_;
    proof->tuples = std::move(tuples);
    proof->sig = keys_.sign(Principal::of(self_), credit_signing_bytes(proof->tuples));
    out.push_back({to, std::move(proof)});
  }
  credit_buffer_.clear();
  return out;
}

SubmitStatus PaymentEngine::submit(const Payment& p, const Signature& client_sig) {
  if (!topology_->knows(p.spender()) || !topology_->knows(p.beneficiary)) return SubmitStatus::kUnknownClient;
  if (topology_->representative_of(p.spender()) != self_) return SubmitStatus::kWrongRepresentative;
  if (client_sig.signer != Principal::of(p.spender()) ||
      !keys_.verify(Principal::of(p.spender()), submission_signing_bytes(p), client_sig)) {
    return SubmitStatus::kBadSignature;
  }
  RepClient& rc = rep_[p.spender()];
  if (p.id.seq != rc.expected) return SubmitStatus::kOutOfOrder;
  ++rc.expected;
  Payment admitted{p.id, p.beneficiary, p.amount, {}};
  if (options_.variant == BrbVariant::kEcho) {
    rc.released.push_back(admitted);
    ready_.push_back(std::move(admitted));
  } else {
    rc.held.push_back(std::move(admitted));
    release(p.spender(), rc);
  }
  return SubmitStatus::kAccepted;
}

void PaymentEngine::release(ClientId, RepClient& rc) {
  // a broadcast the spender cannot cover would strand its certificates
  while (!rc.held.empty() && rc.available >= rc.held.front().amount) {
    Payment p = std::move(rc.held.front());
    rc.held.pop_front();
    p.deps = std::move(rc.deps);
    rc.deps.clear();
    rc.available -= p.amount;
    rc.released.push_back(p);
    ready_.push_back(std::move(p));
  }
}

std::vector<Payment> PaymentEngine::take_ready() {
  std::vector<Payment> out;
  out.swap(ready_);
  return out;
}

void PaymentEngine::on_credit(const std::shared_ptr<const CreditProof>& proof) {
  if (options_.variant != BrbVariant::kSig || !proof) return;
  if (!verify_credit_proof(*proof, *topology_, keys_)) {
    ++rejected_credits_;
    return;
  }
  for (const auto& t : proof->tuples) {
    if (!topology_->knows(t.beneficiary) || topology_->representative_of(t.beneficiary) != self_) continue;
    if (formed_.contains(t.id)) continue;
    auto& signers = partial_[t];
    signers.emplace(proof->signer, proof);
    const int threshold = certificate_threshold(topology_->shard(topology_->shard_of(t.id.spender)).f);
    if (static_cast<int>(signers.size()) < threshold) continue;

    DependencyCertificate cert;
    cert.tuple = t;
    for (const auto& [_, pr] : signers) cert.proofs.push_back(pr);
    partial_.erase(t);
    formed_.insert(t.id);
    RepClient& rc = rep_[t.beneficiary];
    rc.available += t.amount;
    rc.deps.push_back(std::move(cert));
    release(t.beneficiary, rc);
  }
}

Amount PaymentEngine::pending_credit(ClientId c) const {
  auto it = rep_.find(c);
  if (it == rep_.end()) return 0;
  Amount sum = 0;
  for (const auto& d : it->second.deps) sum += d.amount();
  return sum;
}

SeqNo PaymentEngine::expected(ClientId c) const {
  auto it = rep_.find(c);
  return it == rep_.end() ? 0 : it->second.expected;
}

const std::vector<Payment>& PaymentEngine::released(ClientId c) const {
  static const std::vector<Payment> kEmpty;
  auto it = rep_.find(c);
  return it == rep_.end() ? kEmpty : it->second.released;
}

std::vector<ClientId> PaymentEngine::represented() const {
  std::vector<ClientId> out;
  for (const auto& [c, _] : rep_) out.push_back(c);
  return out;
}

std::size_t PaymentEngine::held_submissions() const {
  std::size_t n = 0;
  for (const auto& [_, rc] : rep_) n += rc.held.size();
  return n;
}

}  // namespace brbpay

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

// Per-replica payment state machine. Every replica approves and settles
// delivered payments; the representative of a client additionally admits
// its submissions and, in the signature variant, turns incoming Credit
// proofs into dependency certificates attached to the client's next
// outgoing payment.

#ifndef BRBPAY_ENGINE_PAYMENT_ENGINE_HPP_
#define BRBPAY_ENGINE_PAYMENT_ENGINE_HPP_

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <unordered_map>
#include <vector>

#include "brbpay/core/config.hpp"
#include "brbpay/core/payment.hpp"
#include "brbpay/shard/topology.hpp"

namespace brbpay {

enum class SubmitStatus { kAccepted, kUnknownClient, kWrongRepresentative, kBadSignature, kOutOfOrder };
const char* to_string(SubmitStatus s);

struct OutgoingCredit {
  ReplicaId to;
  std::shared_ptr<const CreditProof> proof;
};

class PaymentEngine {
 public:
  struct Options {
    BrbVariant variant = BrbVariant::kEcho;
    bool emit_credits = true;
  };

  /// Tracks accounts of every client whose log lives in `self`'s shard.
  PaymentEngine(ReplicaId self, std::shared_ptr<const ShardTopology> topology, const KeyRegistry& keys,
                const std::map<ClientId, Amount>& initial_balances, Options options);

  BrbVariant variant() const { return options_.variant; }
  void set_topology(std::shared_ptr<const ShardTopology> topology) { topology_ = std::move(topology); }
  void set_emit_credits(bool on) { options_.emit_credits = on; }

  /// Hands over a payment released by the FIFO gate. Approves and settles
  /// whatever becomes settleable.
  void deliver(const Payment& p);

  bool has_account(ClientId c) const { return accounts_.contains(c); }
  /// Throws UnknownClientError for clients outside this shard.
  const AccountState& account(ClientId c) const;
  const XLog& log(ClientId c) const;
  std::vector<ClientId> clients() const;
  Amount balance_sum() const;
  std::size_t blocked() const;
  std::size_t settled_count() const { return settled_; }

  /// Credit proofs produced since the last call, one per destination.
  std::vector<OutgoingCredit> take_credits();

  /// Representative side.
  SubmitStatus submit(const Payment& p, const Signature& client_sig);
  /// Admitted payments ready to be broadcast, in admission order.
  std::vector<Payment> take_ready();
  bool has_ready() const { return !ready_.empty(); }
  void on_credit(const std::shared_ptr<const CreditProof>& proof);
  /// Formed certificates not yet attached to an outgoing payment.
  Amount pending_credit(ClientId c) const;
  /// Next sequence number this representative will admit for `c`.
  SeqNo expected(ClientId c) const;
  /// Submissions of `c` handed to the broadcast layer, indexed by seq.
  const std::vector<Payment>& released(ClientId c) const;
  std::vector<ClientId> represented() const;
  /// Held back waiting for funds (signature variant).
  std::size_t held_submissions() const;
  std::size_t rejected_credits() const { return rejected_credits_; }
  std::size_t rejected_deps() const { return rejected_deps_; }

  /// Observer hooks, fired synchronously.
  std::function<void(const Payment&)> on_settle;
  std::function<void(ClientId, const DependencyCertificate&)> on_materialize;

 private:
  struct Account {
    AccountState state;
    XLog log;
    std::deque<Payment> pending;
  };
  struct RepClient {
    SeqNo expected = 0;
    std::deque<Payment> held;
    Amount available = 0;
    std::vector<DependencyCertificate> deps;
    std::vector<Payment> released;
  };

  Account& account_mut(ClientId c);
  bool try_settle(ClientId c);
  void settle_round(ClientId first);
  void release(ClientId c, RepClient& rc);

  ReplicaId self_;
  std::shared_ptr<const ShardTopology> topology_;
  const KeyRegistry& keys_;
  Options options_;

  std::map<ClientId, Account> accounts_;
  std::set<ClientId> blocked_;
  std::size_t settled_ = 0;
  std::map<ReplicaId, std::vector<PaymentTuple>> credit_buffer_;

  std::map<ClientId, RepClient> rep_;
  std::vector<Payment> ready_;
  std::map<PaymentTuple, std::map<ReplicaId, std::shared_ptr<const CreditProof>>> partial_;
  std::set<PaymentId> formed_;
  std::size_t rejected_credits_ = 0;
  std::size_t rejected_deps_ = 0;
};

}  // namespace brbpay

#endif  // BRBPAY_ENGINE_PAYMENT_ENGINE_HPP_

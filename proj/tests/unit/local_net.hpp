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

#ifndef BRBPAY_TESTS_LOCAL_NET_HPP_
#define BRBPAY_TESTS_LOCAL_NET_HPP_

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <utility>

#include "brbpay/brb/group.hpp"
#include "brbpay/sim/scheduler.hpp"

namespace brbpay::testing {

// Just enough network to drive broadcast instances without replica nodes.
// Latency is 1..5ms, drawn from a seeded generator, so reorderings are
// reproducible.
class LocalNet {
 public:
  using Handler = std::function<void(ReplicaId from, const Message& m)>;

  class Port : public BrbTransport {
   public:
    Port(LocalNet& net, ReplicaId id) : net_(net), id_(id) {}
    ReplicaId self() const override { return id_; }
    SimTime now() const override { return net_.sched.now(); }
    void send(ReplicaId to, Message m) override { net_.post(id_, to, std::move(m)); }
    void schedule(SimTime delay, std::function<void()> fn) override { net_.sched.after(delay, std::move(fn)); }

   private:
    LocalNet& net_;
    ReplicaId id_;
  };

  explicit LocalNet(std::uint64_t seed = 1) : rng_(seed) {}

  Port& port(ReplicaId r) {
    auto& p = ports_[r];
    if (!p) p = std::make_unique<Port>(*this, r);
    return *p;
  }
  void on(ReplicaId r, Handler h) { handlers_[r] = std::move(h); }
  void cut(ReplicaId from, ReplicaId to) { cuts_.insert({from, to}); }
  void isolate(ReplicaId r) { isolated_.insert(r); }

  void post(ReplicaId from, ReplicaId to, Message m) {
    if (cuts_.contains({from, to}) || isolated_.contains(from) || isolated_.contains(to)) return;
    if (from != to) ++sent_[static_cast<std::size_t>(kind_of(m))];
    const SimTime delay = from == to ? 0 : kMillisecond * static_cast<SimTime>(1 + rng_() % 5);
    sched.after(delay, [this, from, to, m = std::move(m)] {
      if (auto it = handlers_.find(to); it != handlers_.end()) it->second(from, m);
    });
  }

  void run(SimTime horizon = 60 * kSecond) { sched.run(horizon); }

  std::uint64_t sent(MsgKind k) const { return sent_[static_cast<std::size_t>(k)]; }
  std::uint64_t sent_total() const {
    std::uint64_t n = 0;
    for (auto v : sent_) n += v;
    return n;
  }

  Scheduler sched;

 private:
  std::mt19937_64 rng_;
  std::map<ReplicaId, std::unique_ptr<Port>> ports_;
  std::map<ReplicaId, Handler> handlers_;
  std::set<std::pair<ReplicaId, ReplicaId>> cuts_;
  std::set<ReplicaId> isolated_;
  std::array<std::uint64_t, kMsgKindCount> sent_{};
};

inline std::vector<ReplicaId> replicas(int n) {
  std::vector<ReplicaId> out;
  for (int i = 0; i < n; ++i) out.push_back(ReplicaId{static_cast<std::uint32_t>(i)});
  return out;
}

inline std::vector<ClientId> clients(int n) {
  std::vector<ClientId> out;
  for (int i = 0; i < n; ++i) out.push_back(ClientId{static_cast<std::uint32_t>(i)});
  return out;
}

inline Payment payment(std::uint32_t spender, SeqNo seq, std::uint32_t beneficiary, Amount amount) {
  return {{ClientId{spender}, seq}, ClientId{beneficiary}, amount, {}};
}

inline std::shared_ptr<const PaymentBatch> batch_of(std::vector<Payment> payments) {
  auto b = std::make_shared<PaymentBatch>();
  b->sub_batches.push_back({ReplicaId{0}, std::move(payments), {}});
  return b;
}

}  // namespace brbpay::testing

#endif  // BRBPAY_TESTS_LOCAL_NET_HPP_

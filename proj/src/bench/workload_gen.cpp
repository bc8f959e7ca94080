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


#include "brbpay/bench/workload_gen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace brbpay {

namespace {

/// Submit times at `rate` per second, exponential or evenly spaced.
std::vector<SimTime> arrivals(int n, double rate, bool poisson, SimTime start, std::mt19937_64& rng) {
  if (rate <= 0) throw ConfigError("offered load must be positive");
  std::vector<SimTime> out;
  out.reserve(n);
  std::exponential_distribution<double> gap(rate);
  double t = 0;
  for (int i = 0; i < n; ++i) {
    t += poisson ? gap(rng) : 1.0 / rate;
    out.push_back(start + static_cast<SimTime>(std::llround(t * kSecond)));
  }
  return out;
}

}  // namespace

Workload gen_uniform(const UniformParams& p, std::uint64_t seed) {
  if (p.clients < 2) throw ConfigError("uniform workload needs at least two clients");
  if (p.payments < 0) throw ConfigError("negative payment count");
  if (p.min_amount == 0 || p.min_amount > p.max_amount) throw ConfigError("amount range must satisfy 1 <= min <= max");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(p.clients - 1));
  std::uniform_int_distribution<std::uint32_t> other(0, static_cast<std::uint32_t>(p.clients - 2));
  std::uniform_int_distribution<Amount> amount(p.min_amount, p.max_amount);
  Workload w;
  for (SimTime at : arrivals(p.payments, p.rate, p.poisson, p.start, rng)) {
    WorkloadEntry e;
    e.at = at;
    e.spender = ClientId{pick(rng)};
    std::uint32_t b = other(rng);
    if (b >= e.spender.value) ++b;
    e.beneficiary = ClientId{b};
    e.amount = amount(rng);
    w.entries.push_back(e);
  }
  return w;
}

Workload gen_uniform(int n_clients, int n_payments, std::uint64_t seed) {
  UniformParams p;
  p.clients = n_clients;
  p.payments = n_payments;
  return gen_uniform(p, seed);
}

ClientId checking_account(int owner) { return ClientId{static_cast<std::uint32_t>(2 * owner)}; }
ClientId savings_account(int owner) { return ClientId{static_cast<std::uint32_t>(2 * owner + 1)}; }
int owner_of(ClientId account) { return static_cast<int>(account.value / 2); }

SystemConfig smallbank_system(int owners, int shards, int f, Amount initial_balance) {
  if (owners < 1) throw ConfigError("smallbank needs at least one owner");
  SystemConfig cfg = SystemConfig::uniform(shards, f, 0, initial_balance);
  const int m = 3 * f + 1;
  for (int i = 0; i < owners; ++i) {
    const auto& shard = cfg.shards[static_cast<std::size_t>(i % shards)];
    const ReplicaId rep = shard.members[static_cast<std::size_t>((i / shards) % m)];
    for (ClientId c : {checking_account(i), savings_account(i)}) {
      cfg.representative_of[c] = rep;
      cfg.initial_balances[c] = initial_balance;
    }
  }
  return cfg;
}

Workload gen_smallbank(const SmallbankParams& p, std::uint64_t seed) {
  if (p.owners < 1 || p.shards < 1) throw ConfigError("smallbank needs owners and shards");
  if (p.cross_fraction < 0 || p.cross_fraction > 1 || p.transfer_fraction < 0 || p.transfer_fraction > 1) {
    throw ConfigError("smallbank fractions must lie in [0, 1]");
  }
  if (p.shards > 1 && p.owners < p.shards) throw ConfigError("every shard needs an owner for cross-shard payments");
  if (p.min_amount == 0 || p.min_amount > p.max_amount) throw ConfigError("amount range must satisfy 1 <= min <= max");
  std::mt19937_64 rng(seed);

  std::vector<bool> cross(static_cast<std::size_t>(p.payments), false);
  if (p.shards > 1) {
    const auto quota = static_cast<std::size_t>(std::llround(p.cross_fraction * p.payments));
    std::fill(cross.begin(), cross.begin() + static_cast<std::ptrdiff_t>(quota), true);
    std::shuffle(cross.begin(), cross.end(), rng);
  }

  std::vector<std::vector<int>> by_shard(static_cast<std::size_t>(p.shards));
  for (int i = 0; i < p.owners; ++i) by_shard[static_cast<std::size_t>(i % p.shards)].push_back(i);
  auto any_of = [&](const std::vector<int>& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };

  std::uniform_int_distribution<int> owner(0, p.owners - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<Amount> amount(p.min_amount, p.max_amount);
  Workload w;
  const auto times = arrivals(p.payments, p.rate, true, 0, rng);
  for (int k = 0; k < p.payments; ++k) {
    WorkloadEntry e;
    e.at = times[static_cast<std::size_t>(k)];
    e.amount = amount(rng);
    const int i = owner(rng);
    const int home = i % p.shards;
    if (cross[static_cast<std::size_t>(k)]) {
      int s = std::uniform_int_distribution<int>(0, p.shards - 2)(rng);
      if (s >= home) ++s;
      e.kind = OpKind::kSendPayment;
      e.spender = checking_account(i);
      e.beneficiary = checking_account(any_of(by_shard[static_cast<std::size_t>(s)]));
    } else {
      const auto& local = by_shard[static_cast<std::size_t>(home)];
      if (local.size() < 2 || coin(rng) < p.transfer_fraction) {
        e.kind = OpKind::kTransfer;
        const bool to_savings = coin(rng) < 0.5;
        e.spender = to_savings ? checking_account(i) : savings_account(i);
        e.beneficiary = to_savings ? savings_account(i) : checking_account(i);
      } else {
        int j;
        do j = any_of(local); while (j == i);
        e.kind = OpKind::kSendPayment;
        e.spender = checking_account(i);
        e.beneficiary = checking_account(j);
      }
    }
    w.entries.push_back(e);
  }
  return w;
}

Workload gen_smallbank(int n_owners, int n_payments, int n_shards, std::uint64_t seed) {
  SmallbankParams p;
  p.owners = n_owners;
  p.payments = n_payments;
  p.shards = n_shards;
  return gen_smallbank(p, seed);
}

}  // namespace brbpay

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


#ifndef BRBPAY_BENCH_WORKLOAD_GEN_HPP_
#define BRBPAY_BENCH_WORKLOAD_GEN_HPP_

#include "brbpay/core/config.hpp"
#include "brbpay/sim/workload.hpp"

namespace brbpay {

struct UniformParams {
  int clients = 8;
  int payments = 100;
  /// Offered load in payments per simulated second, all clients together.
  double rate = 100.0;
  Amount min_amount = 1;
  Amount max_amount = 100;
  /// Exponential gaps when set, evenly spaced otherwise.
  bool poisson = true;
  SimTime start = 0;
};

/// Random spender, beneficiary != spender, amount in [min, max].
Workload gen_uniform(const UniformParams& params, std::uint64_t seed);
Workload gen_uniform(int n_clients, int n_payments, std::uint64_t seed);

struct SmallbankParams {
  /// Account owners; owner i holds checking account 2i and savings 2i+1.
  int owners = 16;
  int payments = 1000;
  int shards = 1;
  double rate = 100.0;
  /// Share of payments whose beneficiary lives in another shard (ignored
  /// with one shard).
  double cross_fraction = 0.125;
  /// Of the remaining payments, share that moves money between one owner's
  /// two accounts; the rest pay another owner in the same shard.
  double transfer_fraction = 0.5;
  Amount min_amount = 1;
  Amount max_amount = 50;
};

ClientId checking_account(int owner);
ClientId savings_account(int owner);
int owner_of(ClientId account);

/// Both accounts of owner i live in shard i % shards and share a
/// representative; representatives rotate within each shard.
SystemConfig smallbank_system(int owners, int shards, int f, Amount initial_balance);

/// Cross-shard payments are placed by exact quota, so their share is
/// cross_fraction up to rounding.
Workload gen_smallbank(const SmallbankParams& params, std::uint64_t seed);
Workload gen_smallbank(int n_owners, int n_payments, int n_shards, std::uint64_t seed);

}  // namespace brbpay

#endif  // BRBPAY_BENCH_WORKLOAD_GEN_HPP_

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

#ifndef BRBPAY_CORE_IDS_HPP_
#define BRBPAY_CORE_IDS_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace brbpay {

/// Smallest currency unit. Balances never go negative.
using Amount = std::uint64_t;

/// Per-client payment sequence number, 0-indexed.
using SeqNo = std::uint64_t;

/// Simulated time in microseconds.
using SimTime = std::int64_t;

constexpr SimTime kMillisecond = 1000;
constexpr SimTime kSecond = 1000 * kMillisecond;

struct ClientId {
  std::uint32_t value = 0;
  auto operator<=>(const ClientId&) const = default;
};

struct ReplicaId {
  std::uint32_t value = 0;
  auto operator<=>(const ReplicaId&) const = default;
};

/// (spender, seq) names one slot of the spender's exclusive log.
struct PaymentId {
  ClientId spender;
  SeqNo seq = 0;
  auto operator<=>(const PaymentId&) const = default;
};

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

inline std::string to_string(ClientId c) { return "c" + std::to_string(c.value); }
inline std::string to_string(ReplicaId r) { return "r" + std::to_string(r.value); }
inline std::string to_string(const PaymentId& id) {
  return "(" + to_string(id.spender) + "," + std::to_string(id.seq) + ")";
}

}  // namespace brbpay

template <>
struct std::hash<brbpay::ClientId> {
  std::size_t operator()(brbpay::ClientId c) const noexcept { return std::hash<std::uint32_t>{}(c.value); }
};

template <>
struct std::hash<brbpay::ReplicaId> {
  std::size_t operator()(brbpay::ReplicaId r) const noexcept { return std::hash<std::uint32_t>{}(r.value); }
};

template <>
struct std::hash<brbpay::PaymentId> {
  std::size_t operator()(const brbpay::PaymentId& id) const noexcept {
    return (static_cast<std::size_t>(id.spender.value) * 0x9E3779B97F4A7C15ULL) ^ std::hash<std::uint64_t>{}(id.seq);
  }
};

#endif  // BRBPAY_CORE_IDS_HPP_

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

// Authenticators used by the broadcast layers: a 32-byte digest, signatures
// (simulated keyed digests or ECDSA P-256) and pairwise link MACs.

#ifndef BRBPAY_CRYPTO_CRYPTO_HPP_
#define BRBPAY_CRYPTO_CRYPTO_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "brbpay/core/bytes.hpp"
#include "brbpay/core/ids.hpp"

struct evp_pkey_st;

namespace brbpay {

inline constexpr std::size_t kDigestSize = 32;
using Digest = std::array<std::uint8_t, kDigestSize>;
using Mac = std::array<std::uint8_t, 32>;

/// SHA-256 of `data`.
Digest digest(ByteView data);

std::string to_hex(ByteView data);
inline std::string to_hex(const Digest& d) { return to_hex(ByteView(d)); }

/// Incremental SHA-256, used for streaming trace digests.
class DigestBuilder {
 public:
  DigestBuilder();
  ~DigestBuilder();
  DigestBuilder(const DigestBuilder&) = delete;
  DigestBuilder& operator=(const DigestBuilder&) = delete;

  void update(ByteView data);
  Digest finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Whoever holds a key pair: a replica or a client.
struct Principal {
  enum class Kind : std::uint8_t { kReplica = 0, kClient = 1 };
  Kind kind = Kind::kReplica;
  std::uint32_t id = 0;

  static Principal of(ReplicaId r) { return {Kind::kReplica, r.value}; }
  static Principal of(ClientId c) { return {Kind::kClient, c.value}; }
  auto operator<=>(const Principal&) const = default;
};

inline constexpr std::size_t kMaxSignatureSize = 72;

struct Signature {
  Principal signer;
  std::uint8_t size = 0;
  std::array<std::uint8_t, kMaxSignatureSize> bytes{};

  ByteView view() const { return {bytes.data(), size}; }
  bool operator==(const Signature& o) const { return signer == o.signer && size == o.size && std::equal(bytes.begin(), bytes.begin() + size, o.bytes.begin()); }
};

enum class CryptoBackend {
  kSim,        // keyed SHA-256 standing in for signatures; deterministic
  kEcdsaP256,  // OpenSSL ECDSA over NIST P-256 + HMAC-SHA256 links
};

class UnknownKeyError : public Error {
 public:
  using Error::Error;
};

/// Key material for every configured replica and client, plus symmetric MAC
/// keys for every replica pair. Immutable once built; all const members are
/// safe to call concurrently.
class KeyRegistry {
 public:
  KeyRegistry(CryptoBackend backend, std::span<const ReplicaId> replicas, std::span<const ClientId> clients,
              std::uint64_t seed = 0);
  ~KeyRegistry();
  KeyRegistry(const KeyRegistry&) = delete;
  KeyRegistry& operator=(const KeyRegistry&) = delete;

  CryptoBackend backend() const { return backend_; }
  bool has(Principal p) const { return keys_.contains(key_of(p)); }

  /// Throws UnknownKeyError if `signer` has no key pair.
  Signature sign(Principal signer, ByteView message) const;
  /// False for unknown signers, mismatched signer fields and bad bytes.
  bool verify(Principal signer, ByteView message, const Signature& sig) const;

  /// Throws UnknownKeyError if either end is not a configured replica.
  Mac mac(ReplicaId sender, ReplicaId receiver, ByteView message) const;
  bool verify_mac(ReplicaId sender, ReplicaId receiver, ByteView message, const Mac& tag) const;

  /// Symmetric: pair_key(a, b) == pair_key(b, a).
  const std::array<std::uint8_t, 32>& pair_key(ReplicaId a, ReplicaId b) const;

 private:
  struct KeyPair {
    std::array<std::uint8_t, 32> secret{};
    std::shared_ptr<evp_pkey_st> pkey;  // only for kEcdsaP256
  };

  static std::uint64_t key_of(Principal p) { return (static_cast<std::uint64_t>(p.kind) << 32) | p.id; }
  static std::uint64_t pair_of(ReplicaId a, ReplicaId b) {
    auto lo = std::min(a.value, b.value), hi = std::max(a.value, b.value);
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
  }
  const KeyPair& pair_for(Principal p) const;

  CryptoBackend backend_;
  std::unordered_map<std::uint64_t, KeyPair> keys_;
  std::unordered_map<std::uint64_t, std::array<std::uint8_t, 32>> mac_keys_;
};

}  // namespace brbpay

#endif  // BRBPAY_CRYPTO_CRYPTO_HPP_

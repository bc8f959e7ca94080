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

#include "brbpay/crypto/crypto.hpp"

#include <openssl/core_names.h>
#include <openssl/crypto.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <algorithm>
#include <cstring>

namespace brbpay {
namespace {

const EVP_MD* sha256_md() {
  static const EVP_MD* md = EVP_MD_fetch(nullptr, "SHA256", nullptr);
  return md;
}

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

EVP_MD_CTX* thread_ctx() {
  thread_local std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
  return ctx.get();
}

Digest sha256_parts(ByteView a, ByteView b) {
  EVP_MD_CTX* ctx = thread_ctx();
  EVP_DigestInit_ex(ctx, sha256_md(), nullptr);
  if (!a.empty()) EVP_DigestUpdate(ctx, a.data(), a.size());
  if (!b.empty()) EVP_DigestUpdate(ctx, b.data(), b.size());
  Digest out{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, out.data(), &len);
  return out;
}

std::array<std::uint8_t, 32> derive(std::uint64_t seed, std::string_view label, std::uint64_t a, std::uint64_t b) {
  ByteWriter w;
  w.raw(as_bytes(label));
  w.u64(seed);
  w.u64(a);
  w.u64(b);
  return digest(w.bytes());
}

Mac hmac_sha256(const std::array<std::uint8_t, 32>& key, ByteView message) {
  Mac out{};
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), message.data(), message.size(), out.data(), &len);
  return out;
}

std::shared_ptr<evp_pkey_st> generate_p256() {
  EVP_PKEY* key = EVP_EC_gen("P-256");
  if (key == nullptr) throw Error("ECDSA P-256 key generation failed");
  return {key, EVP_PKEY_free};
}

}  // namespace

Digest digest(ByteView data) { return sha256_parts(data, {}); }

std::string to_hex(ByteView data) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  s.reserve(data.size() * 2);
  for (auto b : data) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 0xF]);
  }
  return s;
}

struct DigestBuilder::Impl {
  std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx{EVP_MD_CTX_new()};
};

DigestBuilder::DigestBuilder() : impl_(std::make_unique<Impl>()) {
  EVP_DigestInit_ex(impl_->ctx.get(), sha256_md(), nullptr);
}
DigestBuilder::~DigestBuilder() = default;

void DigestBuilder::update(ByteView data) {
  if (!data.empty()) EVP_DigestUpdate(impl_->ctx.get(), data.data(), data.size());
}

Digest DigestBuilder::finish() {
  Digest out{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(impl_->ctx.get(), out.data(), &len);
  EVP_DigestInit_ex(impl_->ctx.get(), sha256_md(), nullptr);
  return out;
}

KeyRegistry::KeyRegistry(CryptoBackend backend, std::span<const ReplicaId> replicas,
                         std::span<const ClientId> clients, std::uint64_t seed)
    : backend_(backend) {
  auto add = [&](Principal p) {
    KeyPair kp;
    kp.secret = derive(seed, "brbpay-signing-key", static_cast<std::uint64_t>(p.kind), p.id);
    if (backend_ == CryptoBackend::kEcdsaP256) kp.pkey = generate_p256();
    keys_.emplace(key_of(p), std::move(kp));
  };
  for (auto r : replicas) add(Principal::of(r));
  for (auto c : clients) add(Principal::of(c));
  for (std::size_t i = 0; i < replicas.size(); ++i) {
    for (std::size_t j = i; j < replicas.size(); ++j) {
      auto k = pair_of(replicas[i], replicas[j]);
      mac_keys_.emplace(k, derive(seed, "brbpay-link-key", k >> 32, k & 0xFFFFFFFFu));
    }
  }
}

KeyRegistry::~KeyRegistry() = default;

const KeyRegistry::KeyPair& KeyRegistry::pair_for(Principal p) const {
  auto it = keys_.find(key_of(p));
  if (it == keys_.end()) {
    throw UnknownKeyError(std::string("no key pair for ") + (p.kind == Principal::Kind::kReplica ? "replica " : "client ") +
                          std::to_string(p.id));
  }
  return it->second;
}

Signature KeyRegistry::sign(Principal signer, ByteView message) const {
  const KeyPair& kp = pair_for(signer);
  Signature sig;
  sig.signer = signer;
  if (backend_ == CryptoBackend::kSim) {
    Digest d = sha256_parts(kp.secret, message);
    std::copy(d.begin(), d.end(), sig.bytes.begin());
    sig.size = static_cast<std::uint8_t>(d.size());
    return sig;
  }
  std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
  std::size_t len = sig.bytes.size();
  if (EVP_DigestSignInit(ctx.get(), nullptr, EVP_sha256(), nullptr, kp.pkey.get()) != 1 ||
      EVP_DigestSign(ctx.get(), sig.bytes.data(), &len, message.data(), message.size()) != 1) {
    throw Error("ECDSA signing failed");
  }
  sig.size = static_cast<std::uint8_t>(len);
  return sig;
}

bool KeyRegistry::verify(Principal signer, ByteView message, const Signature& sig) const {
  if (sig.signer != signer) return false;
  auto it = keys_.find(key_of(signer));
  if (it == keys_.end()) return false;
  const KeyPair& kp = it->second;
  if (backend_ == CryptoBackend::kSim) {
    if (sig.size != kDigestSize) return false;
    Digest d = sha256_parts(kp.secret, message);
    return CRYPTO_memcmp(d.data(), sig.bytes.data(), d.size()) == 0;
  }
  std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
  if (EVP_DigestVerifyInit(ctx.get(), nullptr, EVP_sha256(), nullptr, kp.pkey.get()) != 1) return false;
  return EVP_DigestVerify(ctx.get(), sig.bytes.data(), sig.size, message.data(), message.size()) == 1;
}

const std::array<std::uint8_t, 32>& KeyRegistry::pair_key(ReplicaId a, ReplicaId b) const {
  auto it = mac_keys_.find(pair_of(a, b));
  if (it == mac_keys_.end()) {
    throw UnknownKeyError("no link key for " + to_string(a) + "<->" + to_string(b));
  }
  return it->second;
}

Mac KeyRegistry::mac(ReplicaId sender, ReplicaId receiver, ByteView message) const {
  // The direction is bound into the tag so a reflected message fails.
  ByteWriter w(message.size() + 8);
  w.u32(sender.value);
  w.u32(receiver.value);
  w.raw(message);
  const auto& key = pair_key(sender, receiver);
  if (backend_ == CryptoBackend::kSim) return sha256_parts(key, w.bytes());
  return hmac_sha256(key, w.bytes());
}

bool KeyRegistry::verify_mac(ReplicaId sender, ReplicaId receiver, ByteView message, const Mac& tag) const {
  if (!mac_keys_.contains(pair_of(sender, receiver))) return false;
  Mac expect = mac(sender, receiver, message);
  return CRYPTO_memcmp(expect.data(), tag.data(), tag.size()) == 0;
}

}  // namespace brbpay

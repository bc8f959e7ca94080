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


#include <gtest/gtest.h>

#include "brbpay/crypto/crypto.hpp"
#include "local_net.hpp"

namespace brbpay {
namespace {

class Backends : public ::testing::TestWithParam<CryptoBackend> {};

TEST_P(Backends, SignVerify) {
  KeyRegistry keys(GetParam(), testing::replicas(4), testing::clients(2), 7);
  const Bytes msg{1, 2, 3, 4};
  const Signature s = keys.sign(Principal::of(ReplicaId{2}), msg);
  EXPECT_TRUE(keys.verify(Principal::of(ReplicaId{2}), msg, s));
  EXPECT_LE(s.size, kMaxSignatureSize);
}

TEST_P(Backends, WrongSignerOrMessageFails) {
  KeyRegistry keys(GetParam(), testing::replicas(4), testing::clients(2), 7);
  const Bytes msg{9, 9, 9};
  const Signature s = keys.sign(Principal::of(ClientId{1}), msg);
  EXPECT_FALSE(keys.verify(Principal::of(ClientId{0}), msg, s));
  EXPECT_FALSE(keys.verify(Principal::of(ReplicaId{1}), msg, s));
  EXPECT_FALSE(keys.verify(Principal::of(ClientId{1}), Bytes{9, 9}, s));
  Signature bent = s;
  bent.bytes[0] ^= 0x40;
  EXPECT_FALSE(keys.verify(Principal::of(ClientId{1}), msg, bent));
}

TEST_P(Backends, UnknownPrincipals) {
  KeyRegistry keys(GetParam(), testing::replicas(4), testing::clients(2), 7);
  EXPECT_THROW(keys.sign(Principal::of(ReplicaId{17}), Bytes{1}), UnknownKeyError);
  const Signature s = keys.sign(Principal::of(ReplicaId{0}), Bytes{1});
  Signature relabeled = s;
  relabeled.signer = Principal::of(ReplicaId{17});
  EXPECT_FALSE(keys.verify(Principal::of(ReplicaId{17}), Bytes{1}, relabeled));
  EXPECT_FALSE(keys.has(Principal::of(ClientId{5})));
  EXPECT_TRUE(keys.has(Principal::of(ClientId{1})));
}

TEST_P(Backends, MacKeysAreSymmetric) {
  KeyRegistry keys(GetParam(), testing::replicas(5), {}, 3);
  for (std::uint32_t a = 0; a < 5; ++a) {
    for (std::uint32_t b = 0; b < 5; ++b) {
      EXPECT_EQ(keys.pair_key(ReplicaId{a}, ReplicaId{b}), keys.pair_key(ReplicaId{b}, ReplicaId{a}));
    }
  }
  EXPECT_NE(keys.pair_key(ReplicaId{0}, ReplicaId{1}), keys.pair_key(ReplicaId{0}, ReplicaId{2}));
  const Bytes msg{5, 6};
  const Mac tag = keys.mac(ReplicaId{0}, ReplicaId{3}, msg);
  EXPECT_TRUE(keys.verify_mac(ReplicaId{0}, ReplicaId{3}, msg, tag));
  EXPECT_FALSE(keys.verify_mac(ReplicaId{1}, ReplicaId{3}, msg, tag));
  EXPECT_FALSE(keys.verify_mac(ReplicaId{0}, ReplicaId{3}, Bytes{5, 7}, tag));
  EXPECT_THROW(keys.mac(ReplicaId{0}, ReplicaId{9}, msg), UnknownKeyError);
}

INSTANTIATE_TEST_SUITE_P(Crypto, Backends, ::testing::Values(CryptoBackend::kSim, CryptoBackend::kEcdsaP256),
                         [](const auto& info) { return info.param == CryptoBackend::kSim ? "Sim" : "Ecdsa"; });

TEST(Crypto, SimKeysDependOnSeed) {
  KeyRegistry a(CryptoBackend::kSim, testing::replicas(2), {}, 1);
  KeyRegistry b(CryptoBackend::kSim, testing::replicas(2), {}, 2);
  const Signature s = a.sign(Principal::of(ReplicaId{0}), Bytes{1});
  EXPECT_FALSE(b.verify(Principal::of(ReplicaId{0}), Bytes{1}, s));
  EXPECT_EQ(a.sign(Principal::of(ReplicaId{0}), Bytes{1}), s);
}

TEST(Crypto, DigestMatchesKnownVector) {
  EXPECT_EQ(to_hex(digest(as_bytes("abc"))), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  DigestBuilder b;
  b.update(as_bytes("a"));
  b.update(as_bytes("bc"));
  EXPECT_EQ(b.finish(), digest(as_bytes("abc")));
}

}  // namespace
}  // namespace brbpay

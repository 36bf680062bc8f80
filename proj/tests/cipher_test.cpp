/*
 * Copyright 2026 The seccmp Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "seccmp/cipher.hpp"

#include <gtest/gtest.h>

#include <cstdint>

#include "seccmp/keygen.hpp"

namespace seccmp {
namespace {

class ToyCipherTest : public ::testing::Test {
 protected:
  ToyCipherTest() : keys_(toy_key()), table_(build_table(keys_.pk, keys_.sk)) {}

  Ciphertext Enc(Residue m) { return encrypt(keys_.pk, m, rng_); }
  Residue Dec(const Ciphertext& c) { return decrypt(keys_.sk, table_, c); }

  KeyPair keys_;
  DecryptionTable table_;
  Rng rng_{1234};
};

TEST_F(ToyCipherTest, ZeroCheckOnFreshZero) {
  for (int i = 0; i < 20; ++i) EXPECT_TRUE(is_zero(keys_.sk, Enc(0)));
}

TEST_F(ToyCipherTest, ZeroRandomizerGivesPlainPower) {
  for (Residue m = 0; m < 11; ++m) {
    EXPECT_EQ(encrypt_with(keys_.pk, m, 0).value,
              mod_pow(keys_.pk.g, BigUint(m), keys_.pk.n));
  }
}

TEST_F(ToyCipherTest, RoundTripExhaustive) {
  for (Residue m = 0; m < 11; ++m) {
    for (int rep = 0; rep < 10; ++rep) {
      const Ciphertext c = Enc(m);
      EXPECT_TRUE(is_well_formed(keys_.pk, c));
      EXPECT_EQ(Dec(c), m);
      EXPECT_EQ(is_zero(keys_.sk, c), m == 0);
    }
  }
  EXPECT_EQ(Dec(Enc(3)), 3u);
}

TEST_F(ToyCipherTest, RejectsPlaintextOutsideZu) {
  EXPECT_THROW(Enc(11), DomainError);
  EXPECT_THROW(encrypt_with(keys_.pk, 12, 0), DomainError);
}

TEST_F(ToyCipherTest, AddExamples) {
  EXPECT_EQ(Dec(homomorphic_add(keys_.pk, Enc(2), Enc(5))), 7u);
  EXPECT_EQ(Dec(homomorphic_add(keys_.pk, Enc(6), Enc(7))), 2u);
  EXPECT_TRUE(is_zero(keys_.sk, homomorphic_add(keys_.pk, Enc(3), Enc(8))));
  const Ciphertext c = Enc(4);
  EXPECT_EQ(homomorphic_add(keys_.pk, c, encrypt_with(keys_.pk, 0, 0)), c);
}

TEST_F(ToyCipherTest, ScaleExamples) {
  for (Residue m = 0; m < 11; ++m) {
    EXPECT_EQ(Dec(homomorphic_scale(keys_.pk, Enc(m), 1)), m);
    EXPECT_TRUE(is_zero(keys_.sk, homomorphic_scale(keys_.pk, Enc(m), 11)));
  }
  EXPECT_EQ(Dec(homomorphic_scale(keys_.pk, Enc(3), 4)), 1u);
}

TEST_F(ToyCipherTest, ShiftByGenerator) {
  for (Residue m = 0; m < 11; ++m) {
    for (Residue k = 0; k < 11; ++k) {
      EXPECT_EQ(Dec(add_plain(keys_.pk, Enc(m), k)), (m + k) % 11);
    }
  }
}

TEST_F(ToyCipherTest, BlindingPreservesZeroStatusExhaustively) {
  for (Residue m = 0; m < 11; ++m) {
    for (Residue s = 1; s < 11; ++s) {
      const Ciphertext g =
          blind(keys_.pk, Enc(m), s, rng_.RandomBits(2 * keys_.pk.params.t));
      EXPECT_EQ(is_zero(keys_.sk, g), m == 0);
      EXPECT_EQ(Dec(g), m * s % 11);
    }
  }
  EXPECT_EQ(Dec(blind(keys_.pk, Enc(2), 5, 17)), 10u);
  EXPECT_THROW(blind(keys_.pk, Enc(2), 0, 1), DomainError);
  EXPECT_THROW(blind(keys_.pk, Enc(2), 11, 1), DomainError);
}

TEST_F(ToyCipherTest, TableContents) {
  EXPECT_EQ(table_.size(), 11u);
  EXPECT_EQ(table_.Lookup(1), std::optional<Residue>(0));
  const BigUint g5v = mod_pow(keys_.pk.g, 5 * keys_.sk.v, keys_.pk.n);
  EXPECT_EQ(table_.Lookup(g5v), std::optional<Residue>(5));
  EXPECT_FALSE(table_.Lookup(2).has_value());
}

TEST_F(ToyCipherTest, BabyStepGiantStepMatchesTable) {
  const auto bsgs = DecryptionTable::Build(
      keys_.pk, keys_.sk, DecryptionTable::Backend::kBabyStepGiantStep);
  EXPECT_LT(bsgs.size(), 11u);
  for (Residue m = 0; m < 11; ++m) {
    EXPECT_EQ(decrypt(keys_.sk, bsgs, Enc(m)), m);
  }
}

TEST_F(ToyCipherTest, MalformedCiphertextIsRejected) {
  // 67 shares a factor with n, so c^v cannot land in the subgroup.
  EXPECT_THROW(Dec(Ciphertext{67}), IntegrityError);
  EXPECT_FALSE(is_well_formed(keys_.pk, Ciphertext{67}));
  EXPECT_FALSE(is_well_formed(keys_.pk, Ciphertext{0}));
  EXPECT_FALSE(is_well_formed(keys_.pk, Ciphertext{keys_.pk.n}));
}

TEST_F(ToyCipherTest, CountersTrackOperations) {
  OpCounters c;
  const Ciphertext x = encrypt(keys_.pk, 3, rng_, &c);
  is_zero(keys_.sk, x, &c);
  decrypt(keys_.sk, table_, x, &c);
  EXPECT_EQ(c.encryptions, 1u);
  EXPECT_EQ(c.zero_checks, 1u);
  EXPECT_EQ(c.full_decryptions, 1u);
  EXPECT_EQ(c.modexps, 2u + 2u + 2u);
}

TEST(TableCapTest, RefusesHugePlaintextSpace) {
  KeyPair fake = toy_key();
  fake.pk.u = (BigUint(1) << 25) + 35;  // only the size matters here
  EXPECT_THROW(build_table(fake.pk, fake.sk), ConfigurationError);
}

TEST(DefaultKeyCipherTest, HomomorphicProperties) {
  Rng rng(77);
  const KeyPair keys = generate_keys(Params{}, rng);
  const DecryptionTable table = build_table(keys.pk, keys.sk);
  const Residue u = plaintext_modulus(keys.pk);
  for (int i = 0; i < 500; ++i) {
    const Residue a = rng.UniformBelow(u);
    const Residue b = rng.UniformBelow(u);
    const Residue s = rng.UniformBelow(u);
    const Ciphertext ca = encrypt(keys.pk, a, rng);
    ASSERT_EQ(decrypt(keys.sk, table, ca), a);
    ASSERT_EQ(decrypt(keys.sk, table,
                      homomorphic_add(keys.pk, ca, encrypt(keys.pk, b, rng))),
              (a + b) % u);
    ASSERT_EQ(decrypt(keys.sk, table, homomorphic_scale(keys.pk, ca, s)),
              a * s % u);
  }
}

}  // namespace
}  // namespace seccmp

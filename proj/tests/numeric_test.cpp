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

#include "seccmp/numeric.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

namespace seccmp {
namespace {

bool TrialDivisionPrime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

TEST(ModPowTest, Examples) {
  EXPECT_EQ(mod_pow(2, 10, 1000), 24);
  EXPECT_EQ(mod_pow(3, 5, 7), 5);  // 243 = 34*7 + 5
  EXPECT_EQ(mod_pow(12345, 0, 22177), 1);
}

TEST(ModPowTest, RejectsSmallModulus) {
  EXPECT_THROW(mod_pow(2, 3, 1), ParameterError);
  EXPECT_THROW(mod_pow(2, 3, 0), ParameterError);
}

TEST(ModPowTest, CountsModexps) {
  OpCounters c;
  mod_pow(2, 3, 5, &c);
  mod_pow(2, 3, 5, &c);
  EXPECT_EQ(c.modexps, 2u);
}

TEST(ModPowTest, ExponentsAddProperty) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    BigUint m = rng.RandomBits(256);
    mpz_setbit(m.get_mpz_t(), 0);
    if (m < 3) m = 3;
    const BigUint g = rng.UniformBelow(m);
    const BigUint a = rng.RandomBits(128);
    const BigUint b = rng.RandomBits(128);
    EXPECT_EQ(mod_pow(g, a, m) * mod_pow(g, b, m) % m, mod_pow(g, a + b, m));
  }
}

TEST(PrimalityTest, Examples) {
  EXPECT_TRUE(is_probable_prime(331));
  EXPECT_FALSE(is_probable_prime(22177));  // 67 * 331
  EXPECT_TRUE(is_probable_prime(2));
  EXPECT_FALSE(is_probable_prime(1));
  EXPECT_FALSE(is_probable_prime(0));
  EXPECT_THROW(is_probable_prime(7, 0), ParameterError);
}

TEST(PrimalityTest, AgreesWithTrialDivisionBelow100000) {
  for (std::uint64_t n = 0; n < 100000; ++n) {
    ASSERT_EQ(is_probable_prime(BigUint(n)), TrialDivisionPrime(n)) << n;
  }
}

TEST(PrimalityTest, RejectsCarmichaelNumbersAndLargeSemiprimes) {
  for (std::uint64_t n : {561u, 1105u, 1729u, 2465u, 2821u, 6601u, 8911u}) {
    EXPECT_FALSE(is_probable_prime(BigUint(n))) << n;
  }
  // Product of two 64-bit primes; trial division by small primes cannot see it.
  const BigUint p("18446744073709551557");
  const BigUint q("18446744073709551533");
  EXPECT_TRUE(is_probable_prime(p));
  EXPECT_TRUE(is_probable_prime(q));
  EXPECT_FALSE(is_probable_prime(p * q));
}

TEST(RandomPrimeTest, TwoBits) {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const BigUint p = random_prime(2, rng);
    EXPECT_TRUE(p == 2 || p == 3);
  }
  EXPECT_THROW(random_prime(1, rng), ParameterError);
}

TEST(RandomPrimeTest, DeterministicAndTopBitSet) {
  Rng a(99), b(99);
  EXPECT_EQ(random_prime(8, a), random_prime(8, b));
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const BigUint u = random_prime(17, rng);
    EXPECT_GE(u, BigUint(1) << 16);
    EXPECT_EQ(bit_length(u), 17u);
    EXPECT_TRUE(TrialDivisionPrime(mpz_get_ui(u.get_mpz_t())));
  }
}

TEST(CrtTest, Examples) {
  EXPECT_EQ(crt_combine(1, 1, 67, 331), 1);
  EXPECT_EQ(crt_combine(0, 1, 3, 5), 6);
  EXPECT_EQ(crt_combine(2, 3, 3, 5), 8);
  EXPECT_THROW(crt_combine(1, 1, 6, 9), ParameterError);
}

TEST(CrtTest, EnumerationOracle) {
  for (std::uint64_t p : {3u, 5u, 7u, 8u}) {
    for (std::uint64_t q : {9u, 11u, 13u}) {
      if (std::gcd(p, q) != 1) continue;
      for (std::uint64_t ap = 0; ap < p; ++ap) {
        for (std::uint64_t aq = 0; aq < q; ++aq) {
          std::uint64_t want = 0;
          while (!(want % p == ap && want % q == aq)) ++want;
          EXPECT_EQ(crt_combine(ap, aq, p, q), BigUint(want));
        }
      }
    }
  }
}

TEST(CrtTest, ResiduesProperty) {
  Rng rng(17);
  int done = 0;
  while (done < 200) {
    const BigUint p = rng.RandomBits(96) + 2;
    const BigUint q = rng.RandomBits(80) + 2;
    if (gcd(p, q) != 1) continue;
    const BigUint ap = rng.UniformBelow(p);
    const BigUint aq = rng.UniformBelow(q);
    const BigUint x = crt_combine(ap, aq, p, q);
    EXPECT_LT(x, p * q);
    EXPECT_EQ(x % p, ap);
    EXPECT_EQ(x % q, aq);
    ++done;
  }
}

TEST(RngTest, EqualSeedsEqualStreams) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.NextU64(), b.NextU64());
}

TEST(RngTest, DifferentSeedsDiffer) {
  Rng a(1), b(2);
  bool differs = false;
  for (int i = 0; i < 16; ++i) differs |= a.NextU64() != b.NextU64();
  EXPECT_TRUE(differs);
}

TEST(RngTest, UniformBelowStaysInRange) {
  Rng rng(8);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t v = rng.UniformBelow(std::uint64_t{11});
    ASSERT_LT(v, 11u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 11u);
  const BigUint bound("1000000000000000000000007");
  for (int i = 0; i < 200; ++i) EXPECT_LT(rng.UniformBelow(bound), bound);
  EXPECT_THROW(rng.UniformBelow(std::uint64_t{0}), ParameterError);
}

TEST(RngTest, DeriveSeedSeparatesLabels) {
  EXPECT_EQ(derive_seed(5, "x"), derive_seed(5, "x"));
  EXPECT_NE(derive_seed(5, "x"), derive_seed(5, "y"));
  EXPECT_NE(derive_seed(5, "x"), derive_seed(6, "x"));
}

TEST(BytesTest, MinimalBigEndian) {
  EXPECT_TRUE(to_bytes(0).empty());
  EXPECT_EQ(to_bytes(0x0102), (std::vector<std::uint8_t>{0x01, 0x02}));
  const std::vector<std::uint8_t> b{0x5a, 0x00, 0xff};
  EXPECT_EQ(to_bytes(from_bytes(b)), b);
}

}  // namespace
}  // namespace seccmp

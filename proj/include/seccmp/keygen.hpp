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

#ifndef SECCMP_KEYGEN_HPP_
#define SECCMP_KEYGEN_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seccmp/errors.hpp"
#include "seccmp/numeric.hpp"

namespace seccmp {

// k: bits of n; t: minimum bits of v; l: bit-length of compared integers.
struct Params {
  std::size_t k = 1024;
  std::size_t t = 160;
  std::size_t l = 16;

  friend bool operator==(const Params&, const Params&) = default;
};

// Residues are held in 64-bit words, so u (l + 2 bits) must stay below 2^63.
inline constexpr std::size_t kMaxBitLength = 60;
// Anything smaller is only generated when tiny keys are explicitly allowed.
inline constexpr std::size_t kMinSecureModulusBits = 256;
inline constexpr std::size_t kMaxModulusBits = 4096;

struct PublicKey {
  Params params;
  BigUint n;
  BigUint g;  // order u*v in Z_n^*
  BigUint h;  // order v in Z_n^*
  BigUint u;  // plaintext modulus, prime

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct SecretKey {
  BigUint p;
  BigUint q;
  BigUint v_p;
  BigUint v_q;
  BigUint v;  // v_p * v_q

  friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

struct KeyPair {
  PublicKey pk;
  SecretKey sk;
};

struct KeygenOptions {
  // Permits k < 256, skips the cofactor-room precondition and lets the
  // cofactor f be composite. Exhaustive desk tests only.
  bool allow_tiny = false;
};

inline void check_params(const Params& params, const KeygenOptions& options) {
  if (params.l < 1) throw ConfigurationError("l must be >= 1");
  if (params.l > kMaxBitLength) {
    throw ConfigurationError("l must be <= " + std::to_string(kMaxBitLength));
  }
  if (!(params.k > params.t && params.t > params.l)) {
    throw ConfigurationError("parameters must satisfy k > t > l (got k=" +
                             std::to_string(params.k) + ", t=" +
                             std::to_string(params.t) + ", l=" +
                             std::to_string(params.l) + ")");
  }
  if (params.k % 2 != 0) throw ConfigurationError("k must be even");
  if (params.k > kMaxModulusBits) {
    throw ConfigurationError("k must be <= " + std::to_string(kMaxModulusBits));
  }
  if (params.k < kMinSecureModulusBits && !options.allow_tiny) {
    throw ConfigurationError("k < " + std::to_string(kMinSecureModulusBits) +
                             " requires tiny-key test mode");
  }
  const std::size_t half_t = (params.t + 1) / 2;
  if (!options.allow_tiny && !(params.k / 2 > (params.l + 2) + half_t + 2)) {
    throw ConfigurationError(
        "parameter space too tight: k/2 must exceed (l+2) + ceil(t/2) + 2");
  }
}

namespace detail {

// A prime p = base * f + 1 with exactly `bits` bits, or nullopt when no
// cofactor range exists or nothing was found within the attempt budget.
inline std::optional<BigUint> StructuredPrime(const BigUint& base,
                                              std::size_t bits, Rng& rng,
                                              bool allow_composite_cofactor) {
  BigUint lo = (pow2(bits - 1) - 1 + base - 1) / base;
  BigUint hi = (pow2(bits) - 2) / base;
  const BigUint min_f = allow_composite_cofactor ? 1 : 2;
  if (lo < min_f) lo = min_f;
  if (lo > hi) return std::nullopt;

  auto accept = [&](const BigUint& f) -> std::optional<BigUint> {
    BigUint p = base * f + 1;
    if (detail::SmallPrimeScreen(p) == 0) return std::nullopt;
    if (!allow_composite_cofactor) {
      if (detail::SmallPrimeScreen(f) == 0) return std::nullopt;
      if (!is_probable_prime(f, 1, &rng)) return std::nullopt;
    }
    if (!is_probable_prime(p, 1, &rng)) return std::nullopt;
    if (!allow_composite_cofactor &&
        !is_probable_prime(f, kPrimalityRounds, &rng)) {
      return std::nullopt;
    }
    if (!is_probable_prime(p, kPrimalityRounds, &rng)) return std::nullopt;
    return p;
  };

  const BigUint span = hi - lo + 1;
  if (span <= 65536) {
    std::vector<BigUint> all;
    for (BigUint f = lo; f <= hi; ++f) all.push_back(f);
    for (std::size_t i = all.size(); i > 1; --i) {
      std::swap(all[i - 1], all[rng.UniformBelow(std::uint64_t{i})]);
    }
    for (const auto& f : all) {
      if (auto p = accept(f)) return p;
    }
    return std::nullopt;
  }
  for (int attempt = 0; attempt < 4'000'000; ++attempt) {
    if (auto p = accept(rng.UniformInRange(lo, hi))) return p;
  }
  return std::nullopt;
}

// An element of Z_P^* whose order is exactly the product of the given
// distinct primes, all of which divide P - 1.
inline BigUint ElementOfOrder(const BigUint& prime,
                              const std::vector<BigUint>& factors, Rng& rng) {
  BigUint target = 1;
  for (const auto& f : factors) target *= f;
  const BigUint cofactor = (prime - 1) / target;
  for (;;) {
    const BigUint x = rng.UniformInRange(1, prime - 1);
    const BigUint y = mod_pow(x, cofactor, prime);
    bool exact = true;
    for (const auto& f : factors) {
      if (mod_pow(y, target / f, prime) == 1) {
        exact = false;
        break;
      }
    }
    if (exact) return y;
  }
}

// True iff x has multiplicative order exactly `order` mod m, given the
// distinct prime factors of `order`.
inline bool HasExactOrder(const BigUint& x, const BigUint& order,
                          const std::vector<BigUint>& prime_factors,
                          const BigUint& m) {
  if (m < 2 || sgn(order) <= 0) return false;
  if (mod_pow(x, order, m) != 1) return false;
  for (const auto& w : prime_factors) {
    if (w < 2 || order % w != 0) return false;
    if (mod_pow(x, order / w, m) == 1) return false;
  }
  return true;
}

}  // namespace detail

// p = 2*u*v_p*f_p + 1 and q = 2*u*v_q*f_q + 1 with exactly k/2 bits each;
// g has order u*v and h has order v, both assembled by CRT from per-prime
// elements of the right order.
inline KeyPair generate_keys(const Params& params, Rng& rng,
                             const KeygenOptions& options = {}) {
  check_params(params, options);
  const std::size_t half = params.k / 2;
  const std::size_t v_factor_bits = (params.t + 1) / 2 + 1;

  for (int attempt = 0; attempt < 64; ++attempt) {
    const BigUint u = random_prime(params.l + 2, rng);
    BigUint v_p = random_prime(v_factor_bits, rng);
    BigUint v_q = random_prime(v_factor_bits, rng);
    if (v_p == u || v_q == u || v_p == v_q) continue;

    auto p = detail::StructuredPrime(2 * u * v_p, half, rng, options.allow_tiny);
    if (!p) continue;
    auto q = detail::StructuredPrime(2 * u * v_q, half, rng, options.allow_tiny);
    if (!q || *p == *q) continue;

    const BigUint g_p = detail::ElementOfOrder(*p, {u, v_p}, rng);
    const BigUint g_q = detail::ElementOfOrder(*q, {u, v_q}, rng);
    const BigUint h_p = detail::ElementOfOrder(*p, {v_p}, rng);
    const BigUint h_q = detail::ElementOfOrder(*q, {v_q}, rng);

    KeyPair keys;
    keys.pk.params = params;
    keys.pk.n = *p * *q;
    keys.pk.u = u;
    keys.pk.g = crt_combine(g_p, g_q, *p, *q);
    keys.pk.h = crt_combine(h_p, h_q, *p, *q);
    keys.sk.p = *p;
    keys.sk.q = *q;
    keys.sk.v_p = v_p;
    keys.sk.v_q = v_q;
    keys.sk.v = v_p * v_q;
    return keys;
  }
  throw ConfigurationError(
      "parameter space too tight: no prime p = 2*u*v_p*f + 1 of k/2 bits found");
}

struct CheckResult {
  std::string name;
  bool passed = false;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

inline ValidationReport validate_keys(const PublicKey& pk, const SecretKey& sk) {
  ValidationReport report;
  auto add = [&](std::string name, bool ok) {
    report.checks.push_back({std::move(name), ok});
  };
  const auto& params = pk.params;
  auto divides = [](const BigUint& d, const BigUint& x) {
    return sgn(d) > 0 && x % d == 0;
  };

  add("params k > t > l", params.k > params.t && params.t > params.l &&
                              params.l >= 1);
  add("p prime", is_probable_prime(sk.p));
  add("q prime", is_probable_prime(sk.q));
  add("p != q", sk.p != sk.q);
  add("u prime", is_probable_prime(pk.u));
  add("v_p prime", is_probable_prime(sk.v_p));
  add("v_q prime", is_probable_prime(sk.v_q));
  add("u, v_p, v_q pairwise distinct",
      pk.u != sk.v_p && pk.u != sk.v_q && sk.v_p != sk.v_q);
  add("n = p*q", pk.n == sk.p * sk.q);
  add("v = v_p*v_q", sk.v == sk.v_p * sk.v_q);
  add("v_p | p-1", divides(sk.v_p, sk.p - 1));
  add("v_q | q-1", divides(sk.v_q, sk.q - 1));
  add("u | p-1", divides(pk.u, sk.p - 1));
  add("u | q-1", divides(pk.u, sk.q - 1));
  add("u has l+2 bits", bit_length(pk.u) == params.l + 2);
  add("v has at least t bits", bit_length(sk.v) >= params.t);
  const std::size_t n_bits = bit_length(pk.n);
  add("n has k-1 or k bits", n_bits == params.k || n_bits + 1 == params.k);
  add("g, h in Z_n^*", pk.n > 1 && sgn(pk.g) > 0 && sgn(pk.h) > 0 &&
                           pk.g < pk.n && pk.h < pk.n &&
                           gcd(pk.g, pk.n) == 1 && gcd(pk.h, pk.n) == 1);
  add("order of h is v",
      detail::HasExactOrder(pk.h, sk.v, {sk.v_p, sk.v_q}, pk.n));
  add("order of g is u*v",
      detail::HasExactOrder(pk.g, pk.u * sk.v, {pk.u, sk.v_p, sk.v_q}, pk.n));
  return report;
}

// The hand-sized key u=11, v_p=3, v_q=5, p=67, q=331 (n=22177), with g and
// h the smallest elements of order 165 and 15. Insecure; tests only.
inline KeyPair toy_key() {
  KeyPair keys;
  keys.pk.params = Params{16, 3, 2};
  keys.sk.p = 67;
  keys.sk.q = 331;
  keys.sk.v_p = 3;
  keys.sk.v_q = 5;
  keys.sk.v = 15;
  keys.pk.u = 11;
  keys.pk.n = 22177;
  auto smallest_of_order = [&](const BigUint& order,
                               const std::vector<BigUint>& factors) {
    for (BigUint x = 2; x < keys.pk.n; ++x) {
      if (gcd(x, keys.pk.n) == 1 &&
          detail::HasExactOrder(x, order, factors, keys.pk.n)) {
        return x;
      }
    }
    throw Error("toy key: no element of the requested order");
  };
  keys.pk.g = smallest_of_order(165, {3, 5, 11});
  keys.pk.h = smallest_of_order(15, {3, 5});
  return keys;
}

}  // namespace seccmp

#endif  // SECCMP_KEYGEN_HPP_

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

#ifndef SECCMP_NUMERIC_HPP_
#define SECCMP_NUMERIC_HPP_

#include <gmpxx.h>
#include <sodium.h>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seccmp/counters.hpp"
#include "seccmp/errors.hpp"

namespace seccmp {

// Arbitrary-precision non-negative integer. GMP keeps the representation
// canonical, so equality is value equality.
using BigUint = mpz_class;

inline std::size_t bit_length(const BigUint& x) {
  return sgn(x) == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline BigUint pow2(std::size_t e) {
  BigUint r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

inline BigUint from_decimal(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) {
        return c >= '0' && c <= '9';
      })) {
    throw ParameterError("not a non-negative decimal integer: '" + s + "'");
  }
  return BigUint(s, 10);
}

inline std::string to_decimal(const BigUint& x) { return x.get_str(10); }

// Minimal-length big-endian magnitude; zero encodes as the empty string.
inline std::vector<std::uint8_t> to_bytes(const BigUint& x) {
  std::vector<std::uint8_t> out((bit_length(x) + 7) / 8);
  if (!out.empty()) {
    std::size_t written = 0;
    mpz_export(out.data(), &written, 1, 1, 1, 0, x.get_mpz_t());
    out.resize(written);
  }
  return out;
}

inline BigUint from_bytes(std::span<const std::uint8_t> bytes) {
  BigUint x;
  if (!bytes.empty()) {
    mpz_import(x.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return x;
}

// base^exp mod modulus. Counts one modexp against `counters` when given.
inline BigUint mod_pow(const BigUint& base, const BigUint& exp,
                       const BigUint& modulus, OpCounters* counters = nullptr) {
  if (modulus < 2) throw ParameterError("mod_pow: modulus must be >= 2");
  if (sgn(exp) < 0) throw ParameterError("mod_pow: negative exponent");
  BigUint r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           modulus.get_mpz_t());
  if (counters != nullptr) ++counters->modexps;
  return r;
}

// Seeded ChaCha20 keystream. Equal seeds give equal streams; instances are
// single-owner and therefore move-only.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    EnsureSodium();
    std::array<std::uint8_t, 8> seed_bytes{};
    for (int i = 0; i < 8; ++i) {
      seed_bytes[i] = static_cast<std::uint8_t>(seed >> (8 * i));
    }
    crypto_generichash(key_.data(), key_.size(), seed_bytes.data(),
                       seed_bytes.size(), nullptr, 0);
  }

  // Seeds from OS entropy; the chosen seed is still reported by seed().
  static Rng FromEntropy() {
    EnsureSodium();
    std::uint64_t seed = 0;
    randombytes_buf(&seed, sizeof(seed));
    return Rng(seed);
  }

  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;
  Rng(Rng&&) noexcept = default;
  Rng& operator=(Rng&&) noexcept = default;

  std::uint64_t seed() const { return seed_; }

  void Fill(std::span<std::uint8_t> out) {
    for (auto& b : out) {
      if (pos_ == buffer_.size()) Refill();
      b = buffer_[pos_++];
    }
  }

  std::uint64_t NextU64() {
    std::array<std::uint8_t, 8> b{};
    Fill(b);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
    return v;
  }

  // Uniform in [0, bound) by rejection on the smallest enclosing power of 2.
  std::uint64_t UniformBelow(std::uint64_t bound) {
    if (bound == 0) throw ParameterError("uniform_below: bound must be > 0");
    if (bound == 1) return 0;
    const int bits = 64 - __builtin_clzll(bound - 1);
    const std::uint64_t mask =
        bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    for (;;) {
      const std::uint64_t v = NextU64() & mask;
      if (v < bound) return v;
    }
  }

  // Uniform in [0, 2^bits).
  BigUint RandomBits(std::size_t bits) {
    if (bits == 0) return 0;
    std::vector<std::uint8_t> bytes((bits + 7) / 8);
    Fill(bytes);
    const std::size_t excess = bytes.size() * 8 - bits;
    bytes[0] &= static_cast<std::uint8_t>(0xFF >> excess);
    return from_bytes(bytes);
  }

  BigUint UniformBelow(const BigUint& bound) {
    if (sgn(bound) <= 0) {
      throw ParameterError("uniform_below: bound must be > 0");
    }
    const std::size_t bits = bit_length(bound - 1);
    for (;;) {
      BigUint v = RandomBits(bits);
      if (v < bound) return v;
    }
  }

  // Uniform in [lo, hi].
  BigUint UniformInRange(const BigUint& lo, const BigUint& hi) {
    if (hi < lo) throw ParameterError("uniform_in_range: empty range");
    return lo + UniformBelow(BigUint(hi - lo + 1));
  }

 private:
  static void EnsureSodium() {
    static const int init = sodium_init();
    if (init < 0) throw Error("libsodium initialisation failed");
  }

  void Refill() {
    static constexpr std::array<std::uint8_t, crypto_stream_chacha20_NONCEBYTES>
        kNonce{};
    std::fill(buffer_.begin(), buffer_.end(), 0);
    crypto_stream_chacha20_xor_ic(buffer_.data(), buffer_.data(),
                                  buffer_.size(), kNonce.data(), block_,
                                  key_.data());
    block_ += buffer_.size() / 64;
    pos_ = 0;
  }

  std::uint64_t seed_;
  std::array<std::uint8_t, crypto_stream_chacha20_KEYBYTES> key_{};
  std::array<std::uint8_t, 512> buffer_{};
  std::size_t pos_ = 512;
  std::uint64_t block_ = 0;
};

// Independent 64-bit sub-seed for a labelled stream (dealer, party A, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  std::array<std::uint8_t, 8> out{};
  std::array<std::uint8_t, 8> key{};
  for (int i = 0; i < 8; ++i) key[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  crypto_generichash(out.data(), out.size(),
                     reinterpret_cast<const unsigned char*>(label.data()),
                     label.size(), key.data(), key.size());
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{out[i]} << (8 * i);
  return v;
}

namespace detail {

inline const std::vector<std::uint32_t>& SmallPrimes() {
  static const std::vector<std::uint32_t> primes = [] {
    constexpr std::uint32_t kLimit = 2000;
    std::vector<bool> composite(kLimit, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < kLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint32_t j = i * i; j < kLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

// 0 = definitely composite, 1 = definitely prime, 2 = no small factor found.
inline int SmallPrimeScreen(const BigUint& n) {
  for (std::uint32_t p : SmallPrimes()) {
    if (n == p) return 1;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) return 0;
  }
  const BigUint limit = SmallPrimes().back();
  return n <= limit * limit ? 1 : 2;
}

// One Miller-Rabin round per witness; n odd and > 3.
inline bool MillerRabinRounds(const BigUint& n, std::size_t rounds, Rng& rng) {
  const BigUint n_minus_1 = n - 1;
  BigUint d = n_minus_1;
  std::size_t s = 0;
  while (mpz_even_p(d.get_mpz_t()) != 0) {
    d >>= 1;
    ++s;
  }
  const BigUint lo = 2;
  const BigUint hi = n - 2;
  for (std::size_t round = 0; round < rounds; ++round) {
    BigUint x = mod_pow(rng.UniformInRange(lo, hi), d, n);
    if (x == 1 || x == n_minus_1) continue;
    bool witness = true;
    for (std::size_t i = 1; i < s; ++i) {
      x = x * x % n;
      if (x == n_minus_1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace detail

inline constexpr std::size_t kPrimalityRounds = 40;

// Miller-Rabin with `rounds` random witnesses after small-prime trial
// division. Witnesses come from `rng` when given, otherwise from a stream
// seeded by n itself so the answer is reproducible.
inline bool is_probable_prime(const BigUint& n,
                              std::size_t rounds = kPrimalityRounds,
                              Rng* rng = nullptr) {
  if (rounds < 1) throw ParameterError("is_probable_prime: rounds must be >= 1");
  if (n < 2) return false;
  const int screen = detail::SmallPrimeScreen(n);
  if (screen != 2) return screen == 1;
  if (rng != nullptr) return detail::MillerRabinRounds(n, rounds, *rng);
  Rng local(mpz_get_ui(n.get_mpz_t()));
  return detail::MillerRabinRounds(n, rounds, local);
}

// Probable prime with exactly `bits` bits.
inline BigUint random_prime(std::size_t bits, Rng& rng) {
  if (bits < 2) throw ParameterError("random_prime: bits must be >= 2");
  if (bits == 2) return rng.UniformBelow(std::uint64_t{2}) == 0 ? 2 : 3;
  const BigUint top = pow2(bits - 1);
  for (;;) {
    BigUint candidate = rng.RandomBits(bits - 1) + top;
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (bit_length(candidate) != bits) continue;
    if (is_probable_prime(candidate, kPrimalityRounds, &rng)) return candidate;
  }
}

inline BigUint gcd(const BigUint& a, const BigUint& b) {
  BigUint r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline BigUint lcm(const BigUint& a, const BigUint& b) {
  BigUint r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// Non-negative residue of a (possibly negative) value.
inline BigUint mod(const BigUint& a, const BigUint& m) {
  BigUint r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline BigUint mod_inverse(const BigUint& a, const BigUint& m) {
  BigUint r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw ParameterError("mod_inverse: value not invertible");
  }
  return r;
}

// The unique x in [0, pq) with x = a_p (mod p) and x = a_q (mod q).
inline BigUint crt_combine(const BigUint& a_p, const BigUint& a_q,
                           const BigUint& p, const BigUint& q) {
  if (p < 1 || q < 1) throw ParameterError("crt_combine: moduli must be >= 1");
  if (gcd(p, q) != 1) throw ParameterError("crt_combine: moduli not coprime");
  const BigUint rp = mod(a_p, p);
  if (q == 1) return rp;
  const BigUint t = mod(BigUint((a_q - rp) * mod_inverse(p % q, q)), q);
  return rp + p * t;
}

}  // namespace seccmp

#endif  // SECCMP_NUMERIC_HPP_

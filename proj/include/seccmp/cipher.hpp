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

#ifndef SECCMP_CIPHER_HPP_
#define SECCMP_CIPHER_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "seccmp/counters.hpp"
#include "seccmp/errors.hpp"
#include "seccmp/keygen.hpp"
#include "seccmp/numeric.hpp"

namespace seccmp {

// Plaintext residues live in Z_u with u < 2^62, so a machine word suffices.
using Residue = std::uint64_t;

// An element of Z_n^*.
struct Ciphertext {
  BigUint value;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

inline Residue plaintext_modulus(const PublicKey& pk) {
  return mpz_get_ui(pk.u.get_mpz_t());
}

inline bool is_well_formed(const PublicKey& pk, const Ciphertext& c) {
  return sgn(c.value) > 0 && c.value < pk.n && gcd(c.value, pk.n) == 1;
}

inline void check_ciphertext(const PublicKey& pk, const Ciphertext& c) {
  if (!is_well_formed(pk, c)) {
    throw IntegrityError("ciphertext is not an element of Z_n^*");
  }
}

// g^m h^r mod n with the randomizer supplied by the caller.
inline Ciphertext encrypt_with(const PublicKey& pk, Residue m, const BigUint& r,
                               OpCounters* counters = nullptr) {
  if (m >= plaintext_modulus(pk)) throw DomainError("plaintext must be < u");
  Ciphertext c{mod_pow(pk.g, BigUint(m), pk.n, counters) *
               mod_pow(pk.h, r, pk.n, counters) % pk.n};
  if (counters != nullptr) ++counters->encryptions;
  return c;
}

// Encryption with r uniform in [0, 2^(2t)).
inline Ciphertext encrypt(const PublicKey& pk, Residue m, Rng& rng,
                          OpCounters* counters = nullptr) {
  if (m >= plaintext_modulus(pk)) throw DomainError("plaintext must be < u");
  return encrypt_with(pk, m, rng.RandomBits(2 * pk.params.t), counters);
}

// E(m1) * E(m2) = E(m1 + m2 mod u).
inline Ciphertext homomorphic_add(const PublicKey& pk, const Ciphertext& c1,
                                  const Ciphertext& c2) {
  return Ciphertext{c1.value * c2.value % pk.n};
}

// E(m)^s = E(m * s mod u).
inline Ciphertext homomorphic_scale(const PublicKey& pk, const Ciphertext& c,
                                    const BigUint& s,
                                    OpCounters* counters = nullptr) {
  if (sgn(s) < 0) throw DomainError("scale factor must be >= 0");
  return Ciphertext{mod_pow(c.value, s, pk.n, counters)};
}

// E(m) * g^k = E(m + k mod u), same randomizer.
inline Ciphertext add_plain(const PublicKey& pk, const Ciphertext& c, Residue k,
                            OpCounters* counters = nullptr) {
  return Ciphertext{c.value * mod_pow(pk.g, BigUint(k), pk.n, counters) % pk.n};
}

// c^s h^s' mod n: plaintext becomes m*s mod u and the randomizer is refreshed.
inline Ciphertext blind(const PublicKey& pk, const Ciphertext& c, Residue s,
                        const BigUint& s_prime, OpCounters* counters = nullptr) {
  if (s == 0 || s >= plaintext_modulus(pk)) {
    throw DomainError("blinding factor must lie in Z_u^*");
  }
  return Ciphertext{mod_pow(c.value, BigUint(s), pk.n, counters) *
                    mod_pow(pk.h, s_prime, pk.n, counters) % pk.n};
}

namespace detail {

// c^e mod n computed through the factors p and q.
inline BigUint PowModViaFactors(const SecretKey& sk, const BigUint& c,
                                const BigUint& e, OpCounters* counters) {
  const BigUint xp = mod_pow(c, e, sk.p, counters);
  const BigUint xq = mod_pow(c, e, sk.q, counters);
  return crt_combine(xp, xq, sk.p, sk.q);
}

}  // namespace detail

// True iff c encrypts 0: c^v = 1 (mod n), checked modulo p and q.
inline bool is_zero(const SecretKey& sk, const Ciphertext& c,
                    OpCounters* counters = nullptr) {
  if (counters != nullptr) ++counters->zero_checks;
  // Both halves are always evaluated so the work does not depend on m.
  const bool zero_p = mod_pow(c.value, sk.v, sk.p, counters) == 1;
  const bool zero_q = mod_pow(c.value, sk.v, sk.q, counters) == 1;
  return zero_p && zero_q;
}

// Recovers m from g^(m v) mod n. The table backend stores every residue of
// the order-u subgroup; the baby-step giant-step backend stores ceil(sqrt(u))
// baby steps and walks giant steps at lookup time.
class DecryptionTable {
 public:
  enum class Backend { kTable, kBabyStepGiantStep };

  // Largest u the full-table backend accepts.
  static constexpr std::uint64_t kMaxTableEntries = std::uint64_t{1} << 24;

  static DecryptionTable Build(const PublicKey& pk, const SecretKey& sk,
                               Backend backend = Backend::kTable) {
    const Residue u = plaintext_modulus(pk);
    if (backend == Backend::kTable && u > kMaxTableEntries) {
      throw ConfigurationError(
          "u exceeds the decryption-table cap of 2^24 entries; use the "
          "baby-step giant-step backend");
    }
    DecryptionTable table;
    table.backend_ = backend;
    table.u_ = u;
    table.n_ = pk.n;
    table.width_ = (bit_length(pk.n) + 7) / 8;
    const BigUint base = detail::PowModViaFactors(sk, pk.g, sk.v, nullptr);
    const std::uint64_t steps =
        backend == Backend::kTable
            ? u
            : static_cast<std::uint64_t>(std::ceil(std::sqrt(double(u))));
    table.steps_ = steps;
    table.values_.resize(steps * table.width_);
    table.index_.reserve(steps);
    BigUint acc = 1;
    for (std::uint64_t m = 0; m < steps; ++m) {
      table.Store(m, acc);
      acc = acc * base % pk.n;
    }
    if (backend == Backend::kBabyStepGiantStep) {
      // acc = base^steps; giant steps multiply by its inverse.
      table.giant_ = mod_inverse(acc, pk.n);
    }
    return table;
  }

  Backend backend() const { return backend_; }
  // Number of stored residues (u for the table backend).
  std::uint64_t size() const { return steps_; }

  // m with g^(m v) = residue (mod n), if any.
  std::optional<Residue> Lookup(const BigUint& residue) const {
    if (backend_ == Backend::kTable) return Find(residue);
    BigUint y = residue;
    for (std::uint64_t i = 0; i <= steps_; ++i) {
      if (auto j = Find(y)) {
        const std::uint64_t m = i * steps_ + *j;
        if (m < u_) return m;
        return std::nullopt;
      }
      y = y * giant_ % n_;
    }
    return std::nullopt;
  }

 private:
  DecryptionTable() = default;

  static std::uint64_t Fingerprint(const BigUint& x) {
    return mpz_get_ui(x.get_mpz_t());
  }

  void Store(std::uint64_t m, const BigUint& x) {
    Export(x, &values_[m * width_]);
    index_.emplace(Fingerprint(x), m);
  }

  void Export(const BigUint& x, std::uint8_t* out) const {
    std::fill(out, out + width_, 0);
    const auto bytes = to_bytes(x);
    std::copy(bytes.begin(), bytes.end(), out + (width_ - bytes.size()));
  }

  std::optional<std::uint64_t> Find(const BigUint& x) const {
    if (x >= n_) return std::nullopt;
    auto [first, last] = index_.equal_range(Fingerprint(x));
    if (first == last) return std::nullopt;
    std::vector<std::uint8_t> probe(width_);
    Export(x, probe.data());
    for (auto it = first; it != last; ++it) {
      if (std::equal(probe.begin(), probe.end(),
                     values_.begin() + it->second * width_)) {
        return it->second;
      }
    }
    return std::nullopt;
  }

  Backend backend_ = Backend::kTable;
  std::uint64_t u_ = 0;
  std::uint64_t steps_ = 0;
  BigUint n_;
  BigUint giant_;
  std::size_t width_ = 0;
  std::vector<std::uint8_t> values_;
  std::unordered_multimap<std::uint64_t, std::uint64_t> index_;
};

inline DecryptionTable build_table(const PublicKey& pk, const SecretKey& sk) {
  return DecryptionTable::Build(pk, sk, DecryptionTable::Backend::kTable);
}

// Full decryption: c^v = g^(m v), then a table lookup.
inline Residue decrypt(const SecretKey& sk, const DecryptionTable& table,
                       const Ciphertext& c, OpCounters* counters = nullptr) {
  if (counters != nullptr) ++counters->full_decryptions;
  const auto m =
      table.Lookup(detail::PowModViaFactors(sk, c.value, sk.v, counters));
  if (!m) throw IntegrityError("malformed ciphertext: residue not in table");
  return *m;
}

}  // namespace seccmp

#endif  // SECCMP_CIPHER_HPP_

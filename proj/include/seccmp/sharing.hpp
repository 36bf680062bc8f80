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

#ifndef SECCMP_SHARING_HPP_
#define SECCMP_SHARING_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "seccmp/cipher.hpp"
#include "seccmp/errors.hpp"
#include "seccmp/numeric.hpp"

namespace seccmp {

inline Residue add_mod(Residue a, Residue b, Residue u) {
  return static_cast<Residue>((static_cast<unsigned __int128>(a) + b) % u);
}

inline Residue sub_mod(Residue a, Residue b, Residue u) {
  return add_mod(a % u, u - b % u, u);
}

inline Residue mul_mod(Residue a, Residue b, Residue u) {
  return static_cast<Residue>((static_cast<unsigned __int128>(a) * b) % u);
}

inline Residue neg_mod(Residue a, Residue u) { return sub_mod(0, a, u); }

// One party's half of a bit-decomposed integer. Bits are addressed 1..l with
// bit 1 the least significant; storage is LSB first.
class SharedInteger {
 public:
  SharedInteger() = default;
  explicit SharedInteger(std::vector<Residue> bits) : bits_(std::move(bits)) {}

  std::size_t length() const { return bits_.size(); }
  Residue bit(std::size_t i) const { return bits_.at(i - 1); }
  std::span<const Residue> lsb_first() const { return bits_; }

  friend bool operator==(const SharedInteger&, const SharedInteger&) = default;

 private:
  std::vector<Residue> bits_;
};

struct SharePair {
  SharedInteger a;
  SharedInteger b;
};

// Splits each bit x_i of X as (r, x_i - r mod u) with r uniform in Z_u.
inline SharePair share_integer(std::uint64_t x, std::size_t l, Residue u,
                               Rng& rng) {
  if (l == 0 || l > 63) throw DomainError("bit length out of range");
  if (x >> l != 0) throw DomainError("value does not fit in l bits");
  std::vector<Residue> a(l);
  std::vector<Residue> b(l);
  for (std::size_t i = 0; i < l; ++i) {
    const Residue bit = (x >> i) & 1;
    a[i] = rng.UniformBelow(u);
    b[i] = sub_mod(bit, a[i], u);
  }
  return {SharedInteger(std::move(a)), SharedInteger(std::move(b))};
}

// (a + b) mod u, which must be a bit.
inline int reconstruct_bit(Residue a, Residue b, Residue u) {
  const Residue v = add_mod(a % u, b % u, u);
  if (v > 1) {
    throw IntegrityError("shares reconstruct to " + std::to_string(v) +
                         ", not a bit");
  }
  return static_cast<int>(v);
}

inline std::uint64_t reconstruct_integer(const SharedInteger& a,
                                         const SharedInteger& b, Residue u) {
  if (a.length() != b.length()) {
    throw IntegrityError("share halves differ in length");
  }
  std::uint64_t x = 0;
  for (std::size_t i = 1; i <= a.length(); ++i) {
    x |= std::uint64_t(reconstruct_bit(a.bit(i), b.bit(i), u)) << (i - 1);
  }
  return x;
}

// sum_j coeffs[j] * shares[j] + constant (mod u).
inline Residue local_linear(std::span<const Residue> shares,
                            std::span<const Residue> coeffs, Residue constant,
                            Residue u) {
  if (shares.size() != coeffs.size()) {
    throw ParameterError("local_linear: shares and coefficients differ in length");
  }
  Residue acc = constant % u;
  for (std::size_t j = 0; j < shares.size(); ++j) {
    acc = add_mod(acc, mul_mod(coeffs[j] % u, shares[j] % u, u), u);
  }
  return acc;
}

}  // namespace seccmp

#endif  // SECCMP_SHARING_HPP_

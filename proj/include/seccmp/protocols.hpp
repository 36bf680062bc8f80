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

#ifndef SECCMP_PROTOCOLS_HPP_
#define SECCMP_PROTOCOLS_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "seccmp/cipher.hpp"
#include "seccmp/counters.hpp"
#include "seccmp/errors.hpp"
#include "seccmp/keygen.hpp"
#include "seccmp/messages.hpp"
#include "seccmp/sharing.hpp"

namespace seccmp {

// P1 is the XOR-based baseline, P3 the XOR-free comparison.
enum class Variant : std::uint8_t { kP1, kP3 };

inline std::string_view to_string(Variant v) {
  return v == Variant::kP1 ? "P1" : "P3";
}

class PartySession;

// Receives each party's c_i shares together with its input shares. Used by
// the in-process harness to audit the no-wraparound property in plaintext.
class CShareObserver {
 public:
  virtual ~CShareObserver() = default;
  virtual void OnCShares(const PartySession& session, Variant variant,
                         std::span<const Residue> c_shares) = 0;
};

// One party's state for a single comparison. Role A holds the secret key
// (and, for P1, the decryption table); role B holds only the public key.
class PartySession {
 public:
  static PartySession ForA(PublicKey pk, SecretKey sk,
                           std::shared_ptr<const DecryptionTable> table,
                           SharedInteger x, SharedInteger y, Rng rng) {
    PartySession s(Role::kA, std::move(pk), std::move(x), std::move(y),
                   std::move(rng));
    s.sk_ = std::move(sk);
    s.table_ = std::move(table);
    return s;
  }

  static PartySession ForB(PublicKey pk, SharedInteger x, SharedInteger y,
                           Rng rng) {
    return PartySession(Role::kB, std::move(pk), std::move(x), std::move(y),
                        std::move(rng));
  }

  Role role() const { return role_; }
  const PublicKey& pk() const { return pk_; }
  Residue u() const { return u_; }
  std::size_t l() const { return x_.length(); }
  const SharedInteger& x_shares() const { return x_; }
  const SharedInteger& y_shares() const { return y_; }
  bool has_secret_key() const { return sk_.has_value(); }
  bool has_table() const { return table_ != nullptr; }
  const OpCounters& counters() const { return counters_; }
  OpCounters* mutable_counters() { return &counters_; }
  Rng& rng() { return rng_; }

  const SecretKey& sk() const {
    if (!sk_) throw StateError("party holds no secret key");
    return *sk_;
  }
  const DecryptionTable& table() const {
    if (!table_) throw StateError("party holds no decryption table");
    return *table_;
  }

  CShareObserver* observer() const { return observer_; }
  void set_observer(CShareObserver* observer) { observer_ = observer; }

 private:
  PartySession(Role role, PublicKey pk, SharedInteger x, SharedInteger y,
               Rng rng)
      : role_(role),
        pk_(std::move(pk)),
        u_(plaintext_modulus(pk_)),
        x_(std::move(x)),
        y_(std::move(y)),
        rng_(std::move(rng)) {
    if (x_.length() != y_.length()) {
      throw ProtocolError("x and y share lengths differ");
    }
    if (x_.length() == 0) throw ProtocolError("empty share vectors");
  }

  Role role_;
  PublicKey pk_;
  Residue u_;
  std::optional<SecretKey> sk_;
  std::shared_ptr<const DecryptionTable> table_;
  SharedInteger x_;
  SharedInteger y_;
  Rng rng_;
  OpCounters counters_;
  CShareObserver* observer_ = nullptr;
};

namespace detail {

inline void RequireRole(const PartySession& s, Role role, const char* op) {
  if (s.role() != role) {
    throw StateError(std::string(op) + " must be run by party " +
                     std::string(to_string(role)));
  }
}

}  // namespace detail

// Share-product round, step 1: A sends E(p_A).
inline P2Request p2_request(PartySession& a, Residue p_a) {
  detail::RequireRole(a, Role::kA, "p2_request");
  return P2Request{encrypt(a.pk(), p_a % a.u(), a.rng(), a.mutable_counters())};
}

// Step 2 with the output share r supplied: E(p_A)^q_B * E(-r).
inline P2Response p2_respond_with(PartySession& b, const P2Request& req,
                                  Residue q_b, Residue r) {
  detail::RequireRole(b, Role::kB, "p2_respond");
  check_ciphertext(b.pk(), req.c);
  const Ciphertext product =
      homomorphic_scale(b.pk(), req.c, BigUint(q_b % b.u()),
                        b.mutable_counters());
  const Ciphertext mask =
      encrypt(b.pk(), neg_mod(r, b.u()), b.rng(), b.mutable_counters());
  return P2Response{homomorphic_add(b.pk(), product, mask)};
}

// Step 2: B draws r uniform in Z_u and keeps it as its share of p_A q_B.
inline std::pair<P2Response, Residue> p2_respond(PartySession& b,
                                                 const P2Request& req,
                                                 Residue q_b) {
  detail::RequireRole(b, Role::kB, "p2_respond");
  const Residue r = b.rng().UniformBelow(b.u());
  return {p2_respond_with(b, req, q_b, r), r};
}

// Step 3: A decrypts p_A q_B - r, its share of the product.
inline Residue p2_finish(PartySession& a, const P2Response& resp) {
  detail::RequireRole(a, Role::kA, "p2_finish");
  check_ciphertext(a.pk(), resp.c);
  return decrypt(a.sk(), a.table(), resp.c, a.mutable_counters());
}

// A party's share of p XOR q = p + q - 2pq, given its own shares of p and q
// and its shares t1, t2 of the two cross products.
inline Residue xor_combine(Residue p_own, Residue q_own, Residue t1, Residue t2,
                           Residue u) {
  const Residue own_product = mul_mod(p_own, q_own, u);
  const Residue products = add_mod(add_mod(own_product, t1, u), t2, u);
  return sub_mod(add_mod(p_own, q_own, u), mul_mod(2, products, u), u);
}

// Both sides of an XOR of shared bits, run directly between two sessions:
// one share-product round for p_A q_B and one for p_B q_A (A inputs q_A).
inline std::pair<Residue, Residue> xor_shares(PartySession& a, PartySession& b,
                                              Residue p_a, Residue q_a,
                                              Residue p_b, Residue q_b) {
  const Residue u = a.u();
  auto [resp1, r1] = p2_respond(b, p2_request(a, p_a), q_b);
  auto [resp2, r2] = p2_respond(b, p2_request(a, q_a), p_b);
  const Residue t1_a = p2_finish(a, resp1);
  const Residue t2_a = p2_finish(a, resp2);
  return {xor_combine(p_a, q_a, t1_a, t2_a, u),
          xor_combine(p_b, q_b, r1, r2, u)};
}

// Shares of c_i = x_i - y_i + 1 + sum_{j>i} d_j (XOR digits), i = 1..l,
// returned LSB first. Only A adds the constant.
inline std::vector<Residue> compute_c_shares_p1(const PartySession& s,
                                                std::span<const Residue> d) {
  const std::size_t l = s.l();
  if (d.size() != l) throw ProtocolError("d share count must equal l");
  const Residue u = s.u();
  const Residue one = s.role() == Role::kA ? 1 : 0;
  std::vector<Residue> c(l);
  Residue suffix = 0;  // sum of d_j for j > i
  for (std::size_t i = l; i >= 1; --i) {
    const Residue diff = sub_mod(s.x_shares().bit(i), s.y_shares().bit(i), u);
    c[i - 1] = add_mod(add_mod(diff, suffix, u), one, u);
    suffix = add_mod(suffix, d[i - 1], u);
  }
  return c;
}

// 2^j for j = 1..l, LSB first: the prefix weights of the XOR-free
// comparison. Every weight used for c_i is a multiple of 4, so the prefix sum
// cannot cancel d_i + 1 in {1, 2}. Weighting the top digit by 2 instead
// would let X=5, Y=2 (l=3) produce c_1 = 0. The largest |c_i| is
// 2^(l+1) - 2, below u.
inline std::vector<Residue> prefix_weights(std::size_t l, Residue u) {
  std::vector<Residue> w(l);
  for (std::size_t j = 1; j <= l; ++j) w[j - 1] = (Residue{1} << j) % u;
  return w;
}

// Shares of c_i = d_i + 1 + sum_{j>i} d_j 2^j with d_j = x_j - y_j
// computed share-wise, i = 1..l, LSB first. Purely local.
inline std::vector<Residue> compute_c_shares_p3(const PartySession& s) {
  const std::size_t l = s.l();
  const Residue u = s.u();
  const Residue one = s.role() == Role::kA ? 1 : 0;
  std::vector<Residue> d(l);
  for (std::size_t j = 1; j <= l; ++j) {
    d[j - 1] = sub_mod(s.x_shares().bit(j), s.y_shares().bit(j), u);
  }
  const std::vector<Residue> weights = prefix_weights(l, u);
  std::vector<Residue> c(l);
  for (std::size_t i = 1; i <= l; ++i) {
    const auto tail_d = std::span<const Residue>(d).subspan(i);
    const auto tail_w = std::span<const Residue>(weights).subspan(i);
    c[i - 1] = add_mod(d[i - 1], local_linear(tail_d, tail_w, one, u), u);
  }
  return c;
}

// Step 3: A encrypts its c shares alpha_i.
inline CBatch encrypt_c_batch(PartySession& a, std::span<const Residue> alpha) {
  detail::RequireRole(a, Role::kA, "encrypt_c_batch");
  if (alpha.size() != a.l()) throw ProtocolError("alpha count must equal l");
  CBatch batch;
  batch.cs.reserve(alpha.size());
  for (Residue v : alpha) {
    batch.cs.push_back(encrypt(a.pk(), v, a.rng(), a.mutable_counters()));
  }
  return batch;
}

// Step 4: gamma_i = (E(alpha_i) g^beta_i)^s_i h^s'_i with fresh s_i in Z_u^*
// and 2t-bit s'_i, emitted in a Fisher-Yates permuted order.
inline GammaBatch blind_permute(PartySession& b, const CBatch& batch,
                                std::span<const Residue> beta) {
  detail::RequireRole(b, Role::kB, "blind_permute");
  const std::size_t l = b.l();
  if (batch.cs.size() != l || beta.size() != l) {
    throw ProtocolError("blind_permute: batch and beta must both have l entries");
  }
  const PublicKey& pk = b.pk();
  GammaBatch out;
  out.gammas.reserve(l);
  for (std::size_t i = 0; i < l; ++i) {
    check_ciphertext(pk, batch.cs[i]);
    const Ciphertext shifted =
        add_plain(pk, batch.cs[i], beta[i] % b.u(), b.mutable_counters());
    const Residue s = 1 + b.rng().UniformBelow(b.u() - 1);
    const BigUint s_prime = b.rng().RandomBits(2 * pk.params.t);
    out.gammas.push_back(blind(pk, shifted, s, s_prime, b.mutable_counters()));
  }
  for (std::size_t i = out.gammas.size(); i > 1; --i) {
    std::swap(out.gammas[i - 1],
              out.gammas[b.rng().UniformBelow(std::uint64_t{i})]);
  }
  return out;
}

// Step 5: GREATER iff some gamma encrypts 0. Every entry is checked.
inline Outcome detect_zero(PartySession& a, const GammaBatch& batch) {
  detail::RequireRole(a, Role::kA, "detect_zero");
  if (batch.gammas.size() != a.l()) {
    throw ProtocolError("gamma batch must have l entries");
  }
  bool hit = false;
  for (const auto& gamma : batch.gammas) {
    check_ciphertext(a.pk(), gamma);
    hit = is_zero(a.sk(), gamma, a.mutable_counters()) || hit;
  }
  return hit ? Outcome::kGreater : Outcome::kNotGreater;
}

// sum_j d_j 2^j over digits d_1..d_l (LSB first) in {-1, 0, 1}.
inline std::int64_t signed_digit_weight(std::span<const int> digits) {
  if (digits.size() > 61) throw DomainError("too many digits");
  std::int64_t w = 0;
  for (std::size_t j = 1; j <= digits.size(); ++j) {
    const int d = digits[j - 1];
    if (d < -1 || d > 1) throw DomainError("digit must be -1, 0 or 1");
    w += static_cast<std::int64_t>(d) * (std::int64_t{1} << j);
  }
  return w;
}

}  // namespace seccmp

#endif  // SECCMP_PROTOCOLS_HPP_

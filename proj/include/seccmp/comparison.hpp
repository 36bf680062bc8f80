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

#ifndef SECCMP_COMPARISON_HPP_
#define SECCMP_COMPARISON_HPP_

#include <cstddef>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "seccmp/cipher.hpp"
#include "seccmp/keygen.hpp"
#include "seccmp/messages.hpp"
#include "seccmp/protocols.hpp"
#include "seccmp/sharing.hpp"
#include "seccmp/transport.hpp"

namespace seccmp {

namespace detail {

// Steps 1-2 of either variant: this party's c_i shares, LSB first. P1 runs
// the 2l share-product rounds pipelined (all requests, then all responses).
inline std::vector<Residue> CSharesA(PartySession& a, Variant variant,
                                     Endpoint& ep) {
  if (variant == Variant::kP3) return compute_c_shares_p3(a);
  const std::size_t l = a.l();
  for (std::size_t i = 1; i <= l; ++i) {
    ep.Send(p2_request(a, a.x_shares().bit(i)));
    ep.Send(p2_request(a, a.y_shares().bit(i)));
  }
  std::vector<Residue> d(l);
  for (std::size_t i = 1; i <= l; ++i) {
    const Residue t1 = p2_finish(a, ep.Expect<P2Response>());
    const Residue t2 = p2_finish(a, ep.Expect<P2Response>());
    d[i - 1] = xor_combine(a.x_shares().bit(i), a.y_shares().bit(i), t1, t2,
                           a.u());
  }
  return compute_c_shares_p1(a, d);
}

inline std::vector<Residue> CSharesB(PartySession& b, Variant variant,
                                     Endpoint& ep) {
  if (variant == Variant::kP3) return compute_c_shares_p3(b);
  const std::size_t l = b.l();
  std::vector<P2Request> requests;
  requests.reserve(2 * l);
  for (std::size_t k = 0; k < 2 * l; ++k) {
    requests.push_back(ep.Expect<P2Request>());
  }
  std::vector<Residue> d(l);
  for (std::size_t i = 1; i <= l; ++i) {
    // x_A * y_B, then y_A * x_B.
    auto [resp1, r1] = p2_respond(b, requests[2 * (i - 1)], b.y_shares().bit(i));
    auto [resp2, r2] = p2_respond(b, requests[2 * (i - 1) + 1],
                                  b.x_shares().bit(i));
    ep.Send(resp1);
    ep.Send(resp2);
    d[i - 1] = xor_combine(b.x_shares().bit(i), b.y_shares().bit(i), r1, r2,
                           b.u());
  }
  return compute_c_shares_p1(b, d);
}

}  // namespace detail

// Runs one comparison as party A over `ep`.
inline Outcome run_party_a(PartySession& a, Variant variant, Endpoint& ep) {
  detail::RequireRole(a, Role::kA, "run_party_a");
  const std::vector<Residue> alpha = detail::CSharesA(a, variant, ep);
  if (a.observer() != nullptr) a.observer()->OnCShares(a, variant, alpha);
  ep.Send(encrypt_c_batch(a, alpha));
  const Outcome outcome = detect_zero(a, ep.Expect<GammaBatch>());
  ep.Send(OutcomeMessage{outcome});
  return outcome;
}

// Runs one comparison as party B over `ep`; returns the outcome A announces.
inline Outcome run_party_b(PartySession& b, Variant variant, Endpoint& ep) {
  detail::RequireRole(b, Role::kB, "run_party_b");
  const std::vector<Residue> beta = detail::CSharesB(b, variant, ep);
  if (b.observer() != nullptr) b.observer()->OnCShares(b, variant, beta);
  ep.Send(blind_permute(b, ep.Expect<CBatch>(), beta));
  return ep.Expect<OutcomeMessage>().result;
}

inline Outcome run_party(PartySession& s, Variant variant, Endpoint& ep) {
  return s.role() == Role::kA ? run_party_a(s, variant, ep)
                              : run_party_b(s, variant, ep);
}

// Drives both parties over the given endpoints, B on a worker thread.
inline Outcome run_comparison(Variant variant, PartySession& a, PartySession& b,
                              EndpointPair& transport) {
  if (a.l() != b.l()) throw ProtocolError("parties disagree on l");
  std::optional<Outcome> outcome_b;
  std::exception_ptr error_b;
  std::thread worker([&] {
    try {
      outcome_b = run_party_b(b, variant, *transport.b);
    } catch (...) {
      error_b = std::current_exception();
      transport.b->Close();
    }
  });
  Outcome outcome_a{};
  try {
    outcome_a = run_party_a(a, variant, *transport.a);
  } catch (...) {
    transport.a->Close();
    worker.join();
    throw;
  }
  worker.join();
  if (error_b) std::rethrow_exception(error_b);
  if (!outcome_b || *outcome_b != outcome_a) {
    throw ProtocolError("parties disagree on the outcome");
  }
  return outcome_a;
}

inline Outcome run_comparison(Variant variant, PartySession& a,
                              PartySession& b) {
  EndpointPair transport = make_in_process_pair();
  return run_comparison(variant, a, b, transport);
}

// Plaintext-side audit of c_i. For P3 it checks |c_i| < u over the integers
// and that the shares reconstruct to c_i mod u; for P1 only the latter.
// Serves one comparison at a time.
class WraparoundAudit final : public CShareObserver {
 public:
  void OnCShares(const PartySession& session, Variant variant,
                 std::span<const Residue> c_shares) override {
    std::lock_guard lock(mu_);
    std::optional<Pending>& slot = session.role() == Role::kA ? a_ : b_;
    slot = Pending{session.x_shares(), session.y_shares(),
                   std::vector<Residue>(c_shares.begin(), c_shares.end()),
                   variant, session.u()};
    if (a_ && b_) {
      Evaluate(*a_, *b_);
      a_.reset();
      b_.reset();
    }
  }

  std::uint64_t checked() const {
    std::lock_guard lock(mu_);
    return checked_;
  }
  std::uint64_t violations() const {
    std::lock_guard lock(mu_);
    return violations_;
  }

  // Signed integer c_i values, LSB first, from plaintext bits.
  static std::vector<std::int64_t> PlaintextC(Variant variant, std::uint64_t x,
                                              std::uint64_t y, std::size_t l) {
    auto bit = [](std::uint64_t v, std::size_t i) {
      return static_cast<std::int64_t>((v >> (i - 1)) & 1);
    };
    std::vector<std::int64_t> c(l);
    for (std::size_t i = 1; i <= l; ++i) {
      std::int64_t tail = 0;
      for (std::size_t j = i + 1; j <= l; ++j) {
        const std::int64_t d = variant == Variant::kP3
                                   ? bit(x, j) - bit(y, j)
                                   : (bit(x, j) ^ bit(y, j));
        tail += variant == Variant::kP3 ? d * (std::int64_t{1} << j)
                                        : d;
      }
      c[i - 1] = bit(x, i) - bit(y, i) + 1 + tail;
    }
    return c;
  }

 private:
  struct Pending {
    SharedInteger x;
    SharedInteger y;
    std::vector<Residue> c;
    Variant variant;
    Residue u;
  };

  void Evaluate(const Pending& a, const Pending& b) {
    const Residue u = a.u;
    const std::uint64_t x = reconstruct_integer(a.x, b.x, u);
    const std::uint64_t y = reconstruct_integer(a.y, b.y, u);
    const auto expected = PlaintextC(a.variant, x, y, a.x.length());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      ++checked_;
      const std::int64_t ci = expected[i];
      const Residue reconstructed = add_mod(a.c[i], b.c[i], u);
      const Residue want =
          ci >= 0 ? Residue(ci) % u : neg_mod(Residue(-ci) % u, u);
      const bool in_range = a.variant != Variant::kP3 ||
                            static_cast<std::uint64_t>(ci < 0 ? -ci : ci) < u;
      if (!in_range || reconstructed != want) ++violations_;
    }
  }

  mutable std::mutex mu_;
  std::optional<Pending> a_;
  std::optional<Pending> b_;
  std::uint64_t checked_ = 0;
  std::uint64_t violations_ = 0;
};

// Shared key material for a series of comparisons.
struct ComparisonKeys {
  KeyPair keys;
  // Needed by A for P1's full decryptions; may be null for P3-only use.
  std::shared_ptr<const DecryptionTable> table;

  static ComparisonKeys WithTable(KeyPair keys) {
    auto table = std::make_shared<const DecryptionTable>(
        build_table(keys.pk, keys.sk));
    return {std::move(keys), std::move(table)};
  }
};

struct PartyPair {
  PartySession a;
  PartySession b;
};

// Stream seeds for one comparison. The dealer splits x and y; each party
// draws its own randomness from an independent stream of the same seed.
inline std::uint64_t dealer_seed(std::uint64_t seed) {
  return derive_seed(seed, "seccmp/dealer");
}
inline std::uint64_t party_seed(std::uint64_t seed, Role role) {
  return derive_seed(seed, role == Role::kA ? "seccmp/party-a" : "seccmp/party-b");
}

struct DealtShares {
  SharePair x;
  SharePair y;
};

inline DealtShares deal_shares(const PublicKey& pk, std::uint64_t x,
                               std::uint64_t y, std::uint64_t seed) {
  Rng dealer(dealer_seed(seed));
  const Residue u = plaintext_modulus(pk);
  SharePair xs = share_integer(x, pk.params.l, u, dealer);
  SharePair ys = share_integer(y, pk.params.l, u, dealer);
  return {std::move(xs), std::move(ys)};
}

inline PartyPair make_sessions(const ComparisonKeys& keys, std::uint64_t x,
                               std::uint64_t y, std::uint64_t seed) {
  const PublicKey& pk = keys.keys.pk;
  DealtShares dealt = deal_shares(pk, x, y, seed);
  return {PartySession::ForA(pk, keys.keys.sk, keys.table,
                             std::move(dealt.x.a), std::move(dealt.y.a),
                             Rng(party_seed(seed, Role::kA))),
          PartySession::ForB(pk, std::move(dealt.x.b), std::move(dealt.y.b),
                             Rng(party_seed(seed, Role::kB)))};
}

struct ComparisonResult {
  Outcome outcome = Outcome::kNotGreater;
  OpCounters counters_a;
  OpCounters counters_b;
  std::vector<TranscriptEntry> transcript_a;
};

#ifdef NDEBUG
inline constexpr bool kAuditByDefault = false;
#else
inline constexpr bool kAuditByDefault = true;
#endif

// Shares x and y, then runs one comparison over an in-process channel (or
// loopback TCP when `tcp` is set). With no audit given,
// debug builds attach a private one and fail on any violation.
inline ComparisonResult compare_values(Variant variant,
                                       const ComparisonKeys& keys,
                                       std::uint64_t x, std::uint64_t y,
                                       std::uint64_t seed,
                                       WraparoundAudit* audit = nullptr,
                                       bool tcp = false) {
  PartyPair parties = make_sessions(keys, x, y, seed);
  WraparoundAudit local;
  WraparoundAudit* active = audit;
  if (active == nullptr && kAuditByDefault) active = &local;
  if (active != nullptr) {
    parties.a.set_observer(active);
    parties.b.set_observer(active);
  }
  EndpointPair transport =
      tcp ? make_tcp_loopback_pair() : make_in_process_pair();
  ComparisonResult result;
  result.outcome = run_comparison(variant, parties.a, parties.b, transport);
  if (active == &local && local.violations() != 0) {
    throw IntegrityError("c_i wraparound audit failed");
  }
  result.counters_a = parties.a.counters();
  result.counters_b = parties.b.counters();
  result.transcript_a = transport.a->transcript();
  return result;
}

}  // namespace seccmp

#endif  // SECCMP_COMPARISON_HPP_

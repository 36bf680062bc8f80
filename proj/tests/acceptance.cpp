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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "message_fuzz.hpp"
#include "seccmp/seccmp.hpp"

namespace {

using namespace seccmp;

Outcome Oracle(std::uint64_t x, std::uint64_t y) {
  return y > x ? Outcome::kGreater : Outcome::kNotGreater;
}

// Shared across criteria 1-3 and reported by criterion 7.
WraparoundAudit g_audit;
std::uint64_t g_expected_audit_entries = 0;

const ComparisonKeys& DefaultKeys() {
  static const ComparisonKeys keys = [] {
    Rng rng(20261016);
    return ComparisonKeys::WithTable(generate_keys(Params{1024, 160, 16}, rng));
  }();
  return keys;
}

// Runs both variants with the shared audit; returns the number of failures.
std::uint64_t CheckPair(const ComparisonKeys& keys, std::uint64_t x,
                        std::uint64_t y, std::uint64_t seed,
                        std::ostringstream& detail) {
  std::uint64_t failures = 0;
  const Outcome want = Oracle(x, y);
  Outcome got[2];
  int i = 0;
  for (Variant v : {Variant::kP1, Variant::kP3}) {
    got[i] = compare_values(v, keys, x, y, seed, &g_audit).outcome;
    g_expected_audit_entries += keys.keys.pk.params.l;
    if (got[i] != want) {
      if (failures == 0) {
        detail << " first failure: " << to_string(v) << " x=" << x
               << " y=" << y << " seed=" << seed;
      }
      ++failures;
    }
    ++i;
  }
  if (got[0] != got[1] && failures == 0) ++failures;
  return failures;
}

struct Verdict {
  bool pass;
  std::string detail;
};

Verdict ToyExhaustive() {
  const ComparisonKeys keys = ComparisonKeys::WithTable(toy_key());
  std::ostringstream d;
  std::uint64_t failures = 0, runs = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (std::uint64_t x = 0; x < 4; ++x) {
      for (std::uint64_t y = 0; y < 4; ++y) {
        failures += CheckPair(keys, x, y, seed, d);
        runs += 2;
      }
    }
  }
  std::ostringstream out;
  out << "u=11, 16 pairs x 5 seeds x {P1,P3}: " << runs - failures << "/"
      << runs << " correct" << d.str();
  return {failures == 0 && runs == 160, out.str()};
}

Verdict SmallKeysExhaustive() {
  std::ostringstream d;
  std::uint64_t failures = 0, runs = 0;
  for (std::size_t l : {3, 4}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      Rng rng(derive_seed(seed * 100 + l, "acceptance/small-keys"));
      const ComparisonKeys keys = ComparisonKeys::WithTable(generate_keys(
          Params{64, 16, l}, rng, KeygenOptions{.allow_tiny = true}));
      if (!validate_keys(keys.keys.pk, keys.keys.sk).all_passed()) {
        ++failures;
        d << " invalid key l=" << l << " seed=" << seed;
      }
      for (std::uint64_t x = 0; x < (1u << l); ++x) {
        for (std::uint64_t y = 0; y < (1u << l); ++y) {
          failures += CheckPair(keys, x, y, seed * 1000 + x * 16 + y, d);
          runs += 2;
        }
      }
    }
  }
  std::ostringstream out;
  out << "k=64, l in {3,4}, all pairs x 3 seeds x {P1,P3}: " << runs - failures
      << "/" << runs << " correct" << d.str();
  return {failures == 0 && runs == 2 * 3 * (64 + 256), out.str()};
}

Verdict RealisticRandom() {
  const ComparisonKeys& keys = DefaultKeys();
  Rng rng(derive_seed(3, "acceptance/realistic"));
  std::ostringstream d;
  std::uint64_t failures = 0, ties = 0;
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t x = rng.UniformBelow(std::uint64_t{1} << 16);
    // Every eighth pair is a tie or off by one to exercise the boundary.
    std::uint64_t y = rng.UniformBelow(std::uint64_t{1} << 16);
    if (i % 8 == 0) y = x;
    if (i % 8 == 1) y = std::min<std::uint64_t>(x + 1, 0xFFFF);
    ties += x == y;
    failures += CheckPair(keys, x, y, rng.NextU64(), d);
  }
  std::ostringstream out;
  out << "k=1024 t=160 l=16, 200 random pairs (" << ties
      << " ties): " << failures << " failures" << d.str();
  return {failures == 0, out.str()};
}

Verdict SignedDigitWeights() {
  constexpr std::size_t l = 8;
  std::vector<int> d(l, -1);
  std::uint64_t vectors = 0, bad = 0, zero_weight = 0;
  for (;;) {
    ++vectors;
    const bool all_zero =
        std::all_of(d.begin(), d.end(), [](int v) { return v == 0; });
    // Independent evaluation: most significant digit first, Horner style.
    std::int64_t w = 0;
    for (std::size_t j = l; j >= 1; --j) w = 2 * w + 2 * d[j - 1];
    const bool zero = signed_digit_weight(d) == 0;
    if (zero != all_zero || signed_digit_weight(d) != w) ++bad;
    zero_weight += zero;
    std::size_t i = 0;
    while (i < l && d[i] == 1) d[i++] = -1;
    if (i == l) break;
    ++d[i];
  }
  std::ostringstream out;
  out << vectors << " digit vectors, " << zero_weight
      << " with zero weight, " << bad << " mismatches";
  return {vectors == 6561 && zero_weight == 1 && bad == 0, out.str()};
}

Verdict HomomorphicIdentities() {
  Rng rng(derive_seed(5, "acceptance/homomorphic"));
  const KeyPair keys = generate_keys(Params{256, 40, 16}, rng);
  const DecryptionTable table = build_table(keys.pk, keys.sk);
  const Residue u = plaintext_modulus(keys.pk);
  std::uint64_t bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const Residue m = rng.UniformBelow(u);
    const Residue m2 = rng.UniformBelow(u);
    const Residue s = 1 + rng.UniformBelow(u - 1);
    const Ciphertext c = encrypt(keys.pk, m, rng);
    const Ciphertext c2 = encrypt(keys.pk, m2, rng);
    const unsigned __int128 prod = static_cast<unsigned __int128>(m) * s;
    const Residue want_sum = (m + m2) % u;
    const Residue want_prod = static_cast<Residue>(prod % u);
    if (decrypt(keys.sk, table, homomorphic_add(keys.pk, c, c2)) != want_sum) ++bad;
    if (decrypt(keys.sk, table, homomorphic_scale(keys.pk, c, BigUint(s))) != want_prod) ++bad;
    const Ciphertext b = blind(keys.pk, c, s, rng.RandomBits(2 * keys.pk.params.t));
    if (decrypt(keys.sk, table, b) != want_prod) ++bad;
    if (is_zero(keys.sk, b) != (m == 0)) ++bad;
  }
  std::ostringstream out;
  out << "k=256, u=" << u << ", 1000 random (m, m', s): " << bad
      << " mismatches";
  return {bad == 0, out.str()};
}

Verdict CostReproduction() {
  const ComparisonKeys& keys = DefaultKeys();
  const ComparisonResult p1 = compare_values(Variant::kP1, keys, 1234, 4321, 6);
  const ComparisonResult p3 = compare_values(Variant::kP3, keys, 1234, 4321, 6);
  const OpCounters& a1 = p1.counters_a;
  const OpCounters& a3 = p3.counters_a;
  const bool counts = a1.encryptions == 48 && a1.full_decryptions == 32 &&
                      a1.zero_checks == 16 && a3.encryptions == 16 &&
                      a3.full_decryptions == 0 && a3.zero_checks == 16;

  const BenchReport r = run_bench(keys, 30, 6);
  const bool formula = counters_match_formula(r.p1, 16, 30) &&
                       counters_match_formula(r.p3, 16, 30) &&
                       r.p1.oracle_mismatches + r.p3.oracle_mismatches == 0;
  const double ratio = r.p3.median_ms() / r.p1.median_ms();
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "A: P1 %llu enc + %llu dec, P3 %llu enc + %llu dec; median "
                "P1 %.2f ms, P3 %.2f ms over 30 reps, ratio %.3f (bound 0.7)",
                static_cast<unsigned long long>(a1.encryptions),
                static_cast<unsigned long long>(a1.full_decryptions),
                static_cast<unsigned long long>(a3.encryptions),
                static_cast<unsigned long long>(a3.full_decryptions),
                r.p1.median_ms(), r.p3.median_ms(), ratio);
  return {counts && formula && ratio <= 0.7, buf};
}

Verdict NoWraparound() {
  std::ostringstream out;
  out << g_audit.checked() << " c_i values audited across criteria 1-3 (expected "
      << g_expected_audit_entries << "), " << g_audit.violations()
      << " violations";
  return {g_audit.violations() == 0 && g_audit.checked() == g_expected_audit_entries &&
              g_expected_audit_entries > 0,
          out.str()};
}

Verdict TransportFidelity() {
  Rng rng(derive_seed(8, "acceptance/fuzz"));
  std::uint64_t bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const ProtocolMessage m = fuzz::RandomMessage(rng);
    const auto bytes = frame_bytes(encode(m));
    if (decode(parse_frame(bytes)) != m) ++bad;
    if (frame_bytes(encode(decode(parse_frame(bytes)))) != bytes) ++bad;
  }
  const ComparisonKeys& keys = DefaultKeys();
  const ComparisonResult mem =
      compare_values(Variant::kP3, keys, 40000, 40001, 88, nullptr, false);
  const ComparisonResult tcp =
      compare_values(Variant::kP3, keys, 40000, 40001, 88, nullptr, true);
  const bool same = mem.transcript_a == tcp.transcript_a &&
                    mem.outcome == tcp.outcome && mem.outcome == Outcome::kGreater;
  std::ostringstream out;
  out << "1000 fuzzed messages, " << bad << " round-trip failures; P3 over TCP: "
      << tcp.transcript_a.size() << " frames, "
      << (same ? "identical to" : "DIFFERENT from") << " in-memory transcript";
  return {bad == 0 && same, out.str()};
}

Verdict AuctionSequences() {
  Rng rng(derive_seed(9, "acceptance/auction"));
  const KeyPair keys = generate_keys(Params{1024, 160, 8}, rng);
  std::uint64_t bad = 0, tie_bids = 0, total_bids = 0;
  for (int seq = 0; seq < 100; ++seq) {
    Auction auction(keys, rng.NextU64());
    const std::size_t length = rng.UniformBelow(std::uint64_t{51});
    std::uint64_t best = 0;
    std::optional<std::uint32_t> best_round;
    for (std::uint32_t round = 1; round <= length; ++round) {
      // One bid in three repeats the current maximum.
      const std::uint64_t bid = rng.UniformBelow(std::uint64_t{3}) == 0
                                    ? best
                                    : rng.UniformBelow(std::uint64_t{256});
      const Outcome o = auction.SubmitValue("bidder" + std::to_string(round), bid);
      ++total_bids;
      if (bid == best) {
        ++tie_bids;
        if (o != Outcome::kNotGreater) ++bad;
      }
      if (o != Oracle(best, bid)) ++bad;
      if (bid > best) {
        best = bid;
        best_round = round;
      }
    }
    if (auction.Close() != best) ++bad;
    if (auction.party_a().leading_round() != best_round) ++bad;
    if (auction.party_b().leading_round() != best_round) ++bad;
  }
  std::ostringstream out;
  out << "100 sequences, " << total_bids << " bids (" << tie_bids
      << " ties), l=8: " << bad << " mismatches";
  return {bad == 0, out.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {"exhaustive correctness, toy key", ToyExhaustive},
      {"exhaustive correctness, small keys", SmallKeysExhaustive},
      {"randomized correctness, k=1024", RealisticRandom},
      {"signed-digit weight zero iff all digits zero", SignedDigitWeights},
      {"homomorphic identities", HomomorphicIdentities},
      {"cost reproduction", CostReproduction},
      {"no c_i wraparound", NoWraparound},
      {"transport fidelity", TransportFidelity},
      {"auction", AuctionSequences},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    char timing[32];
    std::snprintf(timing, sizeof(timing), "%.1fs", secs);
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] "
              << criteria[i].name << " (" << timing << "): " << v.detail
              << std::endl;
    failed += !v.pass;
  }
  std::cout << (failed == 0 ? "all criteria passed"
                            : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}

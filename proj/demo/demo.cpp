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

// Walks through one comparison with the fixed toy key, printing each
// party's view, then runs a short auction under a freshly generated key.

#include <cstdint>
#include <iostream>

#include "seccmp/seccmp.hpp"

using namespace seccmp;

namespace {

void PrintShares(const char* label, const SharedInteger& s) {
  std::cout << "  " << label << " =";
  for (Residue r : s.lsb_first()) std::cout << ' ' << r;
  std::cout << '\n';
}

}  // namespace

int main() {
  const KeyPair toy = toy_key();
  std::cout << "toy key: n=" << toy.pk.n << " g=" << toy.pk.g
            << " h=" << toy.pk.h << " u=" << toy.pk.u << '\n';

  const std::uint64_t x = 1, y = 2, seed = 7;
  const DealtShares dealt = deal_shares(toy.pk, x, y, seed);
  std::cout << "X=" << x << " Y=" << y << " (shares LSB first)\n";
  PrintShares("X_A", dealt.x.a);
  PrintShares("X_B", dealt.x.b);
  PrintShares("Y_A", dealt.y.a);
  PrintShares("Y_B", dealt.y.b);

  const ComparisonKeys keys = ComparisonKeys::WithTable(toy);
  for (Variant v : {Variant::kP1, Variant::kP3}) {
    WraparoundAudit audit;
    const ComparisonResult r = compare_values(v, keys, x, y, seed, &audit);
    std::cout << to_string(v) << ": " << to_string(r.outcome)
              << "  A enc=" << r.counters_a.encryptions
              << " dec=" << r.counters_a.full_decryptions
              << " zero=" << r.counters_a.zero_checks
              << "  frames=" << r.transcript_a.size()
              << "  audit violations=" << audit.violations() << '\n';
  }

  Rng rng(11);
  const KeyPair small = generate_keys(Params{256, 40, 8}, rng);
  Auction auction(small, 3);
  for (std::uint64_t bid : {120, 45, 200, 200, 17}) {
    const Outcome o = auction.SubmitValue("bidder", bid);
    std::cout << "bid " << bid << " -> " << to_string(o) << '\n';
  }
  std::cout << "winning bid " << auction.Close() << " (round "
            << *auction.party_a().leading_round() << ")\n";
  return 0;
}

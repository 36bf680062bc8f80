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

#ifndef SECCMP_TESTS_MESSAGE_FUZZ_HPP_
#define SECCMP_TESTS_MESSAGE_FUZZ_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "seccmp/messages.hpp"
#include "seccmp/numeric.hpp"

namespace seccmp::fuzz {

// Random message of a random registered kind, with integers up to 2048 bits
// and lists of up to 19 entries.
inline ProtocolMessage RandomMessage(Rng& rng) {
  auto below = [&](std::uint64_t b) { return rng.UniformBelow(b); };
  auto big = [&] { return Ciphertext{rng.RandomBits(1 + below(2048))}; };
  auto list = [&] {
    std::vector<Ciphertext> cs(below(20));
    for (auto& c : cs) c = big();
    return cs;
  };
  auto outcome = [&] { return static_cast<Outcome>(below(2)); };
  switch (below(7)) {
    case 0: return P2Request{big()};
    case 1: return P2Response{big()};
    case 2: return CBatch{list()};
    case 3: return GammaBatch{list()};
    case 4: return OutcomeMessage{outcome()};
    case 5: {
      AuctionBid bid;
      bid.round = static_cast<std::uint32_t>(rng.NextU64());
      bid.bidder_id.resize(below(12));
      for (char& ch : bid.bidder_id) ch = static_cast<char>('a' + below(26));
      bid.shares.resize(below(10));
      for (auto& s : bid.shares) s = rng.NextU64() >> 4;
      return bid;
    }
    default:
      return AuctionResult{static_cast<std::uint32_t>(rng.NextU64()), outcome()};
  }
}

}  // namespace seccmp::fuzz

#endif  // SECCMP_TESTS_MESSAGE_FUZZ_HPP_

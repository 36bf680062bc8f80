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

#ifndef SECCMP_MESSAGES_HPP_
#define SECCMP_MESSAGES_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "seccmp/cipher.hpp"

namespace seccmp {

enum class Role : std::uint8_t { kA, kB };

inline std::string_view to_string(Role role) {
  return role == Role::kA ? "A" : "B";
}

// kGreater means Y > X; ties are kNotGreater.
enum class Outcome : std::uint8_t { kNotGreater = 0, kGreater = 1 };

inline std::string_view to_string(Outcome outcome) {
  return outcome == Outcome::kGreater ? "GREATER" : "NOT_GREATER";
}

// Share-product round: A sends E(p_A).
struct P2Request {
  Ciphertext c;
  friend bool operator==(const P2Request&, const P2Request&) = default;
};

// Share-product round: B returns E(p_A q_B - r).
struct P2Response {
  Ciphertext c;
  friend bool operator==(const P2Response&, const P2Response&) = default;
};

// A's encryptions of its c_i shares, i = 1..l.
struct CBatch {
  std::vector<Ciphertext> cs;
  friend bool operator==(const CBatch&, const CBatch&) = default;
};

// B's blinded ciphertexts in permuted order.
struct GammaBatch {
  std::vector<Ciphertext> gammas;
  friend bool operator==(const GammaBatch&, const GammaBatch&) = default;
};

struct OutcomeMessage {
  Outcome result = Outcome::kNotGreater;
  friend bool operator==(const OutcomeMessage&, const OutcomeMessage&) = default;
};

// Bidder -> party: one half of a bid's bit shares, LSB first.
struct AuctionBid {
  std::uint32_t round = 0;
  std::string bidder_id;
  std::vector<Residue> shares;
  friend bool operator==(const AuctionBid&, const AuctionBid&) = default;
};

// Party A -> bidder: the outcome of one auction round.
struct AuctionResult {
  std::uint32_t round = 0;
  Outcome result = Outcome::kNotGreater;
  friend bool operator==(const AuctionResult&, const AuctionResult&) = default;
};

using ProtocolMessage =
    std::variant<P2Request, P2Response, CBatch, GammaBatch, OutcomeMessage,
                 AuctionBid, AuctionResult>;

}  // namespace seccmp

#endif  // SECCMP_MESSAGES_HPP_

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

#ifndef SECCMP_AUCTION_HPP_
#define SECCMP_AUCTION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seccmp/comparison.hpp"
#include "seccmp/errors.hpp"
#include "seccmp/keygen.hpp"
#include "seccmp/messages.hpp"
#include "seccmp/protocols.hpp"
#include "seccmp/sharing.hpp"
#include "seccmp/transport.hpp"

namespace seccmp {

struct AuctionRound {
  std::uint32_t round = 0;
  std::string bidder_id;
  Outcome outcome = Outcome::kNotGreater;
};

// One auction party's local state: its half of the current highest bid and
// the public round log. It never holds a plaintext bid.
class AuctionParty {
 public:
  static AuctionParty ForA(PublicKey pk, SecretKey sk, SharedInteger high,
                           Rng rng) {
    AuctionParty p(Role::kA, std::move(pk), std::move(high), std::move(rng));
    p.sk_ = std::move(sk);
    return p;
  }

  static AuctionParty ForB(PublicKey pk, SharedInteger high, Rng rng) {
    return AuctionParty(Role::kB, std::move(pk), std::move(high),
                        std::move(rng));
  }

  Role role() const { return role_; }
  const PublicKey& pk() const { return pk_; }
  const SharedInteger& high_shares() const { return high_; }
  const std::vector<AuctionRound>& history() const { return history_; }
  std::uint32_t next_round() const {
    return static_cast<std::uint32_t>(history_.size()) + 1;
  }

  // Round index of the current leader; nullopt while the initial 0 stands.
  std::optional<std::uint32_t> leading_round() const {
    std::optional<std::uint32_t> lead;
    for (const auto& r : history_) {
      if (r.outcome == Outcome::kGreater) lead = r.round;
    }
    return lead;
  }

  // Comparison session with X = current high and Y = the given bid half.
  PartySession SessionFor(const SharedInteger& bid) {
    Rng rng(rng_.NextU64());
    if (role_ == Role::kA) {
      return PartySession::ForA(pk_, *sk_, nullptr, high_, bid, std::move(rng));
    }
    return PartySession::ForB(pk_, high_, bid, std::move(rng));
  }

  void Record(AuctionRound round, const SharedInteger& bid) {
    if (round.outcome == Outcome::kGreater) high_ = bid;
    history_.push_back(std::move(round));
  }

 private:
  AuctionParty(Role role, PublicKey pk, SharedInteger high, Rng rng)
      : role_(role), pk_(std::move(pk)), high_(std::move(high)),
        rng_(std::move(rng)) {}

  Role role_;
  PublicKey pk_;
  std::optional<SecretKey> sk_;
  SharedInteger high_;
  Rng rng_;
  std::vector<AuctionRound> history_;
};

struct BidSubmission {
  std::string bidder_id;
  SharedInteger share_for_a;
  SharedInteger share_for_b;
};

// Bidder side: split a bid into the two halves.
inline BidSubmission make_bid(std::string bidder_id, std::uint64_t value,
                              const PublicKey& pk, Rng& rng) {
  SharePair shares =
      share_integer(value, pk.params.l, plaintext_modulus(pk), rng);
  return {std::move(bidder_id), std::move(shares.a), std::move(shares.b)};
}

struct AuctionParties {
  AuctionParty a;
  AuctionParty b;
};

// Both parties start from a sharing of 0; A's shares are random.
inline AuctionParties open_auction(const KeyPair& keys, std::uint64_t seed) {
  Rng rng(seed);
  SharePair zero = share_integer(0, keys.pk.params.l,
                                 plaintext_modulus(keys.pk), rng);
  Rng rng_a(rng.NextU64());
  Rng rng_b(rng.NextU64());
  return {AuctionParty::ForA(keys.pk, keys.sk, std::move(zero.a),
                             std::move(rng_a)),
          AuctionParty::ForB(keys.pk, std::move(zero.b), std::move(rng_b))};
}

struct SubmitOptions {
  // Reconstructs the bid's bits before comparing and rejects non-bits. This
  // sees the plaintext bid, so it is for tests and audits only.
  bool audit = false;
};

// Delivers the bid halves (as AuctionBid frames over the bidder channels),
// runs the XOR-free comparison of the bid against the current high, and on
// GREATER makes the bid the new high. A reports the result to the bidder.
inline Outcome submit_bid(AuctionParty& party_a, AuctionParty& party_b,
                          const BidSubmission& bid, EndpointPair& transport,
                          EndpointPair& bidder_to_a, EndpointPair& bidder_to_b,
                          const SubmitOptions& options = {}) {
  const std::size_t l = party_a.pk().params.l;
  const Residue u = plaintext_modulus(party_a.pk());
  const std::uint32_t round = party_a.next_round();
  if (bid.share_for_a.length() != l || bid.share_for_b.length() != l) {
    throw DomainError("bid rejected: share halves must have l entries");
  }
  if (options.audit) {
    try {
      reconstruct_integer(bid.share_for_a, bid.share_for_b, u);
    } catch (const IntegrityError& e) {
      throw DomainError(std::string("bid rejected: ") + e.what());
    }
  }

  auto to_vector = [](const SharedInteger& s) {
    return std::vector<Residue>(s.lsb_first().begin(), s.lsb_first().end());
  };
  bidder_to_a.a->Send(AuctionBid{round, bid.bidder_id, to_vector(bid.share_for_a)});
  bidder_to_b.a->Send(AuctionBid{round, bid.bidder_id, to_vector(bid.share_for_b)});

  auto receive_half = [&](Endpoint& ep) {
    AuctionBid msg = ep.Expect<AuctionBid>();
    if (msg.round != round || msg.shares.size() != l) {
      throw ProtocolError("bid rejected: malformed AuctionBid");
    }
    for (Residue s : msg.shares) {
      if (s >= u) throw ProtocolError("bid rejected: share outside Z_u");
    }
    return std::pair{msg.bidder_id, SharedInteger(std::move(msg.shares))};
  };
  auto [id_a, half_a] = receive_half(*bidder_to_a.b);
  auto [id_b, half_b] = receive_half(*bidder_to_b.b);

  PartySession session_a = party_a.SessionFor(half_a);
  PartySession session_b = party_b.SessionFor(half_b);
  const Outcome outcome =
      run_comparison(Variant::kP3, session_a, session_b, transport);

  party_a.Record({round, id_a, outcome}, half_a);
  party_b.Record({round, id_b, outcome}, half_b);
  bidder_to_a.b->Send(AuctionResult{round, outcome});
  const AuctionResult ack = bidder_to_a.a->Expect<AuctionResult>();
  if (ack.round != round || ack.result != outcome) {
    throw ProtocolError("auction result does not match the comparison");
  }
  return outcome;
}

// Opens the high-bid shares and reconstructs the winning amount.
inline std::uint64_t close_auction(const AuctionParty& party_a,
                                   const AuctionParty& party_b) {
  try {
    return reconstruct_integer(party_a.high_shares(), party_b.high_shares(),
                               plaintext_modulus(party_a.pk()));
  } catch (const IntegrityError& e) {
    throw IntegrityError(std::string("auction audit failure: ") + e.what());
  }
}

// An auction with in-process channels between the two parties and a bidder.
class Auction {
 public:
  Auction(const KeyPair& keys, std::uint64_t seed, SubmitOptions options = {})
      : parties_(open_auction(keys, seed)),
        options_(options),
        transport_(make_in_process_pair()),
        bidder_to_a_(make_in_process_pair()),
        bidder_to_b_(make_in_process_pair()),
        bidder_rng_(seed ^ 0x9e3779b97f4a7c15ULL) {}

  Outcome Submit(const BidSubmission& bid) {
    return submit_bid(parties_.a, parties_.b, bid, transport_, bidder_to_a_,
                      bidder_to_b_, options_);
  }

  // Shares a plaintext bid on the bidder's behalf, then submits it.
  Outcome SubmitValue(std::string bidder_id, std::uint64_t value) {
    return Submit(make_bid(std::move(bidder_id), value, parties_.a.pk(),
                           bidder_rng_));
  }

  std::uint64_t Close() const { return close_auction(parties_.a, parties_.b); }

  const AuctionParty& party_a() const { return parties_.a; }
  const AuctionParty& party_b() const { return parties_.b; }

 private:
  AuctionParties parties_;
  SubmitOptions options_;
  EndpointPair transport_;
  EndpointPair bidder_to_a_;
  EndpointPair bidder_to_b_;
  Rng bidder_rng_;
};

}  // namespace seccmp

#endif  // SECCMP_AUCTION_HPP_

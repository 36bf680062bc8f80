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

// seccmp command-line tool: key generation, single comparisons, the
// benchmark, a scripted auction, share dealing and two-process parties.

#include <sodium.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seccmp/seccmp.hpp"

namespace {

using namespace seccmp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

// Failure reported with an explicit exit code.
struct Exit {
  int code;
  std::string message;
};

struct KeyOptions {
  std::string keys_path;
  std::size_t k = Params{}.k;
  std::size_t t = Params{}.t;
  std::size_t l = Params{}.l;
  bool allow_tiny = false;
};

void AddKeyOptions(CLI::App* cmd, KeyOptions& o) {
  cmd->add_option("--keys", o.keys_path, "Key file (JSON)");
  cmd->add_option("--k", o.k, "Modulus bits when generating a key");
  cmd->add_option("--t", o.t, "Bits of v when generating a key");
  cmd->add_option("--l", o.l, "Bit length of compared integers");
  cmd->add_flag("--test-allow-tiny-keys", o.allow_tiny,
                "Permit insecure toy parameters");
}

std::uint64_t SeedOrEntropy(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::uint64_t s = 0;
  randombytes_buf(&s, sizeof(s));
  return s;
}

KeyPair LoadOrGenerate(const KeyOptions& o, std::uint64_t seed,
                       bool need_secret = true) {
  if (!o.keys_path.empty()) {
    KeyFile f = read_key_file(o.keys_path);
    if (need_secret && !f.sk) {
      throw Exit{kExitUsage, "key file has no secret part: " + o.keys_path};
    }
    KeyPair keys{f.pk, f.sk.value_or(SecretKey{})};
    return keys;
  }
  Rng rng(derive_seed(seed, "seccmp/cli-keygen"));
  return generate_keys(Params{o.k, o.t, o.l}, rng,
                       KeygenOptions{.allow_tiny = o.allow_tiny});
}

void CheckRange(std::uint64_t v, std::size_t l, const char* name) {
  if (l < 64 && v >> l != 0) {
    throw Exit{kExitUsage, std::string(name) + " must be below 2^" +
                               std::to_string(l)};
  }
}

Variant ParseVariant(const std::string& s) {
  if (s == "p1") return Variant::kP1;
  if (s == "p3") return Variant::kP3;
  throw Exit{kExitUsage, "unknown protocol " + s};
}

std::string Digest(const std::vector<TranscriptEntry>& transcript) {
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, 32);
  for (const auto& e : transcript) {
    const unsigned char dir = e.direction == Direction::kSent ? 'S' : 'R';
    crypto_generichash_update(&st, &dir, 1);
    crypto_generichash_update(&st, e.bytes.data(), e.bytes.size());
  }
  unsigned char out[32];
  crypto_generichash_final(&st, out, sizeof(out));
  char hex[65];
  sodium_bin2hex(hex, sizeof(hex), out, sizeof(out));
  return hex;
}

void PrintCounters(const char* who, const OpCounters& c) {
  std::cout << who << ": encryptions=" << c.encryptions
            << " full_decryptions=" << c.full_decryptions
            << " zero_checks=" << c.zero_checks << " modexps=" << c.modexps
            << '\n';
}

void PrintReport(const ValidationReport& report) {
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
  }
  std::cout << (report.all_passed() ? "validate: all checks passed"
                                    : "validate: FAILED")
            << '\n';
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{kExitUsage, "cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw Exit{kExitUsage, "cannot write " + path};
}

// Strict decimal parse of a whole (trimmed) line.
std::optional<std::uint64_t> ParseDecimal(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.pop_back();
  }
  std::size_t start = s.find_first_not_of(" \t");
  if (start == std::string::npos) return std::nullopt;
  s = s.substr(start);
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw Exit{kExitUsage, ""};
  }
  return v;
}

bool IsBlank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

// Share file: one decimal residue per line, l lines, LSB first.
SharedInteger ReadShares(const std::string& path, const PublicKey& pk) {
  std::istringstream lines(ReadText(path));
  std::vector<Residue> shares;
  std::string line;
  std::size_t number = 0;
  const Residue u = plaintext_modulus(pk);
  while (std::getline(lines, line)) {
    ++number;
    if (IsBlank(line)) continue;
    std::optional<std::uint64_t> v;
    try {
      v = ParseDecimal(line);
    } catch (const Exit&) {
      throw Exit{kExitUsage, path + ":" + std::to_string(number) +
                                 ": not a decimal residue"};
    }
    if (*v >= u) {
      throw Exit{kExitUsage,
                 path + ":" + std::to_string(number) + ": residue not below u"};
    }
    shares.push_back(*v);
  }
  if (shares.size() != pk.params.l) {
    throw Exit{kExitUsage, path + ": expected " + std::to_string(pk.params.l) +
                               " residues, found " +
                               std::to_string(shares.size())};
  }
  return SharedInteger(std::move(shares));
}

std::string SharesText(const SharedInteger& s) {
  std::string out;
  for (Residue r : s.lsb_first()) out += std::to_string(r) + '\n';
  return out;
}

std::pair<std::string, std::uint16_t> ParseAddress(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw Exit{kExitUsage, "address must be host:port, got " + addr};
  }
  unsigned port = 0;
  const std::string p = addr.substr(colon + 1);
  auto [end, ec] = std::from_chars(p.data(), p.data() + p.size(), port);
  if (ec != std::errc() || end != p.data() + p.size() || port > 65535) {
    throw Exit{kExitUsage, "bad port in " + addr};
  }
  return {addr.substr(0, colon), static_cast<std::uint16_t>(port)};
}

// ---- subcommands -----------------------------------------------------------

struct KeygenArgs {
  KeyOptions key;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string public_out;
  bool toy = false;
};

int RunKeygen(const KeygenArgs& a) {
  if (a.toy && !a.key.allow_tiny) {
    throw Exit{kExitUsage, "--toy requires --test-allow-tiny-keys"};
  }
  KeyPair keys;
  if (a.toy) {
    keys = toy_key();
  } else {
    Rng rng(SeedOrEntropy(a.seed));
    keys = generate_keys(Params{a.key.k, a.key.t, a.key.l}, rng,
                         KeygenOptions{.allow_tiny = a.key.allow_tiny});
  }
  write_key_file(a.out, keys.pk, &keys.sk);
  if (!a.public_out.empty()) write_key_file(a.public_out, keys.pk, nullptr);
  const ValidationReport report = validate_keys(keys.pk, keys.sk);
  PrintReport(report);
  return report.all_passed() ? kExitOk : kExitFailure;
}

struct CompareArgs {
  KeyOptions key;
  std::string protocol = "p3";
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::optional<std::uint64_t> seed;
  std::string transport = "mem";
};

int RunCompare(const CompareArgs& a) {
  const Variant variant = ParseVariant(a.protocol);
  if (a.transport != "mem" && a.transport != "tcp") {
    throw Exit{kExitUsage, "transport must be mem or tcp"};
  }
  const std::uint64_t seed = SeedOrEntropy(a.seed);
  ComparisonKeys keys = ComparisonKeys::WithTable(LoadOrGenerate(a.key, seed));
  CheckRange(a.x, keys.keys.pk.params.l, "x");
  CheckRange(a.y, keys.keys.pk.params.l, "y");
  const ComparisonResult r = compare_values(variant, keys, a.x, a.y, seed,
                                            nullptr, a.transport == "tcp");
  std::cout << "outcome=" << to_string(r.outcome) << '\n';
  PrintCounters("A", r.counters_a);
  PrintCounters("B", r.counters_b);
  std::cout << "frames=" << r.transcript_a.size()
            << " transcript=" << Digest(r.transcript_a) << '\n';
  return kExitOk;
}

struct BenchArgs {
  KeyOptions key;
  std::size_t reps = 20;
  std::optional<std::uint64_t> seed;
  std::string machine_out;
};

int RunBench(const BenchArgs& a) {
  if (a.reps < 1) throw Exit{kExitUsage, "--reps must be >= 1"};
  const std::uint64_t seed = SeedOrEntropy(a.seed);
  const ComparisonKeys keys =
      ComparisonKeys::WithTable(LoadOrGenerate(a.key, seed));
  const BenchReport report = run_bench(keys, a.reps, seed);
  std::cout << to_table(report);
  const std::string machine = to_machine_format(report);
  if (a.machine_out.empty()) {
    std::cout << '\n' << machine;
  } else {
    WriteText(a.machine_out, machine);
  }
  const std::size_t l = report.params.l;
  if (!counters_match_formula(report.p1, l, a.reps) ||
      !counters_match_formula(report.p3, l, a.reps) ||
      report.p1.oracle_mismatches + report.p3.oracle_mismatches != 0) {
    std::cerr << "bench: counters or outcomes disagree with expectations\n";
    return kExitFailure;
  }
  return kExitOk;
}

struct AuctionArgs {
  KeyOptions key;
  std::string bids;
  std::optional<std::uint64_t> seed;
};

int RunAuction(const AuctionArgs& a) {
  std::istringstream lines(ReadText(a.bids));
  const std::uint64_t seed = SeedOrEntropy(a.seed);
  const KeyPair keys = LoadOrGenerate(a.key, seed);
  const std::size_t l = keys.pk.params.l;

  std::vector<std::pair<std::size_t, std::uint64_t>> bids;
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    if (IsBlank(line)) continue;
    std::optional<std::uint64_t> v;
    try {
      v = ParseDecimal(line);
    } catch (const Exit&) {
      throw Exit{kExitUsage, a.bids + ":" + std::to_string(number) +
                                 ": not a decimal bid"};
    }
    if (l < 64 && *v >> l != 0) {
      throw Exit{kExitUsage, a.bids + ":" + std::to_string(number) +
                                 ": bid must be below 2^" + std::to_string(l)};
    }
    bids.emplace_back(number, *v);
  }

  Auction auction(keys, seed);
  for (const auto& [line_no, value] : bids) {
    const std::uint32_t round = auction.party_a().next_round();
    const Outcome o = auction.SubmitValue("line" + std::to_string(line_no), value);
    std::cout << "round=" << round << " bidder=line" << line_no
              << " outcome=" << to_string(o) << '\n';
  }
  const std::uint64_t winner = auction.Close();
  const auto lead = auction.party_a().leading_round();
  std::cout << "winner=" << winner;
  if (lead) {
    std::cout << " round=" << *lead << " bidder="
              << auction.party_a().history()[*lead - 1].bidder_id;
  }
  std::cout << '\n';
  return kExitOk;
}

struct DealArgs {
  KeyOptions key;
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  std::optional<std::uint64_t> seed;
  std::string prefix;
};

int RunDeal(const DealArgs& a) {
  if (a.key.keys_path.empty()) throw Exit{kExitUsage, "--keys is required"};
  const std::uint64_t seed = SeedOrEntropy(a.seed);
  const KeyFile f = read_key_file(a.key.keys_path);
  CheckRange(a.x, f.pk.params.l, "x");
  CheckRange(a.y, f.pk.params.l, "y");
  const DealtShares d = deal_shares(f.pk, a.x, a.y, seed);
  WriteText(a.prefix + "x_a.txt", SharesText(d.x.a));
  WriteText(a.prefix + "y_a.txt", SharesText(d.y.a));
  WriteText(a.prefix + "x_b.txt", SharesText(d.x.b));
  WriteText(a.prefix + "y_b.txt", SharesText(d.y.b));
  std::cout << "wrote " << a.prefix << "{x,y}_{a,b}.txt\n";
  return kExitOk;
}

struct PartyArgs {
  std::string role;
  std::string listen;
  std::string connect;
  std::string keys;
  std::string x_shares;
  std::string y_shares;
  std::string protocol = "p3";
  std::uint64_t seed = 0;
  int timeout_ms = 30000;
  std::uint32_t version = kProtocolVersion;
};

int RunParty(const PartyArgs& a) {
  const Role role = a.role == "a"   ? Role::kA
                    : a.role == "b" ? Role::kB
                                    : throw Exit{kExitUsage, "--role must be a or b"};
  if (a.listen.empty() == a.connect.empty()) {
    throw Exit{kExitUsage, "give exactly one of --listen or --connect"};
  }
  const Variant variant = ParseVariant(a.protocol);
  const KeyFile f = read_key_file(a.keys);
  if (role == Role::kA && !f.sk) {
    throw Exit{kExitUsage, "party a needs the secret key"};
  }
  SharedInteger xs = ReadShares(a.x_shares, f.pk);
  SharedInteger ys = ReadShares(a.y_shares, f.pk);
  Rng rng(party_seed(a.seed, role));
  std::optional<PartySession> session;
  if (role == Role::kA) {
    std::shared_ptr<const DecryptionTable> table;
    if (variant == Variant::kP1) {
      table = std::make_shared<const DecryptionTable>(build_table(f.pk, *f.sk));
    }
    session.emplace(PartySession::ForA(f.pk, *f.sk, table, std::move(xs),
                                       std::move(ys), std::move(rng)));
  } else {
    session.emplace(PartySession::ForB(f.pk, std::move(xs), std::move(ys),
                                       std::move(rng)));
  }

  const auto timeout = std::chrono::milliseconds(a.timeout_ms);
  std::unique_ptr<TcpEndpoint> ep;
  if (!a.listen.empty()) {
    const auto [host, port] = ParseAddress(a.listen);
    TcpListener listener(host, port);
    std::cerr << "listening on " << host << ':' << listener.port() << std::endl;
    ep = listener.Accept(timeout, a.version);
  } else {
    const auto [host, port] = ParseAddress(a.connect);
    ep = tcp_connect(host, port, timeout, a.version);
  }
  const Outcome outcome = run_party(*session, variant, *ep);
  std::cout << "outcome=" << to_string(outcome) << '\n';
  std::cout << "frames=" << ep->transcript().size()
            << " transcript=" << Digest(ep->transcript()) << '\n';
  ep->Close();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (sodium_init() < 0) {
    std::cerr << "error: libsodium initialisation failed\n";
    return kExitFailure;
  }
  CLI::App app{"Two-party secure integer comparison"};
  app.require_subcommand(1);

  KeygenArgs keygen;
  auto* c_keygen = app.add_subcommand("keygen", "Generate and validate a key");
  c_keygen->add_option("--k", keygen.key.k, "Modulus bits");
  c_keygen->add_option("--t", keygen.key.t, "Bits of v");
  c_keygen->add_option("--l", keygen.key.l, "Bit length of compared integers");
  c_keygen->add_option("--seed", keygen.seed, "RNG seed (default: OS entropy)");
  c_keygen->add_option("--out", keygen.out, "Key file to write")->required();
  c_keygen->add_option("--public-out", keygen.public_out, "Public key file");
  c_keygen->add_flag("--test-allow-tiny-keys", keygen.key.allow_tiny,
                     "Permit insecure toy parameters");
  c_keygen->add_flag("--toy", keygen.toy, "Write the fixed l=2, u=11 toy key");

  CompareArgs compare;
  auto* c_compare = app.add_subcommand("compare", "Run one comparison");
  AddKeyOptions(c_compare, compare.key);
  c_compare->add_option("--protocol", compare.protocol, "p1 or p3")
      ->check(CLI::IsMember({"p1", "p3"}));
  c_compare->add_option("--x", compare.x, "A's reference value X")->required();
  c_compare->add_option("--y", compare.y, "Value Y tested for Y > X")->required();
  c_compare->add_option("--seed", compare.seed, "RNG seed");
  c_compare->add_option("--transport", compare.transport, "mem or tcp")
      ->check(CLI::IsMember({"mem", "tcp"}));

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Time both protocols");
  AddKeyOptions(c_bench, bench.key);
  c_bench->add_option("--reps", bench.reps, "Comparisons per protocol");
  c_bench->add_option("--seed", bench.seed, "RNG seed");
  c_bench->add_option("--machine-out", bench.machine_out,
                      "Write key=value records here instead of stdout");

  AuctionArgs auction;
  auto* c_auction = app.add_subcommand("auction", "Run a scripted auction");
  AddKeyOptions(c_auction, auction.key);
  c_auction->add_option("--bids", auction.bids, "One decimal bid per line")
      ->required();
  c_auction->add_option("--seed", auction.seed, "RNG seed");

  DealArgs deal;
  auto* c_deal = app.add_subcommand("deal", "Write share files for x and y");
  c_deal->add_option("--keys", deal.key.keys_path, "Key file")->required();
  c_deal->add_option("--x", deal.x, "Value X")->required();
  c_deal->add_option("--y", deal.y, "Value Y")->required();
  c_deal->add_option("--seed", deal.seed, "RNG seed");
  c_deal->add_option("--prefix", deal.prefix, "Output path prefix");

  PartyArgs party;
  auto* c_party = app.add_subcommand("party", "Run one side over TCP");
  c_party->add_option("--role", party.role, "a or b")
      ->required()
      ->check(CLI::IsMember({"a", "b"}));
  c_party->add_option("--listen", party.listen, "host:port to accept on");
  c_party->add_option("--connect", party.connect, "host:port to dial");
  c_party->add_option("--keys", party.keys, "Key file")->required();
  c_party->add_option("--x-shares", party.x_shares, "Share file for X")
      ->required();
  c_party->add_option("--y-shares", party.y_shares, "Share file for Y")
      ->required();
  c_party->add_option("--protocol", party.protocol, "p1 or p3")
      ->check(CLI::IsMember({"p1", "p3"}));
  c_party->add_option("--seed", party.seed, "RNG seed (equal on both sides)");
  c_party->add_option("--timeout-ms", party.timeout_ms, "Connect/receive timeout");
  c_party->add_option("--protocol-version", party.version)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c_keygen) return RunKeygen(keygen);
    if (*c_compare) return RunCompare(compare);
    if (*c_bench) return RunBench(bench);
    if (*c_auction) return RunAuction(auction);
    if (*c_deal) return RunDeal(deal);
    if (*c_party) return RunParty(party);
  } catch (const Exit& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigurationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

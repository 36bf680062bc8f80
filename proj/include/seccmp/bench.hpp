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

#ifndef SECCMP_BENCH_HPP_
#define SECCMP_BENCH_HPP_

// Per-comparison cost of the two comparison variants: wall-clock timings
// plus exact operation counts for each party. Key generation and the
// decryption-table build are one-time setup and are not timed.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <chrono>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "seccmp/comparison.hpp"
#include "seccmp/errors.hpp"
#include "seccmp/keygen.hpp"

namespace seccmp {

struct VariantStats {
  Variant variant = Variant::kP3;
  std::vector<double> samples_ms;
  OpCounters totals_a;
  OpCounters totals_b;
  std::uint64_t oracle_mismatches = 0;

  double mean_ms() const {
    if (samples_ms.empty()) return 0;
    return std::accumulate(samples_ms.begin(), samples_ms.end(), 0.0) /
           static_cast<double>(samples_ms.size());
  }

  double median_ms() const {
    if (samples_ms.empty()) return 0;
    std::vector<double> s = samples_ms;
    std::sort(s.begin(), s.end());
    const std::size_t mid = s.size() / 2;
    return s.size() % 2 == 1 ? s[mid] : (s[mid - 1] + s[mid]) / 2;
  }

  friend bool operator==(const VariantStats&, const VariantStats&) = default;
};

struct BenchReport {
  Params params;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  VariantStats p1{Variant::kP1, {}, {}, {}, 0};
  VariantStats p3{Variant::kP3, {}, {}, {}, 0};

  friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

// Exact per-comparison counts for party A: P1 = (3l enc, 2l dec, l zero),
// P3 = (l enc, 0 dec, l zero).
struct ExpectedCost {
  std::uint64_t encryptions;
  std::uint64_t full_decryptions;
  std::uint64_t zero_checks;
};

inline ExpectedCost expected_cost_a(Variant v, std::size_t l) {
  if (v == Variant::kP1) return {3 * l, 2 * l, l};
  return {l, 0, l};
}

inline bool counters_match_formula(const VariantStats& stats, std::size_t l,
                                   std::size_t reps) {
  const ExpectedCost e = expected_cost_a(stats.variant, l);
  return stats.totals_a.encryptions == e.encryptions * reps &&
         stats.totals_a.full_decryptions == e.full_decryptions * reps &&
         stats.totals_a.zero_checks == e.zero_checks * reps;
}

inline BenchReport run_bench(const ComparisonKeys& keys, std::size_t reps,
                             std::uint64_t seed) {
  if (reps < 1) throw ParameterError("reps must be >= 1");
  BenchReport report;
  report.params = keys.keys.pk.params;
  report.reps = reps;
  report.seed = seed;
  const std::size_t l = report.params.l;

  Rng inputs(derive_seed(seed, "seccmp/bench-inputs"));
  struct Case {
    std::uint64_t x, y, seed;
  };
  std::vector<Case> cases(reps);
  for (auto& c : cases) {
    c.x = inputs.UniformBelow(std::uint64_t{1} << l);
    c.y = inputs.UniformBelow(std::uint64_t{1} << l);
    c.seed = inputs.NextU64();
  }

  for (VariantStats* stats : {&report.p1, &report.p3}) {
    for (const auto& c : cases) {
      const auto start = std::chrono::steady_clock::now();
      const ComparisonResult r = compare_values(stats->variant, keys, c.x, c.y,
                                                c.seed);
      const auto stop = std::chrono::steady_clock::now();
      stats->samples_ms.push_back(
          std::chrono::duration<double, std::milli>(stop - start).count());
      stats->totals_a += r.counters_a;
      stats->totals_b += r.counters_b;
      const Outcome oracle = c.y > c.x ? Outcome::kGreater : Outcome::kNotGreater;
      if (r.outcome != oracle) ++stats->oracle_mismatches;
    }
  }
  return report;
}

namespace detail {

inline std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

inline double ParseDouble(std::string_view s) {
  double v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ParameterError("bad number in bench record: " + std::string(s));
  }
  return v;
}

inline std::uint64_t ParseU64(std::string_view s) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ParameterError("bad integer in bench record: " + std::string(s));
  }
  return v;
}

inline void AppendCounters(std::ostringstream& out, std::string_view party,
                           const OpCounters& c) {
  out << ' ' << party << "_enc=" << c.encryptions << ' ' << party
      << "_dec=" << c.full_decryptions << ' ' << party
      << "_zero=" << c.zero_checks << ' ' << party << "_modexp=" << c.modexps;
}

inline OpCounters ReadCounters(const std::map<std::string, std::string>& kv,
                               const std::string& party) {
  auto get = [&](const std::string& key) {
    auto it = kv.find(party + key);
    if (it == kv.end()) throw ParameterError("bench record missing " + party + key);
    return ParseU64(it->second);
  };
  return {get("_enc"), get("_dec"), get("_zero"), get("_modexp")};
}

}  // namespace detail

// Line-oriented key=value records: one `record=params` line, then one
// `record=variant` line per variant. Totals are over all repetitions.
inline std::string to_machine_format(const BenchReport& r) {
  std::ostringstream out;
  out << "record=params k=" << r.params.k << " t=" << r.params.t
      << " l=" << r.params.l << " reps=" << r.reps << " seed=" << r.seed << '\n';
  for (const VariantStats* s : {&r.p1, &r.p3}) {
    out << "record=variant variant=" << to_string(s->variant)
        << " mean_ms=" << detail::FormatDouble(s->mean_ms())
        << " median_ms=" << detail::FormatDouble(s->median_ms());
    detail::AppendCounters(out, "a", s->totals_a);
    detail::AppendCounters(out, "b", s->totals_b);
    out << " mismatches=" << s->oracle_mismatches << " samples_ms=";
    for (std::size_t i = 0; i < s->samples_ms.size(); ++i) {
      if (i > 0) out << ',';
      out << detail::FormatDouble(s->samples_ms[i]);
    }
    out << '\n';
  }
  return out.str();
}

inline BenchReport parse_machine_format(const std::string& text) {
  BenchReport report;
  bool have_params = false, have_p1 = false, have_p3 = false;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::map<std::string, std::string> kv;
    std::istringstream fields(line);
    std::string field;
    while (fields >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) {
        throw ParameterError("bench record field without '=': " + field);
      }
      kv[field.substr(0, eq)] = field.substr(eq + 1);
    }
    auto need = [&](const std::string& key) -> const std::string& {
      auto it = kv.find(key);
      if (it == kv.end()) throw ParameterError("bench record missing " + key);
      return it->second;
    };
    const std::string& kind = need("record");
    if (kind == "params") {
      report.params = Params{detail::ParseU64(need("k")),
                             detail::ParseU64(need("t")),
                             detail::ParseU64(need("l"))};
      report.reps = detail::ParseU64(need("reps"));
      report.seed = detail::ParseU64(need("seed"));
      have_params = true;
    } else if (kind == "variant") {
      const std::string& name = need("variant");
      VariantStats* s = nullptr;
      if (name == "P1") {
        s = &report.p1;
        have_p1 = true;
      } else if (name == "P3") {
        s = &report.p3;
        have_p3 = true;
      } else {
        throw ParameterError("unknown bench variant " + name);
      }
      s->totals_a = detail::ReadCounters(kv, "a");
      s->totals_b = detail::ReadCounters(kv, "b");
      s->oracle_mismatches = detail::ParseU64(need("mismatches"));
      s->samples_ms.clear();
      std::istringstream samples(need("samples_ms"));
      std::string item;
      while (std::getline(samples, item, ',')) {
        s->samples_ms.push_back(detail::ParseDouble(item));
      }
    } else {
      throw ParameterError("unknown bench record kind " + kind);
    }
  }
  if (!have_params || !have_p1 || !have_p3) {
    throw ParameterError("bench output incomplete");
  }
  return report;
}

inline std::string to_table(const BenchReport& r) {
  std::ostringstream out;
  out << "k=" << r.params.k << " t=" << r.params.t << " l=" << r.params.l
      << " reps=" << r.reps << " seed=" << r.seed << '\n';
  char row[256];
  std::snprintf(row, sizeof(row), "%-8s %10s %10s %8s %8s %8s %10s %8s %10s\n",
                "variant", "mean_ms", "median_ms", "A_enc", "A_dec", "A_zero",
                "A_modexp", "B_enc", "B_modexp");
  out << row;
  for (const VariantStats* s : {&r.p1, &r.p3}) {
    const double reps = static_cast<double>(std::max<std::size_t>(r.reps, 1));
    std::snprintf(row, sizeof(row),
                  "%-8s %10.3f %10.3f %8.1f %8.1f %8.1f %10.1f %8.1f %10.1f\n",
                  std::string(to_string(s->variant)).c_str(), s->mean_ms(),
                  s->median_ms(), s->totals_a.encryptions / reps,
                  s->totals_a.full_decryptions / reps,
                  s->totals_a.zero_checks / reps, s->totals_a.modexps / reps,
                  s->totals_b.encryptions / reps, s->totals_b.modexps / reps);
    out << row;
  }
  if (r.p1.median_ms() > 0) {
    std::snprintf(row, sizeof(row), "median ratio P3/P1 = %.3f\n",
                  r.p3.median_ms() / r.p1.median_ms());
    out << row;
  }
  out << "(counts are per comparison)\n";
  return out.str();
}

}  // namespace seccmp

#endif  // SECCMP_BENCH_HPP_

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

#ifndef SECCMP_COUNTERS_HPP_
#define SECCMP_COUNTERS_HPP_

#include <cstdint>

namespace seccmp {

// Per-party tallies of the expensive operations. One instance per party
// session; pass a pointer into each instrumented call.
struct OpCounters {
  std::uint64_t encryptions = 0;
  std::uint64_t full_decryptions = 0;
  std::uint64_t zero_checks = 0;
  std::uint64_t modexps = 0;

  OpCounters& operator+=(const OpCounters& other) {
    encryptions += other.encryptions;
    full_decryptions += other.full_decryptions;
    zero_checks += other.zero_checks;
    modexps += other.modexps;
    return *this;
  }

  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

}  // namespace seccmp

#endif  // SECCMP_COUNTERS_HPP_

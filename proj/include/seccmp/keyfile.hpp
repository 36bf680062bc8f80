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

#ifndef SECCMP_KEYFILE_HPP_
#define SECCMP_KEYFILE_HPP_

// JSON key files: {"k","t","l","n","g","h","u"} plus {"p","q","v_p","v_q"}
// for full keys. Big integers are base-10 strings.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "seccmp/errors.hpp"
#include "seccmp/keygen.hpp"

namespace seccmp {

struct KeyFile {
  PublicKey pk;
  std::optional<SecretKey> sk;
};

inline std::string key_file_json(const PublicKey& pk, const SecretKey* sk) {
  nlohmann::json j;
  j["k"] = pk.params.k;
  j["t"] = pk.params.t;
  j["l"] = pk.params.l;
  j["n"] = to_decimal(pk.n);
  j["g"] = to_decimal(pk.g);
  j["h"] = to_decimal(pk.h);
  j["u"] = to_decimal(pk.u);
  if (sk != nullptr) {
    j["p"] = to_decimal(sk->p);
    j["q"] = to_decimal(sk->q);
    j["v_p"] = to_decimal(sk->v_p);
    j["v_q"] = to_decimal(sk->v_q);
  }
  return j.dump(2) + "\n";
}

inline KeyFile parse_key_file(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("key file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParameterError("key file must be a JSON object");
  auto number = [&](const char* name) -> std::size_t {
    if (!j.contains(name) || !j[name].is_number_unsigned()) {
      throw ParameterError(std::string("key file: missing or bad field ") + name);
    }
    return j[name].get<std::size_t>();
  };
  auto big = [&](const char* name) -> BigUint {
    if (!j.contains(name) || !j[name].is_string()) {
      throw ParameterError(std::string("key file: missing or bad field ") + name);
    }
    return from_decimal(j[name].get<std::string>());
  };

  KeyFile out;
  out.pk.params = Params{number("k"), number("t"), number("l")};
  if (out.pk.params.l < 1 || out.pk.params.l > kMaxBitLength) {
    throw ParameterError("key file: l out of range");
  }
  out.pk.n = big("n");
  out.pk.g = big("g");
  out.pk.h = big("h");
  out.pk.u = big("u");
  const bool has_secret = j.contains("p") || j.contains("q") ||
                          j.contains("v_p") || j.contains("v_q");
  if (has_secret) {
    SecretKey sk;
    sk.p = big("p");
    sk.q = big("q");
    sk.v_p = big("v_p");
    sk.v_q = big("v_q");
    sk.v = sk.v_p * sk.v_q;
    out.sk = sk;
  }
  return out;
}

inline void write_key_file(const std::string& path, const PublicKey& pk,
                           const SecretKey* sk) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open key file for writing: " + path);
  out << key_file_json(pk, sk);
  if (!out) throw Error("failed writing key file: " + path);
}

inline KeyFile read_key_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open key file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_file(buf.str());
}

}  // namespace seccmp

#endif  // SECCMP_KEYFILE_HPP_

/*
 * Copyright 2026 The BDFL Authors.
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

#include "bdfl/crypto/serialization.h"

#include <string>

#include "bdfl/error.h"

namespace bdfl::crypto {
namespace {

mpz_class ParseInteger(const nlohmann::json& j, const char* field, int base) {
  if (!j.contains(field) || !j.at(field).is_string()) {
    throw CryptoError(std::string("missing big-integer field '") + field + "'");
  }
  mpz_class v;
  if (v.set_str(j.at(field).get<std::string>(), base) != 0) {
    throw CryptoError(std::string("malformed big-integer field '") + field +
                      "'");
  }
  return v;
}

int ParseInt(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_number_integer()) {
    throw CryptoError(std::string("missing integer field '") + field + "'");
  }
  return j.at(field).get<int>();
}

}  // namespace

nlohmann::json PublicKeyToJson(const PublicKey& pk) {
  return {{"n", pk.n().get_str(10)},
          {"g", pk.g().get_str(10)},
          {"key_bits", pk.key_bits()}};
}

PublicKey PublicKeyFromJson(const nlohmann::json& j) {
  mpz_class n = ParseInteger(j, "n", 10);
  PublicKey pk(std::move(n), ParseInt(j, "key_bits"));
  if (j.contains("g") && ParseInteger(j, "g", 10) != pk.g()) {
    throw CryptoError("only the generator g = n + 1 is supported");
  }
  return pk;
}

nlohmann::json PrivateKeyToJson(const PrivateKey& sk) {
  nlohmann::json j = {{"lambda", sk.lambda().get_str(10)},
                      {"mu", sk.mu().get_str(10)}};
  if (sk.p() && sk.q()) {
    j["p"] = sk.p()->get_str(10);
    j["q"] = sk.q()->get_str(10);
  }
  return j;
}

PrivateKey PrivateKeyFromJson(const PublicKey& pk, const nlohmann::json& j) {
  if (j.contains("p") && j.contains("q")) {
    return PrivateKey::FromPrimes(pk, ParseInteger(j, "p", 10),
                                  ParseInteger(j, "q", 10));
  }
  return PrivateKey::FromLambdaMu(pk, ParseInteger(j, "lambda", 10),
                                  ParseInteger(j, "mu", 10));
}

nlohmann::json CiphertextToJson(const Ciphertext& c) {
  return {{"value", c.value().get_str(16)},
          {"exponent", c.exponent()},
          {"bound", c.bound().get_str(16)}};
}

Ciphertext CiphertextFromJson(const PublicKey& pk, const nlohmann::json& j) {
  mpz_class value = ParseInteger(j, "value", 16);
  if (value <= 0 || value >= pk.n_squared()) {
    throw CryptoError("ciphertext value outside (0, n^2)");
  }
  mpz_class bound =
      j.contains("bound") ? ParseInteger(j, "bound", 16) : pk.max_magnitude();
  return Ciphertext(pk, std::move(value), ParseInt(j, "exponent"),
                    std::move(bound));
}

}  // namespace bdfl::crypto

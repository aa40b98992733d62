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

#ifndef BDFL_CRYPTO_SERIALIZATION_H_
#define BDFL_CRYPTO_SERIALIZATION_H_

#include <json.hpp>

#include "bdfl/crypto/paillier.h"

namespace bdfl::crypto {

// {"n": decimal, "g": decimal, "key_bits": int}
nlohmann::json PublicKeyToJson(const PublicKey& pk);
PublicKey PublicKeyFromJson(const nlohmann::json& j);

// {"lambda": decimal, "mu": decimal} plus "p" and "q" when the CRT form is
// available. Either shape is accepted on input.
nlohmann::json PrivateKeyToJson(const PrivateKey& sk);
PrivateKey PrivateKeyFromJson(const PublicKey& pk, const nlohmann::json& j);

// {"value": hex, "exponent": int, "bound": hex}. A missing "bound" is read as
// the largest admissible magnitude.
nlohmann::json CiphertextToJson(const Ciphertext& c);
Ciphertext CiphertextFromJson(const PublicKey& pk, const nlohmann::json& j);

}  // namespace bdfl::crypto

#endif  // BDFL_CRYPTO_SERIALIZATION_H_

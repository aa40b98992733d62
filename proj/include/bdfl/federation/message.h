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

#ifndef BDFL_FEDERATION_MESSAGE_H_
#define BDFL_FEDERATION_MESSAGE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bdfl/crypto/paillier.h"

namespace bdfl::federation {

enum class PartyRole { kHostA, kGuestB, kArbiterC };

std::string_view RoleName(PartyRole role);
PartyRole ParseRole(std::string_view name);

enum class MessageKind {
  kPubKey,
  kEncUa,
  kEncD,
  kEncGrad,
  kEncLoss,
  kPlainGrad,
  kPlainLoss,
  kConverged,
  kHalt,
};

std::string_view KindName(MessageKind kind);
MessageKind ParseKind(std::string_view name);

struct PubKeyPayload {
  crypto::PublicKey key;
};
// [[u_A[i]]] and [[u_A[i]^2]] for every row of the round's batch.
struct EncUaPayload {
  std::vector<crypto::Ciphertext> u;
  std::vector<crypto::Ciphertext> u_squared;
};
struct EncDPayload {
  std::vector<crypto::Ciphertext> d;
};
struct EncGradPayload {
  PartyRole owner;
  std::vector<crypto::Ciphertext> g;
};
struct EncLossPayload {
  crypto::Ciphertext loss;
};
struct PlainGradPayload {
  PartyRole owner;
  std::vector<double> g;
};
struct PlainLossPayload {
  double loss;
};
struct ConvergedPayload {
  bool converged;
};
struct HaltPayload {};

using Payload =
    std::variant<PubKeyPayload, EncUaPayload, EncDPayload, EncGradPayload,
                 EncLossPayload, PlainGradPayload, PlainLossPayload,
                 ConvergedPayload, HaltPayload>;

struct Message {
  std::int64_t round = 0;
  PartyRole from = PartyRole::kArbiterC;
  PartyRole to = PartyRole::kArbiterC;
  Payload payload;

  MessageKind kind() const;
};

// Canonical position of a message within its round: PubKey to B then A at
// round 0; then EncUa, EncD, EncGrad(A), EncGrad(B), EncLoss, PlainGrad(A),
// PlainGrad(B), Converged(A->B), Converged(B->A), Halt.
int ProtocolStep(const Message& m);

struct WireFrame {
  // Compact JSON {round, from, to, kind, payload}.
  std::string bytes;
  // Hex SHA-256 of the serialized payload object.
  std::string payload_digest;
};

// Ciphertexts decode against `key`, which may only be absent for messages
// that carry none. Throws ProtocolError on malformed frames.
WireFrame Serialize(const Message& m);
Message Deserialize(std::string_view frame,
                    const std::optional<crypto::PublicKey>& key);

// Hex SHA-256 of `bytes`.
std::string Sha256Hex(std::string_view bytes);

}  // namespace bdfl::federation

#endif  // BDFL_FEDERATION_MESSAGE_H_

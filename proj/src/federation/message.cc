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

#include "bdfl/federation/message.h"

#include <sodium.h>

#include <array>
#include <json.hpp>

#include "bdfl/crypto/serialization.h"
#include "bdfl/error.h"

namespace bdfl::federation {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json CiphertextsToJson(const std::vector<crypto::Ciphertext>& cs) {
  json arr = json::array();
  for (const auto& c : cs) arr.push_back(crypto::CiphertextToJson(c));
  return arr;
}

const crypto::PublicKey& RequireKey(
    const std::optional<crypto::PublicKey>& key) {
  if (!key) throw ProtocolError("ciphertext frame received before the public key");
  return *key;
}

std::vector<crypto::Ciphertext> CiphertextsFromJson(
    const json& arr, const std::optional<crypto::PublicKey>& key) {
  const auto& pk = RequireKey(key);
  std::vector<crypto::Ciphertext> out;
  out.reserve(arr.size());
  for (const auto& j : arr) out.push_back(crypto::CiphertextFromJson(pk, j));
  return out;
}

json PayloadToJson(const Payload& payload) {
  return std::visit(
      Overloaded{
          [](const PubKeyPayload& p) -> json {
            return crypto::PublicKeyToJson(p.key);
          },
          [](const EncUaPayload& p) -> json {
            return {{"u", CiphertextsToJson(p.u)},
                    {"u_squared", CiphertextsToJson(p.u_squared)}};
          },
          [](const EncDPayload& p) -> json {
            return {{"d", CiphertextsToJson(p.d)}};
          },
          [](const EncGradPayload& p) -> json {
            return {{"owner", RoleName(p.owner)},
                    {"g", CiphertextsToJson(p.g)}};
          },
          [](const EncLossPayload& p) -> json {
            return {{"loss", crypto::CiphertextToJson(p.loss)}};
          },
          [](const PlainGradPayload& p) -> json {
            return {{"owner", RoleName(p.owner)}, {"g", p.g}};
          },
          [](const PlainLossPayload& p) -> json { return {{"loss", p.loss}}; },
          [](const ConvergedPayload& p) -> json {
            return {{"converged", p.converged}};
          },
          [](const HaltPayload&) -> json { return json::object(); },
      },
      payload);
}

Payload PayloadFromJson(MessageKind kind, const json& j,
                        const std::optional<crypto::PublicKey>& key) {
  switch (kind) {
    case MessageKind::kPubKey:
      return PubKeyPayload{crypto::PublicKeyFromJson(j)};
    case MessageKind::kEncUa:
      return EncUaPayload{CiphertextsFromJson(j.at("u"), key),
                          CiphertextsFromJson(j.at("u_squared"), key)};
    case MessageKind::kEncD:
      return EncDPayload{CiphertextsFromJson(j.at("d"), key)};
    case MessageKind::kEncGrad:
      return EncGradPayload{ParseRole(j.at("owner").get<std::string>()),
                            CiphertextsFromJson(j.at("g"), key)};
    case MessageKind::kEncLoss:
      return EncLossPayload{
          crypto::CiphertextFromJson(RequireKey(key), j.at("loss"))};
    case MessageKind::kPlainGrad:
      return PlainGradPayload{ParseRole(j.at("owner").get<std::string>()),
                              j.at("g").get<std::vector<double>>()};
    case MessageKind::kPlainLoss:
      return PlainLossPayload{j.at("loss").get<double>()};
    case MessageKind::kConverged:
      return ConvergedPayload{j.at("converged").get<bool>()};
    case MessageKind::kHalt:
      return HaltPayload{};
  }
  throw ProtocolError("unhandled message kind");
}

}  // namespace

std::string_view RoleName(PartyRole role) {
  switch (role) {
    case PartyRole::kHostA:
      return "host_a";
    case PartyRole::kGuestB:
      return "guest_b";
    case PartyRole::kArbiterC:
      return "arbiter_c";
  }
  return "unknown";
}

PartyRole ParseRole(std::string_view name) {
  if (name == "host_a" || name == "host" || name == "a") return PartyRole::kHostA;
  if (name == "guest_b" || name == "guest" || name == "b") {
    return PartyRole::kGuestB;
  }
  if (name == "arbiter_c" || name == "arbiter" || name == "c") {
    return PartyRole::kArbiterC;
  }
  throw ProtocolError("unknown party role '" + std::string(name) + "'");
}

std::string_view KindName(MessageKind kind) {
  switch (kind) {
    case MessageKind::kPubKey:
      return "PubKey";
    case MessageKind::kEncUa:
      return "EncUa";
    case MessageKind::kEncD:
      return "EncD";
    case MessageKind::kEncGrad:
      return "EncGrad";
    case MessageKind::kEncLoss:
      return "EncLoss";
    case MessageKind::kPlainGrad:
      return "PlainGrad";
    case MessageKind::kPlainLoss:
      return "PlainLoss";
    case MessageKind::kConverged:
      return "Converged";
    case MessageKind::kHalt:
      return "Halt";
  }
  return "Unknown";
}

MessageKind ParseKind(std::string_view name) {
  for (auto kind : {MessageKind::kPubKey, MessageKind::kEncUa,
                    MessageKind::kEncD, MessageKind::kEncGrad,
                    MessageKind::kEncLoss, MessageKind::kPlainGrad,
                    MessageKind::kPlainLoss, MessageKind::kConverged,
                    MessageKind::kHalt}) {
    if (KindName(kind) == name) return kind;
  }
  throw ProtocolError("unknown message kind '" + std::string(name) + "'");
}

MessageKind Message::kind() const {
  return static_cast<MessageKind>(payload.index());
}

int ProtocolStep(const Message& m) {
  switch (m.kind()) {
    case MessageKind::kPubKey:
      return m.to == PartyRole::kGuestB ? 1 : 2;
    case MessageKind::kEncUa:
      return 1;
    case MessageKind::kEncD:
      return 2;
    case MessageKind::kEncGrad:
      return m.from == PartyRole::kHostA ? 3 : 4;
    case MessageKind::kEncLoss:
      return 5;
    case MessageKind::kPlainGrad:
      return m.to == PartyRole::kHostA ? 6 : 7;
    case MessageKind::kPlainLoss:
      return 8;
    case MessageKind::kConverged:
      return m.from == PartyRole::kHostA ? 9 : 10;
    case MessageKind::kHalt:
      return 11;
  }
  return 99;
}

WireFrame Serialize(const Message& m) {
  const json payload = PayloadToJson(m.payload);
  std::string payload_text = payload.dump();
  json frame = {{"round", m.round},
                {"from", RoleName(m.from)},
                {"to", RoleName(m.to)},
                {"kind", KindName(m.kind())},
                {"payload", payload}};
  return WireFrame{frame.dump(), Sha256Hex(payload_text)};
}

Message Deserialize(std::string_view frame,
                    const std::optional<crypto::PublicKey>& key) {
  try {
    const json j = json::parse(frame);
    return Message{
        j.at("round").get<std::int64_t>(),
        ParseRole(j.at("from").get<std::string>()),
        ParseRole(j.at("to").get<std::string>()),
        PayloadFromJson(ParseKind(j.at("kind").get<std::string>()),
                        j.at("payload"), key)};
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed message frame: ") + e.what());
  }
}

std::string Sha256Hex(std::string_view bytes) {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw ProtocolError("libsodium initialisation failed");
  std::array<unsigned char, crypto_hash_sha256_BYTES> digest;
  crypto_hash_sha256(digest.data(),
                     reinterpret_cast<const unsigned char*>(bytes.data()),
                     bytes.size());
  std::array<char, 2 * crypto_hash_sha256_BYTES + 1> hex;
  sodium_bin2hex(hex.data(), hex.size(), digest.data(), digest.size());
  return std::string(hex.data());
}

}  // namespace bdfl::federation

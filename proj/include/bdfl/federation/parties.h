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

#ifndef BDFL_FEDERATION_PARTIES_H_
#define BDFL_FEDERATION_PARTIES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "bdfl/crypto/paillier.h"
#include "bdfl/federation/message.h"
#include "bdfl/model/taylor_logistic.h"
#include "bdfl/optim/quasi_newton.h"
#include "bdfl/training.h"

namespace bdfl::federation {

// Out-of-band hooks for the experiment harness. Parties report what they
// already know locally; nothing here feeds back into the protocol.
class RoundObserver {
 public:
  virtual ~RoundObserver() = default;
  virtual void OnLoss(std::int64_t /*round*/, double /*taylor_loss*/) {}
  virtual void OnUpdate(PartyRole /*role*/, std::int64_t /*round*/,
                        const Vector& /*w_before*/, const Vector& /*w_after*/,
                        double /*lr*/, bool /*curvature_skipped*/) {}
};

// Message-driven party. Messages may arrive ahead of the state that consumes
// them; they are parked until the machine reaches that state.
class PartyMachine {
 public:
  virtual ~PartyMachine() = default;

  virtual PartyRole role() const = 0;
  // Messages emitted before any input.
  virtual std::vector<Message> Start() { return {}; }
  virtual std::vector<Message> OnMessage(Message m) = 0;
  virtual bool done() const = 0;
  // Key used to decode incoming ciphertext frames, once known.
  virtual const std::optional<crypto::PublicKey>& public_key() const = 0;

 protected:
  using InboxKey = std::tuple<std::int64_t, MessageKind, PartyRole>;

  // Throws ProtocolError for a duplicate or misaddressed message.
  void Park(Message m);
  std::optional<Message> Take(std::int64_t round, MessageKind kind,
                              PartyRole from);
  bool Has(std::int64_t round, MessageKind kind, PartyRole from) const;

 private:
  std::map<InboxKey, Message> inbox_;
};

// State shared by the two data parties.
class DataParty : public PartyMachine {
 public:
  const Vector& weights() const { return w_; }
  const optim::CurvatureState& curvature() const { return curvature_; }
  std::int64_t round() const { return round_; }
  bool converged_local() const { return converged_local_; }
  const std::optional<crypto::PublicKey>& public_key() const override {
    return key_;
  }
  bool done() const override { return phase_ == Phase::kDone; }

 protected:
  enum class Phase { kAwaitKey, kAwaitInput, kAwaitGradient, kAwaitPeer, kDone };

  DataParty(model::FeatureMatrix x, const TrainingConfig& config,
            RoundObserver* observer, crypto::SecureRng rng);

  PartyRole peer() const;
  // Caches the fixed-point encoding of every feature value under the key.
  void AcceptKey(const crypto::PublicKey& key);
  std::vector<std::size_t> Batch() const;
  // Per column j: (1/|batch|) * sum_i [[d_i]] x_ij.
  std::vector<crypto::Ciphertext> EncryptedGradient(
      const std::vector<crypto::Ciphertext>& d,
      const std::vector<std::size_t>& batch) const;
  // Advance curvature, take the step, emit Converged to the peer.
  Message ApplyGradient(const std::vector<double>& g);
  // True when both parties converged or the round cap is reached.
  bool ShouldStop(bool peer_converged) const;
  Message Make(PartyRole to, Payload payload) const;

  model::FeatureMatrix x_;
  TrainingConfig config_;
  RoundObserver* observer_;
  crypto::SecureRng rng_;
  std::optional<crypto::PublicKey> key_;
  // encoded_x_[j][i] encodes x_(i, j).
  std::vector<std::vector<crypto::EncodedNumber>> encoded_x_;
  Vector w_;
  optim::CurvatureState curvature_;
  std::int64_t round_ = 0;
  bool converged_local_ = false;
  Phase phase_ = Phase::kAwaitKey;
};

// Party A: features only.
class HostParty final : public DataParty {
 public:
  HostParty(model::FeatureMatrix x_a, const TrainingConfig& config,
            RoundObserver* observer, crypto::SecureRng rng);

  PartyRole role() const override { return PartyRole::kHostA; }
  std::vector<Message> OnMessage(Message m) override;

 private:
  Message BeginRound();
};

// Party B: features and labels.
class GuestParty final : public DataParty {
 public:
  GuestParty(model::FeatureMatrix x_b, model::LabelVector y,
             const TrainingConfig& config, RoundObserver* observer,
             crypto::SecureRng rng);

  PartyRole role() const override { return PartyRole::kGuestB; }
  std::vector<Message> OnMessage(Message m) override;
  const model::LabelVector& labels() const { return y_; }

 private:
  // [[d]], [[loss]] and [[g_B]] from A's encrypted u vectors.
  std::vector<Message> Respond(const EncUaPayload& ua);

  model::LabelVector y_;
};

// Party C: holds the key pair, decrypts aggregates and routes each gradient
// slice back to its owner only.
class ArbiterParty final : public PartyMachine {
 public:
  ArbiterParty(crypto::KeyPair keys, RoundObserver* observer);

  PartyRole role() const override { return PartyRole::kArbiterC; }
  std::vector<Message> Start() override;
  std::vector<Message> OnMessage(Message m) override;
  bool done() const override { return done_; }
  const std::optional<crypto::PublicKey>& public_key() const override {
    return public_key_;
  }
  // Decrypted Taylor loss per round, as displayed by C.
  const std::vector<std::pair<std::int64_t, double>>& loss_log() const {
    return loss_log_;
  }

 private:
  crypto::KeyPair keys_;
  std::optional<crypto::PublicKey> public_key_;
  RoundObserver* observer_;
  std::int64_t round_ = 1;
  bool done_ = false;
  std::vector<std::pair<std::int64_t, double>> loss_log_;
};

}  // namespace bdfl::federation

#endif  // BDFL_FEDERATION_PARTIES_H_

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

#include "bdfl/federation/parties.h"

#include <cmath>
#include <string>

#include "bdfl/crypto/fixed_point.h"
#include "bdfl/error.h"

namespace bdfl::federation {
namespace {

using crypto::Ciphertext;
using crypto::EncodedNumber;

// Which (kind, sender) pairs each role may receive. Anything else is a
// protocol violation, in particular any plaintext gradient or label-derived
// value reaching the wrong party.
bool Allowed(PartyRole me, MessageKind kind, PartyRole from) {
  switch (me) {
    case PartyRole::kHostA:
      return (kind == MessageKind::kPubKey && from == PartyRole::kArbiterC) ||
             (kind == MessageKind::kEncD && from == PartyRole::kGuestB) ||
             (kind == MessageKind::kPlainGrad &&
              from == PartyRole::kArbiterC) ||
             (kind == MessageKind::kConverged && from == PartyRole::kGuestB);
    case PartyRole::kGuestB:
      return (kind == MessageKind::kPubKey && from == PartyRole::kArbiterC) ||
             (kind == MessageKind::kEncUa && from == PartyRole::kHostA) ||
             (kind == MessageKind::kPlainGrad &&
              from == PartyRole::kArbiterC) ||
             (kind == MessageKind::kConverged && from == PartyRole::kHostA);
    case PartyRole::kArbiterC:
      return (kind == MessageKind::kEncGrad && from != PartyRole::kArbiterC) ||
             (kind == MessageKind::kEncLoss && from == PartyRole::kGuestB) ||
             (kind == MessageKind::kHalt && from == PartyRole::kGuestB);
  }
  return false;
}

std::string Describe(const Message& m) {
  return std::string(KindName(m.kind())) + " from " +
         std::string(RoleName(m.from)) + " to " + std::string(RoleName(m.to)) +
         " at round " + std::to_string(m.round);
}

template <typename T>
const T& As(const Message& m) {
  return std::get<T>(m.payload);
}

}  // namespace

// PartyMachine

void PartyMachine::Park(Message m) {
  if (m.to != role() || !Allowed(role(), m.kind(), m.from)) {
    throw ProtocolError("unexpected " + Describe(m));
  }
  if (const auto* p = std::get_if<EncGradPayload>(&m.payload);
      p != nullptr && p->owner != m.from) {
    throw ProtocolError("gradient owner mismatch in " + Describe(m));
  }
  if (const auto* p = std::get_if<PlainGradPayload>(&m.payload);
      p != nullptr && p->owner != m.to) {
    throw ProtocolError("gradient routed to non-owner in " + Describe(m));
  }
  InboxKey key{m.round, m.kind(), m.from};
  if (!inbox_.emplace(key, std::move(m)).second) {
    throw ProtocolError("duplicate message in inbox");
  }
}

std::optional<Message> PartyMachine::Take(std::int64_t round, MessageKind kind,
                                          PartyRole from) {
  auto it = inbox_.find({round, kind, from});
  if (it == inbox_.end()) return std::nullopt;
  Message m = std::move(it->second);
  inbox_.erase(it);
  return m;
}

bool PartyMachine::Has(std::int64_t round, MessageKind kind,
                       PartyRole from) const {
  return inbox_.count({round, kind, from}) > 0;
}

// DataParty

DataParty::DataParty(model::FeatureMatrix x, const TrainingConfig& config,
                     RoundObserver* observer, crypto::SecureRng rng)
    : x_(std::move(x)),
      config_(config),
      observer_(observer),
      rng_(std::move(rng)),
      w_(Vector::Zero(x_.cols())),
      curvature_(x_.cols()) {
  config_.Validate();
}

PartyRole DataParty::peer() const {
  return role() == PartyRole::kHostA ? PartyRole::kGuestB : PartyRole::kHostA;
}

void DataParty::AcceptKey(const crypto::PublicKey& key) {
  key_ = key;
  encoded_x_.assign(x_.cols(), {});
  for (Eigen::Index j = 0; j < x_.cols(); ++j) {
    auto& column = encoded_x_[j];
    column.reserve(x_.rows());
    for (Eigen::Index i = 0; i < x_.rows(); ++i) {
      column.push_back(crypto::Encode(x_(i, j), config_.scale_bits, key.n()));
    }
  }
  round_ = 1;
}

std::vector<std::size_t> DataParty::Batch() const {
  return BatchIndices(config_.seed, round_,
                      static_cast<std::size_t>(x_.rows()), config_.batch_size);
}

std::vector<Ciphertext> DataParty::EncryptedGradient(
    const std::vector<Ciphertext>& d,
    const std::vector<std::size_t>& batch) const {
  if (d.size() != batch.size()) {
    throw ProtocolError("residual length " + std::to_string(d.size()) +
                        " does not match batch size " +
                        std::to_string(batch.size()));
  }
  const EncodedNumber inv_batch = crypto::Encode(
      1.0 / static_cast<double>(batch.size()), config_.scale_bits, key_->n());
  std::vector<Ciphertext> g;
  g.reserve(encoded_x_.size());
  std::vector<EncodedNumber> ks;
  for (const auto& column : encoded_x_) {
    ks.clear();
    for (std::size_t i : batch) ks.push_back(column[i]);
    g.push_back(crypto::ScalarMul(crypto::Dot(d, ks), inv_batch));
  }
  return g;
}

Message DataParty::ApplyGradient(const std::vector<double>& g) {
  if (static_cast<Eigen::Index>(g.size()) != w_.size()) {
    throw ProtocolError("gradient has " + std::to_string(g.size()) +
                        " entries, expected " + std::to_string(w_.size()));
  }
  const Vector grad = Eigen::Map<const Vector>(g.data(), w_.size());
  const double lr = optim::LearningRate(config_.schedule, round_ - 1);
  curvature_.Advance(w_, grad, config_.optimizer, config_.curvature_eps);
  Vector next = optim::Step(w_, grad, curvature_.c(), lr, config_.optimizer);
  converged_local_ = WeightsConverged(round_, w_, next, config_.tol);
  if (observer_ != nullptr) {
    observer_->OnUpdate(role(), round_, w_, next, lr,
                        curvature_.last_skipped());
  }
  w_ = std::move(next);
  return Make(peer(), ConvergedPayload{converged_local_});
}

bool DataParty::ShouldStop(bool peer_converged) const {
  return (converged_local_ && peer_converged) || round_ >= config_.rounds;
}

Message DataParty::Make(PartyRole to, Payload payload) const {
  return Message{round_, role(), to, std::move(payload)};
}

// HostParty

HostParty::HostParty(model::FeatureMatrix x_a, const TrainingConfig& config,
                     RoundObserver* observer, crypto::SecureRng rng)
    : DataParty(std::move(x_a), config, observer, std::move(rng)) {}

Message HostParty::BeginRound() {
  const Vector u = model::ComputeU(w_, SelectRows(x_, Batch()));
  std::vector<EncodedNumber> enc_u;
  std::vector<EncodedNumber> enc_u2;
  enc_u.reserve(u.size());
  enc_u2.reserve(u.size());
  for (double v : u) {
    enc_u.push_back(crypto::Encode(v, config_.scale_bits, key_->n()));
    enc_u2.push_back(crypto::Encode(v * v, config_.scale_bits, key_->n()));
  }
  EncUaPayload payload{crypto::EncryptAll(*key_, enc_u, rng_),
                       crypto::EncryptAll(*key_, enc_u2, rng_)};
  return Make(PartyRole::kGuestB, std::move(payload));
}

std::vector<Message> HostParty::OnMessage(Message m) {
  Park(std::move(m));
  std::vector<Message> out;
  for (bool progressed = true; progressed;) {
    progressed = false;
    switch (phase_) {
      case Phase::kAwaitKey:
        if (auto k = Take(0, MessageKind::kPubKey, PartyRole::kArbiterC)) {
          AcceptKey(As<PubKeyPayload>(*k).key);
          out.push_back(BeginRound());
          phase_ = Phase::kAwaitInput;
          progressed = true;
        }
        break;
      case Phase::kAwaitInput:
        if (auto d = Take(round_, MessageKind::kEncD, PartyRole::kGuestB)) {
          EncGradPayload payload{
              PartyRole::kHostA,
              EncryptedGradient(As<EncDPayload>(*d).d, Batch())};
          out.push_back(Make(PartyRole::kArbiterC, std::move(payload)));
          phase_ = Phase::kAwaitGradient;
          progressed = true;
        }
        break;
      case Phase::kAwaitGradient:
        if (auto g =
                Take(round_, MessageKind::kPlainGrad, PartyRole::kArbiterC)) {
          out.push_back(ApplyGradient(As<PlainGradPayload>(*g).g));
          phase_ = Phase::kAwaitPeer;
          progressed = true;
        }
        break;
      case Phase::kAwaitPeer:
        if (auto c =
                Take(round_, MessageKind::kConverged, PartyRole::kGuestB)) {
          if (ShouldStop(As<ConvergedPayload>(*c).converged)) {
            phase_ = Phase::kDone;
          } else {
            ++round_;
            out.push_back(BeginRound());
            phase_ = Phase::kAwaitInput;
            progressed = true;
          }
        }
        break;
      case Phase::kDone:
        break;
    }
  }
  return out;
}

// GuestParty

GuestParty::GuestParty(model::FeatureMatrix x_b, model::LabelVector y,
                       const TrainingConfig& config, RoundObserver* observer,
                       crypto::SecureRng rng)
    : DataParty(std::move(x_b), config, observer, std::move(rng)),
      y_(std::move(y)) {
  if (y_.size() != x_.rows()) {
    throw DimensionError("guest has " + std::to_string(x_.rows()) +
                         " rows but " + std::to_string(y_.size()) + " labels");
  }
}

std::vector<Message> GuestParty::Respond(const EncUaPayload& ua) {
  const auto batch = Batch();
  const std::size_t m = batch.size();
  if (ua.u.size() != m || ua.u_squared.size() != m) {
    throw ProtocolError("encrypted u has " + std::to_string(ua.u.size()) +
                        " entries, expected " + std::to_string(m));
  }
  const mpz_class& n = key_->n();
  const int s = config_.scale_bits;
  const Vector u_b = model::ComputeU(w_, SelectRows(x_, batch));
  const model::LabelVector y = SelectRows(y_, batch);

  // [[d_i]] = 1/4 ([[u_A,i]] + [[u_B,i - 2 y_i]]).
  const EncodedNumber quarter = crypto::Encode(0.25, s, n);
  std::vector<Ciphertext> d;
  d.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Ciphertext own = crypto::Encrypt(
        *key_, crypto::Encode(u_b[i] - 2.0 * y[i], s, n), rng_);
    d.push_back(crypto::ScalarMul(crypto::Add(ua.u[i], own), quarter));
  }

  // Loss terms that involve u_A, plus B's own part encrypted as a constant.
  std::vector<EncodedNumber> cross;
  cross.reserve(m);
  Ciphertext sum_sq = ua.u_squared[0];
  double own_part = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    cross.push_back(crypto::Encode(-0.5 * y[i] + 0.25 * u_b[i], s, n));
    if (i > 0) sum_sq = crypto::Add(sum_sq, ua.u_squared[i]);
    own_part += std::log(2.0) - 0.5 * y[i] * u_b[i] + 0.125 * u_b[i] * u_b[i];
  }
  Ciphertext loss = crypto::Add(
      crypto::Dot(ua.u, cross),
      crypto::ScalarMul(sum_sq, crypto::Encode(0.125, s, n)));
  loss = crypto::Add(loss,
                     crypto::Encrypt(*key_, crypto::Encode(own_part, s, n),
                                     rng_));
  loss = crypto::ScalarMul(
      loss, crypto::Encode(1.0 / static_cast<double>(m), s, n));

  std::vector<Message> out;
  std::vector<Ciphertext> g = EncryptedGradient(d, batch);
  out.push_back(Make(PartyRole::kHostA, EncDPayload{std::move(d)}));
  out.push_back(Make(PartyRole::kArbiterC,
                     EncGradPayload{PartyRole::kGuestB, std::move(g)}));
  out.push_back(Make(PartyRole::kArbiterC, EncLossPayload{std::move(loss)}));
  return out;
}

std::vector<Message> GuestParty::OnMessage(Message m) {
  Park(std::move(m));
  std::vector<Message> out;
  for (bool progressed = true; progressed;) {
    progressed = false;
    switch (phase_) {
      case Phase::kAwaitKey:
        if (auto k = Take(0, MessageKind::kPubKey, PartyRole::kArbiterC)) {
          AcceptKey(As<PubKeyPayload>(*k).key);
          phase_ = Phase::kAwaitInput;
          progressed = true;
        }
        break;
      case Phase::kAwaitInput:
        if (auto ua = Take(round_, MessageKind::kEncUa, PartyRole::kHostA)) {
          for (auto& msg : Respond(As<EncUaPayload>(*ua))) {
            out.push_back(std::move(msg));
          }
          phase_ = Phase::kAwaitGradient;
          progressed = true;
        }
        break;
      case Phase::kAwaitGradient:
        if (auto g =
                Take(round_, MessageKind::kPlainGrad, PartyRole::kArbiterC)) {
          out.push_back(ApplyGradient(As<PlainGradPayload>(*g).g));
          phase_ = Phase::kAwaitPeer;
          progressed = true;
        }
        break;
      case Phase::kAwaitPeer:
        if (auto c = Take(round_, MessageKind::kConverged, PartyRole::kHostA)) {
          if (ShouldStop(As<ConvergedPayload>(*c).converged)) {
            out.push_back(Make(PartyRole::kArbiterC, HaltPayload{}));
            phase_ = Phase::kDone;
          } else {
            ++round_;
            phase_ = Phase::kAwaitInput;
            progressed = true;
          }
        }
        break;
      case Phase::kDone:
        break;
    }
  }
  return out;
}

// ArbiterParty

ArbiterParty::ArbiterParty(crypto::KeyPair keys, RoundObserver* observer)
    : keys_(std::move(keys)),
      public_key_(keys_.public_key),
      observer_(observer) {}

std::vector<Message> ArbiterParty::Start() {
  return {Message{0, role(), PartyRole::kGuestB, PubKeyPayload{*public_key_}},
          Message{0, role(), PartyRole::kHostA, PubKeyPayload{*public_key_}}};
}

std::vector<Message> ArbiterParty::OnMessage(Message m) {
  Park(std::move(m));
  std::vector<Message> out;
  while (!done_ &&
         Has(round_, MessageKind::kEncGrad, PartyRole::kHostA) &&
         Has(round_, MessageKind::kEncGrad, PartyRole::kGuestB) &&
         Has(round_, MessageKind::kEncLoss, PartyRole::kGuestB)) {
    for (PartyRole owner : {PartyRole::kHostA, PartyRole::kGuestB}) {
      const Message enc = *Take(round_, MessageKind::kEncGrad, owner);
      PlainGradPayload plain{owner, {}};
      for (const Ciphertext& c : As<EncGradPayload>(enc).g) {
        plain.g.push_back(crypto::Decode(crypto::Decrypt(keys_, c)));
      }
      out.push_back(Message{round_, role(), owner, std::move(plain)});
    }
    const Message enc_loss =
        *Take(round_, MessageKind::kEncLoss, PartyRole::kGuestB);
    const double loss = crypto::Decode(
        crypto::Decrypt(keys_, As<EncLossPayload>(enc_loss).loss));
    loss_log_.emplace_back(round_, loss);
    if (observer_ != nullptr) observer_->OnLoss(round_, loss);
    ++round_;
  }
  if (Take(round_ - 1, MessageKind::kHalt, PartyRole::kGuestB)) done_ = true;
  return out;
}

}  // namespace bdfl::federation

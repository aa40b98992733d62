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

#include "bdfl/federation/protocol.h"

#include <exception>
#include <string>
#include <thread>

#include "bdfl/error.h"
#include "bdfl/federation/socket_transport.h"

namespace bdfl::federation {

PartyMachine& Parties::get(PartyRole role) {
  switch (role) {
    case PartyRole::kHostA:
      return *host;
    case PartyRole::kGuestB:
      return *guest;
    case PartyRole::kArbiterC:
      return *arbiter;
  }
  throw ProtocolError("unknown role");
}

crypto::KeyPair RunKeyPair(const TrainingConfig& config) {
  if (config.deterministic) {
    return crypto::GenerateKeyPair(config.key_bits, config.seed);
  }
  crypto::SecureRng rng = crypto::SecureRng::FromEntropy();
  return crypto::GenerateKeyPair(config.key_bits, rng);
}

crypto::SecureRng PartyRng(const TrainingConfig& config, PartyRole role) {
  if (!config.deterministic) return crypto::SecureRng::FromEntropy();
  return crypto::SecureRng(config.seed,
                           "bdfl/party/" + std::string(RoleName(role)));
}

Parties MakeParties(const TrainingConfig& config,
                    const data::VerticalDataset& data,
                    RoundObserver* observer) {
  config.Validate();
  Parties p;
  p.host = std::make_unique<HostParty>(
      data.x_a, config, observer, PartyRng(config, PartyRole::kHostA));
  p.guest = std::make_unique<GuestParty>(
      data.x_b, data.y, config, observer, PartyRng(config, PartyRole::kGuestB));
  p.arbiter = std::make_unique<ArbiterParty>(RunKeyPair(config), observer);
  return p;
}

std::unique_ptr<PartyMachine> MakeParty(PartyRole role,
                                        const TrainingConfig& config,
                                        const data::VerticalDataset& data,
                                        RoundObserver* observer) {
  config.Validate();
  switch (role) {
    case PartyRole::kHostA:
      return std::make_unique<HostParty>(data.x_a, config, observer,
                                         PartyRng(config, role));
    case PartyRole::kGuestB:
      return std::make_unique<GuestParty>(data.x_b, data.y, config, observer,
                                          PartyRng(config, role));
    case PartyRole::kArbiterC:
      return std::make_unique<ArbiterParty>(RunKeyPair(config), observer);
  }
  throw ProtocolError("unknown role");
}

void Dispatch(std::vector<Message> out, Transport& transport,
              Transcript* transcript) {
  for (const Message& m : out) {
    WireFrame frame = Serialize(m);
    if (transcript != nullptr) transcript->Append(MakeRecord(m, frame));
    transport.Send(m.from, m.to, std::move(frame.bytes));
  }
}

void RunParty(PartyMachine& party, Transport& transport,
              Transcript* transcript) {
  Dispatch(party.Start(), transport, transcript);
  while (!party.done()) {
    const std::string frame = transport.Receive(party.role());
    Dispatch(party.OnMessage(Deserialize(frame, party.public_key())),
             transport, transcript);
  }
}

// MetricsCollector

MetricsCollector::MetricsCollector(const data::VerticalDataset& data,
                                   const TrainingConfig& config)
    : data_(data), config_(config), start_(std::chrono::steady_clock::now()) {}

void MetricsCollector::OnLoss(std::int64_t round, double taylor_loss) {
  std::lock_guard lock(mu_);
  rounds_[round].taylor_loss = taylor_loss;
}

void MetricsCollector::OnUpdate(PartyRole role, std::int64_t round,
                                const Vector& w_before, const Vector& w_after,
                                double lr, bool curvature_skipped) {
  Update u{w_before, w_after, lr, curvature_skipped,
           std::chrono::steady_clock::now()};
  std::lock_guard lock(mu_);
  RoundState& r = rounds_[round];
  if (role == PartyRole::kHostA) {
    r.a = std::move(u);
  } else {
    r.b = std::move(u);
  }
}

TrainingResult MetricsCollector::Finish(const Transcript& transcript) const {
  std::lock_guard lock(mu_);
  TrainingResult result;
  auto prev_end = start_;
  for (const auto& [round, r] : rounds_) {
    if (!r.a || !r.b) break;
    MetricsRecord rec;
    rec.round = round;
    rec.taylor_loss = r.taylor_loss.value_or(0.0);
    rec.exact_loss = TrainExactLoss(data_, r.a->before, r.b->before);
    rec.test_accuracy = TestAccuracy(data_, r.a->after, r.b->after);
    rec.lr = r.a->lr;
    rec.curvature_skipped_a = r.a->skipped;
    rec.curvature_skipped_b = r.b->skipped;
    rec.msg_bytes = transcript.BytesInRound(round);
    if (round == 1) rec.msg_bytes += transcript.BytesInRound(0);
    const auto end = std::max(r.a->at, r.b->at);
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(end - prev_end).count();
    prev_end = end;
    result.metrics.push_back(rec);
    result.trajectory.push_back({r.a->after, r.b->after});
    result.w_a = r.a->after;
    result.w_b = r.b->after;
    result.converged =
        WeightsConverged(round, r.a->before, r.a->after, config_.tol) &&
        WeightsConverged(round, r.b->before, r.b->after, config_.tol);
  }
  if (result.metrics.empty()) {
    result.w_a = Vector::Zero(data_.x_a.cols());
    result.w_b = Vector::Zero(data_.x_b.cols());
  }
  return result;
}

// Schedulers

namespace {

void RunSequential(Parties& parties, InProcessTransport& transport,
                   Transcript& transcript) {
  constexpr PartyRole kOrder[] = {PartyRole::kArbiterC, PartyRole::kHostA,
                                  PartyRole::kGuestB};
  for (PartyRole role : kOrder) {
    Dispatch(parties.get(role).Start(), transport, &transcript);
  }
  auto all_done = [&] {
    return parties.host->done() && parties.guest->done() &&
           parties.arbiter->done();
  };
  while (!all_done()) {
    bool progressed = false;
    for (PartyRole role : kOrder) {
      PartyMachine& party = parties.get(role);
      while (auto frame = transport.TryReceive(role)) {
        Dispatch(party.OnMessage(Deserialize(*frame, party.public_key())),
                 transport, &transcript);
        progressed = true;
      }
    }
    if (!progressed && !all_done()) {
      throw ProtocolError("protocol stalled with no messages in flight");
    }
  }
}

// Runs body(role) on one thread per party; rethrows the first failure after
// `on_error` has had the chance to unblock the others.
template <typename Body, typename OnError>
void OnePartyPerThread(Body body, OnError on_error) {
  std::mutex error_mu;
  std::exception_ptr error;
  auto guarded = [&](PartyRole role) {
    try {
      body(role);
    } catch (...) {
      {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
      on_error();
    }
  };
  {
    std::jthread c(guarded, PartyRole::kArbiterC);
    std::jthread a(guarded, PartyRole::kHostA);
    std::jthread b(guarded, PartyRole::kGuestB);
  }
  if (error) std::rethrow_exception(error);
}

void RunThreaded(Parties& parties, InProcessTransport& transport,
                 Transcript& transcript) {
  OnePartyPerThread(
      [&](PartyRole role) {
        RunParty(parties.get(role), transport, &transcript);
      },
      [&] { transport.Shutdown(); });
}

}  // namespace

FederatedRun RunFederated(const TrainingConfig& config,
                          const data::VerticalDataset& data,
                          Schedule schedule) {
  MetricsCollector collector(data, config);
  Parties parties = MakeParties(config, data, &collector);
  InProcessTransport transport;
  FederatedRun run;
  run.transcript = std::make_unique<Transcript>();
  if (schedule == Schedule::kThreaded) {
    RunThreaded(parties, transport, *run.transcript);
  } else {
    RunSequential(parties, transport, *run.transcript);
  }
  run.result = collector.Finish(*run.transcript);
  run.arbiter_loss = parties.arbiter->loss_log();
  return run;
}

FederatedRun RunFederatedOverSockets(const TrainingConfig& config,
                                     const data::VerticalDataset& data) {
  MetricsCollector collector(data, config);
  Parties parties = MakeParties(config, data, &collector);
  std::map<PartyRole, std::unique_ptr<SocketTransport>> transports;
  std::map<PartyRole, Endpoint> endpoints;
  for (PartyRole role :
       {PartyRole::kHostA, PartyRole::kGuestB, PartyRole::kArbiterC}) {
    transports[role] = std::make_unique<SocketTransport>(role, Endpoint{});
    endpoints[role] = Endpoint{"127.0.0.1", transports[role]->port()};
  }
  FederatedRun run;
  run.transcript = std::make_unique<Transcript>();
  OnePartyPerThread(
      [&](PartyRole role) {
        SocketTransport& t = *transports.at(role);
        t.Connect(endpoints, std::chrono::seconds(30));
        RunParty(parties.get(role), t, run.transcript.get());
      },
      [&] {
        for (auto& [role, t] : transports) t->Abort();
      });
  run.result = collector.Finish(*run.transcript);
  run.arbiter_loss = parties.arbiter->loss_log();
  return run;
}

}  // namespace bdfl::federation

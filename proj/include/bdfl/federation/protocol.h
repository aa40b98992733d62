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

#ifndef BDFL_FEDERATION_PROTOCOL_H_
#define BDFL_FEDERATION_PROTOCOL_H_

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "bdfl/data/dataset.h"
#include "bdfl/federation/parties.h"
#include "bdfl/federation/transcript.h"
#include "bdfl/federation/transport.h"
#include "bdfl/training.h"

namespace bdfl::federation {

// The three machines of one training run, wired to a shared observer.
struct Parties {
  std::unique_ptr<HostParty> host;
  std::unique_ptr<GuestParty> guest;
  std::unique_ptr<ArbiterParty> arbiter;

  PartyMachine& get(PartyRole role);
};

// Key pair for a run: seeded from config.seed when config.deterministic,
// otherwise from OS entropy.
crypto::KeyPair RunKeyPair(const TrainingConfig& config);

// Encryption randomness for one party.
crypto::SecureRng PartyRng(const TrainingConfig& config, PartyRole role);

Parties MakeParties(const TrainingConfig& config,
                    const data::VerticalDataset& data,
                    RoundObserver* observer);

// Single party for one-process-per-role deployments. Only the slice the role
// owns is taken from `data`.
std::unique_ptr<PartyMachine> MakeParty(PartyRole role,
                                        const TrainingConfig& config,
                                        const data::VerticalDataset& data,
                                        RoundObserver* observer);

// Serializes, records and sends every message in `out`.
void Dispatch(std::vector<Message> out, Transport& transport,
              Transcript* transcript);

// Drives one party to completion over a blocking transport.
void RunParty(PartyMachine& party, Transport& transport,
              Transcript* transcript);

// Gathers per-round metrics from party callbacks. Evaluation happens here,
// outside the protocol, with access to the full split.
class MetricsCollector : public RoundObserver {
 public:
  MetricsCollector(const data::VerticalDataset& data,
                   const TrainingConfig& config);

  void OnLoss(std::int64_t round, double taylor_loss) override;
  void OnUpdate(PartyRole role, std::int64_t round, const Vector& w_before,
                const Vector& w_after, double lr,
                bool curvature_skipped) override;

  // Rounds for which both parties updated. Message bytes of the key exchange
  // count toward round 1.
  TrainingResult Finish(const Transcript& transcript) const;

 private:
  struct Update {
    Vector before;
    Vector after;
    double lr = 0.0;
    bool skipped = false;
    std::chrono::steady_clock::time_point at;
  };
  struct RoundState {
    std::optional<double> taylor_loss;
    std::optional<Update> a;
    std::optional<Update> b;
  };

  const data::VerticalDataset& data_;
  TrainingConfig config_;
  std::chrono::steady_clock::time_point start_;
  mutable std::mutex mu_;
  std::map<std::int64_t, RoundState> rounds_;
};

enum class Schedule {
  // One thread; parties run in turn as messages arrive.
  kSequential,
  // One thread per party over the in-process transport.
  kThreaded,
};

struct FederatedRun {
  TrainingResult result;
  std::unique_ptr<Transcript> transcript;
  // Taylor loss per round as decrypted by the arbiter.
  std::vector<std::pair<std::int64_t, double>> arbiter_loss;
};

FederatedRun RunFederated(const TrainingConfig& config,
                          const data::VerticalDataset& data,
                          Schedule schedule = Schedule::kSequential);

// Same run with each party on its own thread, linked over loopback TCP on
// ephemeral ports.
FederatedRun RunFederatedOverSockets(const TrainingConfig& config,
                                     const data::VerticalDataset& data);

}  // namespace bdfl::federation

#endif  // BDFL_FEDERATION_PROTOCOL_H_

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

#ifndef BDFL_ORACLE_PLAINTEXT_ORACLE_H_
#define BDFL_ORACLE_PLAINTEXT_ORACLE_H_

#include "bdfl/data/dataset.h"
#include "bdfl/training.h"

namespace bdfl::oracle {

// Centralised, unencrypted replay of the federated round: u = uA + uB, the
// Taylor residual, per-party gradient slices, per-party inverse-Hessian
// blocks and the decayed step. Same round structure, schedule and stopping
// rule as the protocol; msg_bytes is always 0.
TrainingResult OracleRun(const TrainingConfig& config,
                         const data::VerticalDataset& data);

// Full-batch gradient descent on the exact logistic loss. Reports the same
// metrics; `taylor_loss` still carries the Taylor loss at the round's input
// weights so both trajectories can be plotted together.
TrainingResult OracleExactGd(const TrainingConfig& config,
                             const data::VerticalDataset& data);

}  // namespace bdfl::oracle

#endif  // BDFL_ORACLE_PLAINTEXT_ORACLE_H_

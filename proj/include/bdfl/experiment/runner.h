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

#ifndef BDFL_EXPERIMENT_RUNNER_H_
#define BDFL_EXPERIMENT_RUNNER_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bdfl/experiment/config.h"
#include "bdfl/federation/transcript.h"
#include "bdfl/training.h"

namespace bdfl::experiment {

struct RunOutput {
  TrainingResult result;
  // Absent for the oracle modes.
  std::unique_ptr<federation::Transcript> transcript;
  double wall_seconds = 0.0;
};

// Runs the configured mode on `data`. federated-sockets with a network role
// is not handled here; see RunSingleParty.
RunOutput Execute(const RunConfig& config, const data::VerticalDataset& data);

// Writes metrics.csv, summary.json, weights.json, test_split.csv and, for
// federated modes, transcript.jsonl into config.output_dir.
void WriteArtifacts(const RunConfig& config, const data::VerticalDataset& data,
                    const RunOutput& output);

// summary.json content.
std::string SummaryJson(const RunConfig& config,
                        const data::VerticalDataset& data,
                        const RunOutput& output);

// Runs only config.network.role over TCP and writes that party's view:
// party_<role>.json (and for the arbiter its decrypted loss per round) plus
// the frames the party sent. Returns the number of rounds the party saw.
std::int64_t RunSingleParty(const RunConfig& config,
                            const data::VerticalDataset& data);

// train: Execute then WriteArtifacts.
RunOutput Train(const RunConfig& config);

// A labelled run inside a comparison.
struct ComparedRun {
  std::string label;
  TrainingResult result;
};

// Label such as "bfgs" or "bdfl_a0.5"; repeated labels get a "#k" suffix.
std::vector<ComparedRun> Compare(const std::vector<RunConfig>& configs);

// First round whose Taylor loss is <= threshold.
std::optional<std::int64_t> RoundsToThreshold(const TrainingResult& result,
                                              double threshold);

// Per-round Taylor loss columns aligned by round; blank past a run's end.
std::string ComparisonCsv(const std::vector<ComparedRun>& runs);
// label,rounds_executed,rounds_to_threshold,final_taylor_loss,
// final_test_accuracy
std::string ComparisonSummaryCsv(const std::vector<ComparedRun>& runs,
                                 double threshold);

struct AccuracyCell {
  std::string dataset;
  std::string method;
  // Percent; absent for cells with no target.
  std::optional<double> target;
  // Test accuracy in percent; absent when not run.
  std::optional<double> measured;
  std::string note;
};

// Target test accuracies (percent) per dataset and method.
std::vector<AccuracyCell> TargetAccuracies();

// Runs every cell with a target value on its dataset preset, each on top
// of `base` (training options other than optimizer, rounds and decay carry
// over). Datasets whose file is missing are reported, not run.
std::vector<AccuracyCell> RunAccuracyGrid(const RunConfig& base,
                                  std::size_t credit_card_max_rows);

std::string AccuracyGridText(const std::vector<AccuracyCell>& cells);
std::string AccuracyGridCsv(const std::vector<AccuracyCell>& cells);

}  // namespace bdfl::experiment

#endif  // BDFL_EXPERIMENT_RUNNER_H_

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

#ifndef BDFL_EXPERIMENT_CONFIG_H_
#define BDFL_EXPERIMENT_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bdfl/data/dataset.h"
#include "bdfl/federation/message.h"
#include "bdfl/federation/protocol.h"
#include "bdfl/federation/socket_transport.h"
#include "bdfl/training.h"

namespace bdfl::experiment {

enum class Mode { kFederated, kFederatedSockets, kOracle, kOracleExact };

std::string_view ModeName(Mode mode);
// Throws ConfigError.
Mode ParseMode(std::string_view name);

struct DatasetConfig {
  // breast_cancer, credit_card, csv or synthetic.
  std::string name = "breast_cancer";
  std::filesystem::path path;
  data::CsvOptions csv;
  // Global feature indices held by A; B gets the rest.
  std::vector<int> party_a_columns;
  double test_fraction = 0.2;
  bool standardize = true;
  // Seeded subsample before splitting; 0 keeps every row.
  std::size_t max_rows = 0;

  // synthetic only.
  std::size_t synthetic_rows = 500;
  int synthetic_features_a = 4;
  int synthetic_features_b = 3;
  double synthetic_separation = 3.0;
};

// Endpoints for running one party per process.
struct NetworkConfig {
  std::optional<federation::PartyRole> role;
  std::map<federation::PartyRole, federation::Endpoint> endpoints;
  int connect_timeout_ms = 30000;
};

struct RunConfig {
  DatasetConfig dataset;
  TrainingConfig training;
  Mode mode = Mode::kFederated;
  federation::Schedule schedule = federation::Schedule::kSequential;
  NetworkConfig network;
  std::filesystem::path output_dir = "out";

  // Throws ConfigError.
  void Validate() const;
};

// Defaults for a named dataset: file location, column split, E and decay.
// Throws ConfigError for an unknown name.
RunConfig Preset(std::string_view dataset);

// Reads a TOML document with optional top-level keys mode, schedule and
// output_dir and tables [dataset], [training] and [network]. Missing keys
// keep the dataset preset's values. Relative paths resolve against
// `base_dir`. Throws ConfigError.
RunConfig ParseConfig(std::string_view toml_text,
                      const std::filesystem::path& base_dir = {});
RunConfig LoadConfig(const std::filesystem::path& path);

// Applies BDFL_TEST_FAST=1 (512-bit keys) when set in the environment.
void ApplyEnvironment(RunConfig& config);

// Directory holding the bundled datasets; BDFL_DATA_DIR overrides the
// build-time default.
std::filesystem::path DataDir();

// Loads and splits the configured dataset. Throws DataError or ConfigError.
data::VerticalDataset LoadDataset(const DatasetConfig& dataset,
                                  std::uint64_t seed);

}  // namespace bdfl::experiment

#endif  // BDFL_EXPERIMENT_CONFIG_H_

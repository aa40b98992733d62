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

#include "bdfl/experiment/config.h"

#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <toml.hpp>

#include "bdfl/error.h"

#ifndef BDFL_DEFAULT_DATA_DIR
#define BDFL_DEFAULT_DATA_DIR "data"
#endif

namespace bdfl::experiment {
namespace {

std::vector<int> Range(int first, int last) {
  std::vector<int> out(last - first + 1);
  std::iota(out.begin(), out.end(), first);
  return out;
}

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

template <typename T>
T Get(const toml::table& table, std::string_view key, T fallback) {
  const toml::node* node = table.get(key);
  if (node == nullptr) return fallback;
  if constexpr (std::is_same_v<T, double>) {
    if (auto v = node->value<double>()) return *v;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (auto v = node->value<bool>()) return *v;
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (auto v = node->value<std::string>()) return *v;
  } else {
    if (auto v = node->value<std::int64_t>()) {
      if (*v < 0 && std::is_unsigned_v<T>) {
        throw ConfigError("'" + std::string(key) + "' must be non-negative");
      }
      return static_cast<T>(*v);
    }
  }
  throw ConfigError("'" + std::string(key) + "' has the wrong type");
}

std::vector<int> GetIntArray(const toml::table& table, std::string_view key) {
  const toml::array* arr = table[key].as_array();
  if (arr == nullptr) throw ConfigError("'" + std::string(key) + "' must be an array");
  std::vector<int> out;
  for (const toml::node& n : *arr) {
    auto v = n.value<std::int64_t>();
    if (!v) throw ConfigError("'" + std::string(key) + "' must hold integers");
    out.push_back(static_cast<int>(*v));
  }
  return out;
}

void ReadDataset(const toml::table& t, const std::filesystem::path& base,
                 DatasetConfig& d) {
  if (auto p = t["path"].value<std::string>()) d.path = Resolve(base, *p);
  d.csv.label_column = Get(t, "label_column", d.csv.label_column);
  d.csv.has_header = Get(t, "has_header", d.csv.has_header);
  if (const toml::table* m = t["label_mapping"].as_table()) {
    d.csv.label_mapping.clear();
    for (const auto& [key, node] : *m) {
      auto v = node.value<std::int64_t>();
      if (!v || (*v != -1 && *v != 1)) {
        throw ConfigError("label_mapping values must be -1 or 1");
      }
      d.csv.label_mapping[std::string(key.str())] = static_cast<int>(*v);
    }
  }
  if (t.contains("party_a_columns")) {
    d.party_a_columns = GetIntArray(t, "party_a_columns");
  }
  d.test_fraction = Get(t, "test_fraction", d.test_fraction);
  d.standardize = Get(t, "standardize", d.standardize);
  d.max_rows = Get(t, "max_rows", d.max_rows);
  d.synthetic_rows = Get(t, "rows", d.synthetic_rows);
  d.synthetic_features_a = Get(t, "features_a", d.synthetic_features_a);
  d.synthetic_features_b = Get(t, "features_b", d.synthetic_features_b);
  d.synthetic_separation = Get(t, "separation", d.synthetic_separation);
}

void ReadTraining(const toml::table& t, TrainingConfig& c) {
  const double alpha = Get(t, "alpha", c.optimizer.alpha);
  if (auto name = t["optimizer"].value<std::string>()) {
    c.optimizer = optim::OptimizerKind::Parse(*name, alpha);
  } else {
    c.optimizer.alpha = alpha;
  }
  c.rounds = Get(t, "rounds", c.rounds);
  c.schedule.lr0 = Get(t, "lr0", c.schedule.lr0);
  c.schedule.decay = Get(t, "decay", c.schedule.decay);
  c.tol = Get(t, "tol", c.tol);
  c.seed = Get(t, "seed", c.seed);
  c.key_bits = Get(t, "key_bits", c.key_bits);
  c.scale_bits = Get(t, "scale_bits", c.scale_bits);
  c.curvature_eps = Get(t, "curvature_eps", c.curvature_eps);
  c.batch_size = Get(t, "batch_size", c.batch_size);
  c.deterministic = Get(t, "deterministic", c.deterministic);
}

void ReadNetwork(const toml::table& t, NetworkConfig& n) {
  if (auto role = t["role"].value<std::string>()) {
    n.role = federation::ParseRole(*role);
  }
  for (auto role : {federation::PartyRole::kHostA, federation::PartyRole::kGuestB,
                    federation::PartyRole::kArbiterC}) {
    if (auto ep = t[federation::RoleName(role)].value<std::string>()) {
      n.endpoints[role] = federation::ParseEndpoint(*ep);
    }
  }
  n.connect_timeout_ms = Get(t, "connect_timeout_ms", n.connect_timeout_ms);
}

}  // namespace

std::string_view ModeName(Mode mode) {
  switch (mode) {
    case Mode::kFederated:
      return "federated";
    case Mode::kFederatedSockets:
      return "federated-sockets";
    case Mode::kOracle:
      return "oracle";
    case Mode::kOracleExact:
      return "oracle-exact";
  }
  return "?";
}

Mode ParseMode(std::string_view name) {
  for (Mode m : {Mode::kFederated, Mode::kFederatedSockets, Mode::kOracle,
                 Mode::kOracleExact}) {
    if (name == ModeName(m)) return m;
  }
  throw ConfigError("unknown mode '" + std::string(name) +
                    "' (federated, federated-sockets, oracle, oracle-exact)");
}

void RunConfig::Validate() const {
  training.Validate();
  if (!(dataset.test_fraction >= 0.0 && dataset.test_fraction < 1.0)) {
    throw ConfigError("test_fraction must lie in [0, 1)");
  }
  if (dataset.name == "synthetic") {
    if (dataset.synthetic_rows == 0) throw ConfigError("rows must be positive");
    if (dataset.synthetic_features_a < 0 || dataset.synthetic_features_b < 0) {
      throw ConfigError("feature counts must be non-negative");
    }
  } else if (dataset.path.empty()) {
    throw ConfigError("dataset path is not set");
  }
  if (network.connect_timeout_ms <= 0) {
    throw ConfigError("connect_timeout_ms must be positive");
  }
}

std::filesystem::path DataDir() {
  if (const char* dir = std::getenv("BDFL_DATA_DIR"); dir && *dir) return dir;
  return BDFL_DEFAULT_DATA_DIR;
}

RunConfig Preset(std::string_view dataset) {
  RunConfig c;
  c.dataset.name = std::string(dataset);
  if (dataset == "breast_cancer") {
    c.dataset.path = DataDir() / "breast_cancer.csv";
    c.dataset.party_a_columns = Range(10, 29);
    c.training.rounds = 100;
    c.training.schedule = {0.1, 0.05};
  } else if (dataset == "credit_card") {
    const char* env = std::getenv("BDFL_CREDIT_CARD_CSV");
    c.dataset.path = env && *env ? std::filesystem::path(env)
                                 : DataDir() / "credit_card.csv";
    c.dataset.party_a_columns = Range(0, 11);
    c.training.rounds = 50;
    c.training.schedule = {0.1, 0.06};
  } else if (dataset == "synthetic" || dataset == "csv") {
    // Everything comes from the config.
  } else {
    throw ConfigError("unknown dataset '" + std::string(dataset) +
                      "' (breast_cancer, credit_card, csv, synthetic)");
  }
  return c;
}

RunConfig ParseConfig(std::string_view toml_text,
                      const std::filesystem::path& base_dir) {
  toml::table doc;
  try {
    doc = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config parse error at line " << e.source().begin.line << ": "
        << e.description();
    throw ConfigError(msg.str());
  }
  const toml::table empty;
  const toml::table* dataset = doc["dataset"].as_table();
  const toml::table* training = doc["training"].as_table();
  const toml::table* network = doc["network"].as_table();

  RunConfig c = Preset(dataset ? Get(*dataset, "name", std::string("csv"))
                               : std::string("breast_cancer"));
  ReadDataset(dataset ? *dataset : empty, base_dir, c.dataset);
  ReadTraining(training ? *training : empty, c.training);
  ReadNetwork(network ? *network : empty, c.network);
  if (auto mode = doc["mode"].value<std::string>()) c.mode = ParseMode(*mode);
  if (auto s = doc["schedule"].value<std::string>()) {
    if (*s == "sequential") {
      c.schedule = federation::Schedule::kSequential;
    } else if (*s == "threaded") {
      c.schedule = federation::Schedule::kThreaded;
    } else {
      throw ConfigError("schedule must be sequential or threaded");
    }
  }
  if (auto out = doc["output_dir"].value<std::string>()) {
    c.output_dir = Resolve(base_dir, *out);
  }
  return c;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str(), path.parent_path());
}

void ApplyEnvironment(RunConfig& config) {
  if (const char* fast = std::getenv("BDFL_TEST_FAST");
      fast && std::string_view(fast) == "1") {
    config.training.key_bits = 512;
  }
}

data::VerticalDataset LoadDataset(const DatasetConfig& d, std::uint64_t seed) {
  if (d.name == "synthetic") {
    return data::SyntheticDataset(d.synthetic_rows, d.synthetic_features_a,
                                  d.synthetic_features_b, seed,
                                  d.synthetic_separation, d.test_fraction)
        .data;
  }
  data::RawTable raw = data::LoadCsv(d.path, d.csv);
  raw = data::Subsample(raw, d.max_rows, seed);
  const int features = static_cast<int>(raw.features.cols());
  data::SplitSpec spec;
  spec.party_a_columns = d.party_a_columns;
  spec.party_b_columns = data::ComplementColumns(d.party_a_columns, features);
  spec.seed = seed;
  return data::SplitAndStandardize(raw, spec, d.test_fraction, d.standardize);
}

}  // namespace bdfl::experiment

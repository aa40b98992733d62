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

#include "bdfl/experiment/runner.h"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>

#include "bdfl/error.h"
#include "bdfl/federation/protocol.h"
#include "bdfl/federation/socket_transport.h"
#include "bdfl/oracle/plaintext_oracle.h"

namespace bdfl::experiment {
namespace {

using nlohmann::ordered_json;

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::vector<double> ToStd(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::string TestSplitCsv(const data::VerticalDataset& data) {
  std::string out;
  for (int c : data.a_columns) out += "a" + std::to_string(c) + ",";
  for (int c : data.b_columns) out += "b" + std::to_string(c) + ",";
  out += "label\n";
  for (Eigen::Index i = 0; i < data.test_rows(); ++i) {
    for (Eigen::Index j = 0; j < data.x_a_test.cols(); ++j) {
      out += FormatDouble(data.x_a_test(i, j)) + ",";
    }
    for (Eigen::Index j = 0; j < data.x_b_test.cols(); ++j) {
      out += FormatDouble(data.x_b_test(i, j)) + ",";
    }
    out += std::to_string(static_cast<int>(data.y_test[i])) + "\n";
  }
  return out;
}

std::string Label(const RunConfig& c) {
  std::string label = c.training.optimizer.Name();
  if (c.training.optimizer.method == optim::OptimizerKind::Method::kBdfl) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "_a%g", c.training.optimizer.alpha);
    label += buf;
  }
  return label;
}

}  // namespace

RunOutput Execute(const RunConfig& config, const data::VerticalDataset& data) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  RunOutput out;
  switch (config.mode) {
    case Mode::kFederated:
    case Mode::kFederatedSockets: {
      federation::FederatedRun run =
          config.mode == Mode::kFederated
              ? federation::RunFederated(config.training, data,
                                         config.schedule)
              : federation::RunFederatedOverSockets(config.training, data);
      out.result = std::move(run.result);
      out.transcript = std::move(run.transcript);
      break;
    }
    case Mode::kOracle:
      out.result = oracle::OracleRun(config.training, data);
      break;
    case Mode::kOracleExact:
      out.result = oracle::OracleExactGd(config.training, data);
      break;
  }
  out.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return out;
}

std::string SummaryJson(const RunConfig& config,
                        const data::VerticalDataset& data,
                        const RunOutput& output) {
  const TrainingResult& r = output.result;
  ordered_json j;
  j["mode"] = ModeName(config.mode);
  j["dataset"] = config.dataset.name;
  j["optimizer"] = config.training.optimizer.Name();
  j["alpha"] = config.training.optimizer.alpha;
  j["rounds_executed"] = r.rounds_executed();
  j["converged"] = r.converged;
  j["final_test_accuracy"] = r.final_test_accuracy();
  j["final_taylor_loss"] =
      r.metrics.empty() ? 0.0 : r.metrics.back().taylor_loss;
  j["final_exact_loss"] = TrainExactLoss(data, r.w_a, r.w_b);
  j["total_msg_bytes"] = output.transcript ? output.transcript->TotalBytes() : 0;
  j["train_rows"] = data.train_rows();
  j["test_rows"] = data.test_rows();
  j["features_a"] = data.x_a.cols();
  j["features_b"] = data.x_b.cols();
  j["key_bits"] = config.training.key_bits;
  j["scale_bits"] = config.training.scale_bits;
  j["seed"] = config.training.seed;
  j["lr0"] = config.training.schedule.lr0;
  j["decay"] = config.training.schedule.decay;
  j["wall_seconds"] = output.wall_seconds;
  j["warnings"] = data.warnings;
  return j.dump(2) + "\n";
}

void WriteArtifacts(const RunConfig& config, const data::VerticalDataset& data,
                    const RunOutput& output) {
  const auto& dir = config.output_dir;
  std::filesystem::create_directories(dir);
  WriteMetricsCsv(dir / "metrics.csv", output.result.metrics);
  if (output.transcript) output.transcript->WriteJsonl(dir / "transcript.jsonl");
  WriteFile(dir / "summary.json", SummaryJson(config, data, output));
  ordered_json w;
  w["party_a_columns"] = data.a_columns;
  w["party_b_columns"] = data.b_columns;
  w["w_a"] = ToStd(output.result.w_a);
  w["w_b"] = ToStd(output.result.w_b);
  WriteFile(dir / "weights.json", w.dump(2) + "\n");
  WriteFile(dir / "test_split.csv", TestSplitCsv(data));
}

RunOutput Train(const RunConfig& config) {
  const data::VerticalDataset data =
      LoadDataset(config.dataset, config.training.seed);
  RunOutput out = Execute(config, data);
  WriteArtifacts(config, data, out);
  return out;
}

std::int64_t RunSingleParty(const RunConfig& config,
                            const data::VerticalDataset& data) {
  config.Validate();
  if (!config.network.role) throw ConfigError("network role is not set");
  const federation::PartyRole role = *config.network.role;
  const auto& eps = config.network.endpoints;
  const auto own = eps.find(role);
  federation::SocketTransport transport(
      role, own != eps.end() ? own->second : federation::Endpoint{});
  transport.Connect(eps,
                    std::chrono::milliseconds(config.network.connect_timeout_ms));

  auto party = federation::MakeParty(role, config.training, data, nullptr);
  federation::Transcript sent;
  federation::RunParty(*party, transport, &sent);

  const std::string name(federation::RoleName(role));
  std::filesystem::create_directories(config.output_dir);
  sent.WriteJsonl(config.output_dir / ("transcript_" + name + ".jsonl"));
  ordered_json j;
  j["role"] = name;
  std::int64_t rounds = 0;
  if (const auto* d = dynamic_cast<const federation::DataParty*>(party.get())) {
    rounds = d->round();
    j["rounds"] = rounds;
    j["converged"] = d->converged_local();
    j["weights"] = ToStd(d->weights());
  } else if (const auto* c =
                 dynamic_cast<const federation::ArbiterParty*>(party.get())) {
    rounds = static_cast<std::int64_t>(c->loss_log().size());
    j["rounds"] = rounds;
    ordered_json losses = ordered_json::array();
    for (const auto& [round, loss] : c->loss_log()) {
      losses.push_back({{"round", round}, {"taylor_loss", loss}});
    }
    j["loss"] = losses;
  }
  WriteFile(config.output_dir / ("party_" + name + ".json"), j.dump(2) + "\n");
  return rounds;
}

// Comparison

std::vector<ComparedRun> Compare(const std::vector<RunConfig>& configs) {
  if (configs.empty()) throw ConfigError("compare needs at least one config");
  std::vector<ComparedRun> runs;
  std::map<std::string, int> seen;
  for (const RunConfig& c : configs) {
    const data::VerticalDataset data = LoadDataset(c.dataset, c.training.seed);
    std::string label = Label(c);
    if (const int k = seen[label]++; k > 0) label += "#" + std::to_string(k);
    runs.push_back({label, Execute(c, data).result});
  }
  return runs;
}

std::optional<std::int64_t> RoundsToThreshold(const TrainingResult& result,
                                              double threshold) {
  for (const auto& m : result.metrics) {
    if (m.taylor_loss <= threshold) return m.round;
  }
  return std::nullopt;
}

std::string ComparisonCsv(const std::vector<ComparedRun>& runs) {
  std::string out = "round";
  std::size_t longest = 0;
  for (const auto& r : runs) {
    out += "," + r.label + "_taylor_loss";
    longest = std::max(longest, r.result.metrics.size());
  }
  out += "\n";
  for (std::size_t k = 0; k < longest; ++k) {
    out += std::to_string(k + 1);
    for (const auto& r : runs) {
      out += ",";
      if (k < r.result.metrics.size()) {
        out += FormatDouble(r.result.metrics[k].taylor_loss);
      }
    }
    out += "\n";
  }
  return out;
}

std::string ComparisonSummaryCsv(const std::vector<ComparedRun>& runs,
                                 double threshold) {
  std::string out =
      "label,rounds_executed,rounds_to_threshold,final_taylor_loss,"
      "final_test_accuracy\n";
  for (const auto& r : runs) {
    const auto hit = RoundsToThreshold(r.result, threshold);
    out += r.label + "," + std::to_string(r.result.rounds_executed()) + ",";
    if (hit) out += std::to_string(*hit);
    out += ",";
    out += r.result.metrics.empty()
               ? std::string()
               : FormatDouble(r.result.metrics.back().taylor_loss);
    out += "," + FormatDouble(r.result.final_test_accuracy()) + "\n";
  }
  return out;
}

// Accuracy grid

std::vector<AccuracyCell> TargetAccuracies() {
  return {
      {"credit_card", "SGD", 90.90, std::nullopt, ""},
      {"credit_card", "DFP", 94.41, std::nullopt, ""},
      {"credit_card", "BFGS", 95.10, std::nullopt, ""},
      {"credit_card", "BDFL", std::nullopt, std::nullopt, ""},
      {"breast_cancer", "SGD", 86.26, std::nullopt, ""},
      {"breast_cancer", "DFP", 85.57, std::nullopt, ""},
      {"breast_cancer", "BFGS", 91.29, std::nullopt, ""},
      {"breast_cancer", "BDFL", 91.35, std::nullopt, ""},
  };
}

std::vector<AccuracyCell> RunAccuracyGrid(const RunConfig& base,
                                  std::size_t credit_card_max_rows) {
  std::vector<AccuracyCell> cells = TargetAccuracies();
  std::map<std::string, std::optional<data::VerticalDataset>> loaded;
  std::map<std::string, std::string> missing;
  for (AccuracyCell& cell : cells) {
    if (!cell.target) {
      cell.note = "no target value";
      continue;
    }
    RunConfig c = Preset(cell.dataset);
    const int rounds = c.training.rounds;
    const double decay = c.training.schedule.decay;
    c.training = base.training;
    c.training.rounds = rounds;
    c.training.schedule.decay = decay;
    c.mode = base.mode;
    c.schedule = base.schedule;
    if (cell.dataset == "credit_card") c.dataset.max_rows = credit_card_max_rows;
    c.training.optimizer = cell.method == "SGD"
                               ? optim::OptimizerKind::Gd()
                               : optim::OptimizerKind::Parse(
                                     cell.method, base.training.optimizer.alpha);
    if (!loaded.count(cell.dataset)) {
      if (!std::filesystem::exists(c.dataset.path)) {
        loaded[cell.dataset] = std::nullopt;
        missing[cell.dataset] = c.dataset.path.string();
      } else {
        loaded[cell.dataset] = LoadDataset(c.dataset, c.training.seed);
      }
    }
    if (!loaded[cell.dataset]) {
      cell.note = "dataset not found: " + missing[cell.dataset];
      continue;
    }
    const RunOutput out = Execute(c, *loaded[cell.dataset]);
    cell.measured = 100.0 * out.result.final_test_accuracy();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%lld rounds",
                  static_cast<long long>(out.result.rounds_executed()));
    cell.note = buf;
  }
  return cells;
}

std::string AccuracyGridText(const std::vector<AccuracyCell>& cells) {
  auto pct = [](const std::optional<double>& v) {
    if (!v) return std::string("--");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", *v);
    return std::string(buf);
  };
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-14s %-6s %10s %10s %9s  %s\n",
                "dataset", "method", "target", "measured", "delta_pp",
                "note");
  out += line;
  for (const auto& c : cells) {
    std::string delta = "--";
    if (c.target && c.measured) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%+.2f", *c.measured - *c.target);
      delta = buf;
    }
    std::snprintf(line, sizeof(line), "%-14s %-6s %10s %10s %9s  %s\n",
                  c.dataset.c_str(), c.method.c_str(), pct(c.target).c_str(),
                  pct(c.measured).c_str(), delta.c_str(), c.note.c_str());
    out += line;
  }
  return out;
}

std::string AccuracyGridCsv(const std::vector<AccuracyCell>& cells) {
  std::string out = "dataset,method,target_pct,measured_pct,delta_pp,note\n";
  for (const auto& c : cells) {
    out += c.dataset + "," + c.method + ",";
    out += c.target ? Fixed(*c.target, 2) : "--";
    out += ",";
    if (c.measured) out += Fixed(*c.measured, 4);
    out += ",";
    if (c.target && c.measured) {
      out += Fixed(*c.measured - *c.target, 4);
    }
    out += ",\"" + c.note + "\"\n";
  }
  return out;
}

}  // namespace bdfl::experiment

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

// Command-line front end: train, compare, grid and keygen.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "bdfl/crypto/paillier.h"
#include "bdfl/crypto/serialization.h"
#include "bdfl/error.h"
#include "bdfl/experiment/config.h"
#include "bdfl/experiment/runner.h"

namespace {

using bdfl::experiment::RunConfig;

enum ExitCode {
  kOk = 0,
  kFailure = 1,
  kConfigFailure = 2,
  kDataFailure = 3,
  kProtocolFailure = 4,
};

// Flags shared by train, compare and grid. Unset flags leave the config
// value alone.
struct Overrides {
  std::string config;
  std::string dataset;
  std::string optimizer;
  std::optional<double> alpha;
  std::optional<int> rounds;
  std::optional<double> lr;
  std::optional<double> decay;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> key_bits;
  std::optional<int> scale_bits;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> max_rows;
  std::string mode;
  std::string schedule;
  std::string out;

  void Register(CLI::App& app, bool with_optimizer) {
    app.add_option("--config", config, "TOML run configuration");
    app.add_option("--dataset", dataset,
                   "breast_cancer, credit_card (replaces the config's dataset)");
    if (with_optimizer) {
      app.add_option("--optimizer", optimizer, "gd, dfp, bfgs or bdfl");
    }
    app.add_option("--alpha", alpha, "BDFL blend weight on DFP");
    app.add_option("--rounds", rounds, "round cap E");
    app.add_option("--lr", lr, "initial learning rate");
    app.add_option("--decay", decay, "learning-rate decay per round");
    app.add_option("--tol", tol, "convergence tolerance on weights");
    app.add_option("--seed", seed, "split, key and encryption seed");
    app.add_option("--key-bits", key_bits, "Paillier modulus size");
    app.add_option("--scale-bits", scale_bits, "fixed-point precision");
    app.add_option("--batch-size", batch_size, "rows per round, 0 = all");
    app.add_option("--max-rows", max_rows, "subsample the dataset first");
    app.add_option("--mode", mode,
                   "federated, federated-sockets, oracle, oracle-exact");
    app.add_option("--schedule", schedule, "sequential or threaded");
    app.add_option("--out", out, "output directory");
  }

  RunConfig Build() const {
    RunConfig c = config.empty() ? bdfl::experiment::Preset(
                                       dataset.empty() ? "breast_cancer" : dataset)
                                 : bdfl::experiment::LoadConfig(config);
    if (!config.empty() && !dataset.empty()) {
      c.dataset = bdfl::experiment::Preset(dataset).dataset;
    }
    bdfl::experiment::ApplyEnvironment(c);
    auto& t = c.training;
    if (!optimizer.empty()) {
      t.optimizer = bdfl::optim::OptimizerKind::Parse(optimizer, t.optimizer.alpha);
    }
    if (alpha) t.optimizer.alpha = *alpha;
    if (rounds) t.rounds = *rounds;
    if (lr) t.schedule.lr0 = *lr;
    if (decay) t.schedule.decay = *decay;
    if (tol) t.tol = *tol;
    if (seed) t.seed = *seed;
    if (key_bits) t.key_bits = *key_bits;
    if (scale_bits) t.scale_bits = *scale_bits;
    if (batch_size) t.batch_size = *batch_size;
    if (max_rows) c.dataset.max_rows = *max_rows;
    if (!mode.empty()) c.mode = bdfl::experiment::ParseMode(mode);
    if (schedule == "threaded") {
      c.schedule = bdfl::federation::Schedule::kThreaded;
    } else if (schedule == "sequential") {
      c.schedule = bdfl::federation::Schedule::kSequential;
    } else if (!schedule.empty()) {
      throw bdfl::ConfigError("schedule must be sequential or threaded");
    }
    if (!out.empty()) c.output_dir = out;
    c.Validate();
    return c;
  }
};

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw bdfl::Error("cannot write " + path.string());
  f << text;
}

int RunTrain(const Overrides& o, const std::string& role,
             const std::vector<std::string>& peers) {
  RunConfig c = o.Build();
  if (!role.empty()) c.network.role = bdfl::federation::ParseRole(role);
  for (const std::string& p : peers) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) {
      throw bdfl::ConfigError("--peer expects role=host:port, got '" + p + "'");
    }
    c.network.endpoints[bdfl::federation::ParseRole(p.substr(0, eq))] =
        bdfl::federation::ParseEndpoint(p.substr(eq + 1));
  }
  if (c.network.role) {
    if (c.mode != bdfl::experiment::Mode::kFederatedSockets) {
      throw bdfl::ConfigError("--role needs --mode federated-sockets");
    }
    const auto data =
        bdfl::experiment::LoadDataset(c.dataset, c.training.seed);
    const auto rounds = bdfl::experiment::RunSingleParty(c, data);
    std::printf("%s finished after %lld rounds; output in %s\n",
                std::string(bdfl::federation::RoleName(*c.network.role)).c_str(),
                static_cast<long long>(rounds), c.output_dir.string().c_str());
    return kOk;
  }
  const auto out = bdfl::experiment::Train(c);
  const auto& r = out.result;
  std::printf(
      "%s %s: %lld rounds%s, final taylor loss %.6f, test accuracy %.4f, "
      "%.1f s; output in %s\n",
      std::string(bdfl::experiment::ModeName(c.mode)).c_str(),
      c.training.optimizer.Name().c_str(),
      static_cast<long long>(r.rounds_executed()),
      r.converged ? " (converged)" : "",
      r.metrics.empty() ? 0.0 : r.metrics.back().taylor_loss,
      r.final_test_accuracy(), out.wall_seconds,
      c.output_dir.string().c_str());
  return kOk;
}

int RunCompare(const Overrides& o, const std::vector<std::string>& configs,
               const std::vector<std::string>& optimizers, double threshold) {
  std::vector<RunConfig> runs;
  if (!configs.empty()) {
    for (const std::string& path : configs) {
      Overrides each = o;
      each.config = path;
      runs.push_back(each.Build());
    }
  } else {
    if (optimizers.empty()) {
      throw bdfl::ConfigError("compare needs --configs or --optimizers");
    }
    for (const std::string& name : optimizers) {
      Overrides each = o;
      each.optimizer = name;
      runs.push_back(each.Build());
    }
  }
  const auto compared = bdfl::experiment::Compare(runs);
  const std::filesystem::path dir = o.out.empty() ? "out/compare" : o.out;
  std::filesystem::create_directories(dir);
  WriteText(dir / "comparison.csv", bdfl::experiment::ComparisonCsv(compared));
  const std::string summary =
      bdfl::experiment::ComparisonSummaryCsv(compared, threshold);
  WriteText(dir / "comparison_summary.csv", summary);
  for (const auto& run : compared) {
    bdfl::WriteMetricsCsv(dir / ("metrics_" + run.label + ".csv"),
                          run.result.metrics);
  }
  std::cout << summary;
  return kOk;
}

int RunAccuracyGrid(const Overrides& o, std::size_t credit_card_rows) {
  RunConfig base = o.Build();
  const auto cells = bdfl::experiment::RunAccuracyGrid(base, credit_card_rows);
  const std::filesystem::path dir = o.out.empty() ? "out/grid" : o.out;
  std::filesystem::create_directories(dir);
  const std::string text = bdfl::experiment::AccuracyGridText(cells);
  WriteText(dir / "grid.txt", text);
  WriteText(dir / "grid.csv", bdfl::experiment::AccuracyGridCsv(cells));
  std::cout << text;
  return kOk;
}

int RunKeygen(int key_bits, std::optional<std::uint64_t> seed,
              const std::string& out) {
  bdfl::crypto::KeyPair kp = [&] {
    if (seed) return bdfl::crypto::GenerateKeyPair(key_bits, *seed);
    bdfl::crypto::SecureRng rng = bdfl::crypto::SecureRng::FromEntropy();
    return bdfl::crypto::GenerateKeyPair(key_bits, rng);
  }();
  const std::filesystem::path dir = out.empty() ? "out/keys" : out;
  std::filesystem::create_directories(dir);
  WriteText(dir / "public_key.json",
            bdfl::crypto::PublicKeyToJson(kp.public_key).dump(2) + "\n");
  WriteText(dir / "private_key.json",
            bdfl::crypto::PrivateKeyToJson(kp.private_key).dump(2) + "\n");
  std::filesystem::permissions(dir / "private_key.json",
                               std::filesystem::perms::owner_read |
                                   std::filesystem::perms::owner_write);
  std::printf("%d-bit key pair written to %s\n", key_bits,
              dir.string().c_str());
  return kOk;
}

int Fail(int code, const char* type, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"type", type}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertical federated logistic regression with quasi-Newton "
               "updates over Paillier encryption"};
  app.require_subcommand(1);

  Overrides train_opts;
  std::string role;
  std::vector<std::string> peers;
  CLI::App* train = app.add_subcommand("train", "run one configuration");
  train_opts.Register(*train, true);
  train->add_option("--role", role,
                    "run a single party (host_a, guest_b, arbiter_c)");
  train->add_option("--peer", peers, "role=host:port, repeatable");

  Overrides compare_opts;
  std::vector<std::string> configs;
  std::vector<std::string> optimizers;
  double threshold = 0.5;
  CLI::App* compare =
      app.add_subcommand("compare", "run several optimizers on one split");
  compare_opts.Register(*compare, false);
  compare->add_option("--configs", configs, "config files to compare");
  compare->add_option("--optimizers", optimizers,
                      "optimizers to compare on the --config/--dataset run");
  compare->add_option("--threshold", threshold,
                      "Taylor loss target for rounds-to-threshold");

  Overrides table_opts;
  std::size_t credit_card_rows = 0;
  CLI::App* grid =
      app.add_subcommand(
          "grid", "test accuracy per dataset and optimizer against targets");
  table_opts.Register(*grid, false);
  grid->add_option("--credit-card-rows", credit_card_rows,
                   "subsample the credit-card data, 0 = all rows");

  int key_bits = 1024;
  std::optional<std::uint64_t> key_seed;
  std::string key_out;
  CLI::App* keygen = app.add_subcommand("keygen", "write a Paillier key pair");
  keygen->add_option("--key-bits", key_bits, "512, 1024, 2048 or 3072");
  keygen->add_option("--seed", key_seed, "deterministic key from a seed");
  keygen->add_option("--out", key_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return RunTrain(train_opts, role, peers);
    if (compare->parsed()) {
      return RunCompare(compare_opts, configs, optimizers, threshold);
    }
    if (grid->parsed()) return RunAccuracyGrid(table_opts, credit_card_rows);
    if (keygen->parsed()) return RunKeygen(key_bits, key_seed, key_out);
  } catch (const bdfl::ConfigError& e) {
    return Fail(kConfigFailure, "config", e.what());
  } catch (const bdfl::DataError& e) {
    return Fail(kDataFailure, "data", e.what());
  } catch (const bdfl::ProtocolError& e) {
    return Fail(kProtocolFailure, "protocol", e.what());
  } catch (const bdfl::CryptoError& e) {
    return Fail(kProtocolFailure, "crypto", e.what());
  } catch (const std::exception& e) {
    return Fail(kFailure, "internal", e.what());
  }
  return kFailure;
}

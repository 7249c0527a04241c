/*
 * Copyright 2026 The sbtplus Authors.
 *
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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbt/cli/commands.h"
#include "sbt/cli/config.h"
#include "sbt/common/error.h"

namespace {

struct PartyFlags {
  std::string config;
  std::string party;
  std::string data;
  std::vector<std::string> overrides;
};

void AddPartyFlags(CLI::App* cmd, PartyFlags& f) {
  cmd->add_option("-c,--config", f.config, "key = value training config file");
  cmd->add_option("--party", f.party,
                  "run one party of a tcp session: guest or host:<k>");
  cmd->add_option("--data", f.data, "data file of the selected party");
  cmd->add_option("-s,--set", f.overrides, "override a config key (key=value)")
      ->take_all();
}

sbt::cli::RunOptions MakeRun(const PartyFlags& f) {
  sbt::cli::RunOptions run;
  run.party = sbt::cli::PartySpec::Parse(f.party);
  run.data_override = f.data;
  return run;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertical federated gradient boosting with packed Paillier "
               "ciphertexts"};
  app.require_subcommand(1);

  PartyFlags train_flags;
  auto* train = app.add_subcommand("train", "train a federated model");
  AddPartyFlags(train, train_flags);

  PartyFlags predict_flags;
  std::string predict_models, predict_out;
  auto* predict = app.add_subcommand("predict", "score a dataset");
  AddPartyFlags(predict, predict_flags);
  predict->add_option("-m,--model-dir", predict_models,
                      "directory with the model shards (default output_dir)");
  predict->add_option("-o,--out", predict_out,
                      "score CSV (default <output_dir>/scores.csv)");

  PartyFlags eval_flags;
  std::string eval_models;
  auto* eval = app.add_subcommand("eval", "AUC or accuracy on labelled data");
  AddPartyFlags(eval, eval_flags);
  eval->add_option("-m,--model-dir", eval_models,
                   "directory with the model shards (default output_dir)");

  sbt::cost::CostParams cost_params;
  cost_params.n_instances = 1e6;
  cost_params.n_features = 2000;
  cost_params.n_bins = 32;
  cost_params.depth = 5;
  cost_params.capacity = 0;
  auto* cost = app.add_subcommand("cost-estimate",
                                  "closed-form per-tree cost comparison");
  cost->add_option("--n-instances", cost_params.n_instances)->capture_default_str();
  cost->add_option("--n-features", cost_params.n_features)->capture_default_str();
  cost->add_option("--n-bins", cost_params.n_bins)->capture_default_str();
  cost->add_option("--depth", cost_params.depth)->capture_default_str();
  cost->add_option("--capacity", cost_params.capacity,
                   "split infos per ciphertext (0 derives it from the key)")
      ->capture_default_str();
  cost->add_option("--key-bits", cost_params.key_bits)->capture_default_str();
  cost->add_option("--precision", cost_params.precision)->capture_default_str();

  int key_bits = 1024;
  std::string key_out;
  auto* keygen = app.add_subcommand("keygen", "generate a Paillier key pair");
  keygen->add_option("--bits", key_bits)->capture_default_str();
  keygen->add_option("-o,--out", key_out, "write the key pair as JSON");

  sbt::cli::SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "write a synthetic vertically split dataset");
  synth->add_option("--rows", synth_opts.rows)->capture_default_str();
  synth->add_option("--features", synth_opts.features)->capture_default_str();
  synth->add_option("--classes", synth_opts.classes)->capture_default_str();
  synth->add_option("--hosts", synth_opts.hosts)->capture_default_str();
  synth->add_option("--zero-rate", synth_opts.zero_rate,
                    "fraction of binary-task values set to zero")
      ->capture_default_str();
  synth->add_option("--seed", synth_opts.seed)->capture_default_str();
  synth->add_option("-o,--out-dir", synth_opts.out_dir)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : sbt::cli::kExitConfig;
  }

  try {
    if (*train) {
      auto config = sbt::cli::LoadTrainConfig(train_flags.config,
                                              train_flags.overrides);
      sbt::cli::Train(config, MakeRun(train_flags), std::cout);
    } else if (*predict) {
      auto config = sbt::cli::LoadTrainConfig(predict_flags.config,
                                              predict_flags.overrides);
      std::string dir = predict_models.empty() ? config.output_dir
                                               : predict_models;
      std::string out = predict_out.empty() ? dir + "/scores.csv"
                                            : predict_out;
      sbt::cli::Predict(config, MakeRun(predict_flags), dir, out, std::cout);
    } else if (*eval) {
      auto config = sbt::cli::LoadTrainConfig(eval_flags.config,
                                              eval_flags.overrides);
      std::string dir = eval_models.empty() ? config.output_dir : eval_models;
      sbt::cli::Evaluate(config, MakeRun(eval_flags), dir, std::cout);
    } else if (*cost) {
      if (cost_params.capacity == 0) {
        cost_params.capacity = sbt::cost::CapacityFor(
            cost_params.n_instances, cost_params.key_bits,
            cost_params.precision);
      }
      sbt::cli::PrintCostEstimate(cost_params, std::cout);
    } else if (*keygen) {
      sbt::cli::Keygen(key_bits, key_out, std::cout);
    } else if (*synth) {
      sbt::cli::Synthesize(synth_opts, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sbt::cli::ExitCodeFor(e);
  }
  return 0;
}

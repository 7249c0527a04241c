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

#ifndef SBT_CLI_COMMANDS_H_
#define SBT_CLI_COMMANDS_H_

#include <cstdint>
#include <exception>
#include <ostream>
#include <string>

#include "sbt/cli/config.h"
#include "sbt/cost/cost_model.h"
#include "sbt/federation/guest.h"

namespace sbt::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitProtocol = 3;
inline constexpr int kExitCrypto = 4;

int ExitCodeFor(const std::exception& e);

// "guest" or "host:<k>" (k >= 1); empty selects every party in-process.
struct PartySpec {
  bool all = true;
  int party = 0;
  static PartySpec Parse(const std::string& text);
};

std::string GuestModelPath(const std::string& dir);
std::string HostModelPath(const std::string& dir, int party);
std::string TrainLogPath(const std::string& dir);

struct RunOptions {
  PartySpec party;
  std::string data_override;  // replaces the selected party's data path
};

// Trains and writes model shards plus the guest's JSON-lines training log
// into config.output_dir.
void Train(const TrainConfig& config, const RunOptions& run, std::ostream& out);

// Writes a CSV of scores for the aligned rows: id, raw margins,
// probabilities and predicted class. Host parties only serve decisions.
void Predict(const TrainConfig& config, const RunOptions& run,
             const std::string& model_dir, const std::string& out_path,
             std::ostream& out);

struct EvalResult {
  std::string metric;  // "auc" or "accuracy"
  double value = 0.0;
  size_t instances = 0;
};

// Predicts on labelled guest data and scores it. Host parties return an
// empty result.
EvalResult Evaluate(const TrainConfig& config, const RunOptions& run,
                    const std::string& model_dir, std::ostream& out);

// Prints baseline and optimized estimates with reduction percentages.
void PrintCostEstimate(const cost::CostParams& params, std::ostream& out);

// Generates a key pair and writes it as JSON (hex integers).
void Keygen(int key_bits, const std::string& out_path, std::ostream& out);

struct SynthOptions {
  int rows = 1000;
  int features = 10;
  int classes = 2;  // 2 draws a binary task
  int hosts = 1;
  double zero_rate = 0.0;
  uint64_t seed = 1;
  std::string out_dir = ".";
};

// Writes guest.csv (labelled) and host<k>.csv with an even vertical split of
// a synthetic task.
void Synthesize(const SynthOptions& options, std::ostream& out);

// Serializes one training log entry per line.
std::string TrainingLogJsonl(const federation::TrainingLog& log);

}  // namespace sbt::cli

#endif  // SBT_CLI_COMMANDS_H_

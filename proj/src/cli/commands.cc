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

#include "sbt/cli/commands.h"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "sbt/common/error.h"
#include "sbt/data/align.h"
#include "sbt/data/dataset.h"
#include "sbt/data/synthetic.h"
#include "sbt/federation/host.h"
#include "sbt/federation/session.h"
#include "sbt/federation/transport.h"
#include "sbt/he/paillier.h"
#include "sbt/tree/metrics.h"

namespace sbt::cli {
namespace {

using federation::Transport;
using nlohmann::json;

bool IsTransportError(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const TransportError&) {
    return true;
  } catch (...) {
    return false;
  }
}

// Every party on its own thread, talking over loopback TCP.
template <typename GuestFn, typename HostFn>
void RunAllOverTcp(const std::string& address, int num_hosts, GuestFn guest_fn,
                   HostFn host_fn) {
  auto [host, port] = federation::ParseAddress(address);
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> host_errors(num_hosts);
  std::exception_ptr guest_error;
  try {
    auto guest = federation::TcpTransport::Listen(
        port, num_hosts, [&, host = host](uint16_t bound) {
          for (int k = 1; k <= num_hosts; ++k) {
            threads.emplace_back([&, k, host, bound] {
              try {
                auto t = federation::TcpTransport::Connect(k, host, bound);
                host_fn(k, *t);
              } catch (...) {
                host_errors[k - 1] = std::current_exception();
              }
            });
          }
        });
    guest_fn(guest.get());
  } catch (...) {
    guest_error = std::current_exception();
  }
  for (auto& t : threads) t.join();
  for (const auto& e : host_errors) {
    if (e && !IsTransportError(e)) std::rethrow_exception(e);
  }
  if (guest_error) std::rethrow_exception(guest_error);
  for (const auto& e : host_errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string GuestDataPath(const TrainConfig& c, const RunOptions& run) {
  std::string path = !run.data_override.empty() ? run.data_override
                                                : c.guest_data;
  if (path.empty()) throw ConfigError("guest_data: no guest data file given");
  return path;
}

std::string HostDataPath(const TrainConfig& c, const RunOptions& run, int k) {
  if (!run.data_override.empty() && !run.party.all) return run.data_override;
  if (k < 1 || k > static_cast<int>(c.host_data.size())) {
    throw ConfigError("host_data: no data file for host " + std::to_string(k));
  }
  return c.host_data[k - 1];
}

std::unique_ptr<Transport> ConnectAsParty(const TrainConfig& c, int party) {
  auto [host, port] = federation::ParseAddress(c.guest_address);
  if (party == 0) {
    return federation::TcpTransport::Listen(port, c.HostCount());
  }
  if (party > c.HostCount()) {
    throw ConfigError("host:" + std::to_string(party) + " exceeds num_hosts");
  }
  return federation::TcpTransport::Connect(party, host, port);
}

void EnsureDir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create directory " + dir);
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

void PrintEpochs(const federation::TrainResult& r, std::ostream& out) {
  const char* metric =
      r.model.task == federation::Task::kBinary ? "auc" : "accuracy";
  for (const auto& e : r.log.epochs) {
    out << "epoch " << e.epoch << "  loss " << std::fixed
        << std::setprecision(6) << e.loss << "  train_" << metric << " "
        << e.metric << "  " << std::setprecision(2) << e.seconds << "s\n";
    out.unsetf(std::ios::fixed);
  }
}

void WriteScores(const std::string& path, const federation::GuestModel& model,
                 const federation::PredictOutput& p) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << std::setprecision(17);
  const size_t w = p.raw.cols;
  out << "id";
  if (model.task == federation::Task::kBinary) {
    out << ",raw,probability,prediction\n";
  } else {
    for (size_t c = 0; c < w; ++c) out << ",raw_" << c;
    for (size_t c = 0; c < w; ++c) out << ",prob_" << c;
    out << ",prediction\n";
  }
  for (size_t i = 0; i < p.raw.rows; ++i) {
    out << p.instance_ids[i];
    for (size_t c = 0; c < w; ++c) out << "," << p.raw.at(i, c);
    for (size_t c = 0; c < w; ++c) out << "," << p.probabilities.at(i, c);
    if (model.task == federation::Task::kBinary) {
      out << "," << (p.probabilities.at(i, 0) >= 0.5 ? 1 : 0) << "\n";
    } else {
      auto row = p.probabilities.row(i);
      out << "," << (std::max_element(row.begin(), row.end()) - row.begin())
          << "\n";
    }
  }
}

federation::PredictOutput RunPrediction(const TrainConfig& config,
                                        const RunOptions& run,
                                        const std::string& model_dir,
                                        bool keep_labels,
                                        data::PartyDataset* guest_data) {
  const PartySpec& party = run.party;
  if (!party.all && party.party > 0) {
    auto model = federation::LoadHostModel(
        HostModelPath(model_dir, party.party));
    auto data = data::ReadDataset(HostDataPath(config, run, party.party), false);
    auto t = ConnectAsParty(config, party.party);
    federation::RunHostPrediction(data, model, *t);
    return {};
  }
  auto model = federation::LoadGuestModel(GuestModelPath(model_dir));
  *guest_data = data::ReadDataset(GuestDataPath(config, run), keep_labels);
  const std::string& salt = config.params.id_salt;
  if (!party.all || model.num_hosts == 0) {
    std::unique_ptr<Transport> t;
    if (model.num_hosts > 0) t = ConnectAsParty(config, 0);
    return federation::RunGuestPrediction(*guest_data, model, t.get(), salt);
  }
  std::vector<federation::HostModel> host_models;
  std::vector<data::PartyDataset> hosts;
  for (int k = 1; k <= model.num_hosts; ++k) {
    host_models.push_back(
        federation::LoadHostModel(HostModelPath(model_dir, k)));
    hosts.push_back(data::ReadDataset(HostDataPath(config, run, k), false));
  }
  if (config.transport == "inproc") {
    return federation::PredictInProcess(model, host_models, *guest_data, hosts);
  }
  federation::PredictOutput out;
  RunAllOverTcp(
      config.guest_address, model.num_hosts,
      [&](Transport* t) {
        out = federation::RunGuestPrediction(*guest_data, model, t, salt);
      },
      [&](int k, Transport& t) {
        federation::RunHostPrediction(hosts[k - 1], host_models[k - 1], t);
      });
  return out;
}

std::string Hex(const he::BigInt& v) { return v.get_str(16); }

}  // namespace

int ExitCodeFor(const std::exception& e) {
  if (auto* err = dynamic_cast<const Error*>(&e)) {
    return static_cast<int>(err->code());
  }
  return kExitInternal;
}

PartySpec PartySpec::Parse(const std::string& text) {
  PartySpec p;
  if (text.empty()) return p;
  p.all = false;
  if (text == "guest") return p;
  if (text.rfind("host:", 0) == 0) {
    try {
      size_t pos = 0;
      int k = std::stoi(text.substr(5), &pos);
      if (pos == text.size() - 5 && k >= 1) {
        p.party = k;
        return p;
      }
    } catch (...) {
    }
  }
  throw ConfigError("party: expected guest or host:<k>, got '" + text + "'");
}

std::string GuestModelPath(const std::string& dir) {
  return (std::filesystem::path(dir) / "guest_model.json").string();
}

std::string HostModelPath(const std::string& dir, int party) {
  return (std::filesystem::path(dir) /
          ("host_" + std::to_string(party) + "_model.json"))
      .string();
}

std::string TrainLogPath(const std::string& dir) {
  return (std::filesystem::path(dir) / "train_log.jsonl").string();
}

std::string TrainingLogJsonl(const federation::TrainingLog& log) {
  auto stats = [](const federation::TransportStats& s) {
    json by_kind = json::object();
    for (int k = 1; k < federation::kNumMessageKinds; ++k) {
      if (s.by_kind[k] == 0) continue;
      by_kind[federation::KindName(static_cast<federation::MessageKind>(k))] =
          s.by_kind[k];
    }
    return json{{"messages", s.messages},
                {"bytes", s.bytes},
                {"ciphertexts", s.ciphertexts},
                {"by_kind", by_kind}};
  };
  std::string out;
  for (const auto& t : log.trees) {
    json j = {{"type", "tree"},
              {"tree", t.tree},
              {"epoch", t.epoch},
              {"class_index", t.class_index},
              {"owner", t.owner},
              {"leaves", t.leaves},
              {"depth", t.depth},
              {"seconds", t.seconds},
              {"sent", stats(t.sent)},
              {"received", stats(t.received)},
              {"he_ops",
               {{"encryptions", t.ops.encryptions},
                {"decryptions", t.ops.decryptions},
                {"additions", t.ops.additions},
                {"scalar_muls", t.ops.scalar_muls},
                {"rerandomizations", t.ops.rerandomizations}}}};
    out += j.dump() + "\n";
  }
  for (const auto& e : log.epochs) {
    json j = {{"type", "epoch"},     {"epoch", e.epoch},
              {"loss", e.loss},      {"metric", e.metric},
              {"sampled", e.sampled}, {"seconds", e.seconds}};
    out += j.dump() + "\n";
  }
  return out;
}

void Train(const TrainConfig& config, const RunOptions& run,
           std::ostream& out) {
  config.Validate();
  const int num_hosts = config.HostCount();
  const PartySpec& party = run.party;
  EnsureDir(config.output_dir);

  if (!party.all && party.party > 0) {
    auto data = data::ReadDataset(HostDataPath(config, run, party.party), false);
    auto t = ConnectAsParty(config, party.party);
    federation::HostOptions options;
    options.seed = federation::HostSeed(config.params.seed, party.party);
    auto model = federation::RunHostTraining(data, *t, options);
    federation::SaveHostModel(HostModelPath(config.output_dir, party.party),
                              model);
    out << "host " << party.party << " stored " << model.splits.size()
        << " splits in " << HostModelPath(config.output_dir, party.party)
        << "\n";
    return;
  }

  auto guest = data::ReadDataset(GuestDataPath(config, run), true);
  auto start = std::chrono::steady_clock::now();
  federation::TrainResult result;
  std::vector<federation::HostModel> host_models;

  if (!party.all || num_hosts == 0) {
    std::unique_ptr<Transport> t;
    if (num_hosts > 0) t = ConnectAsParty(config, 0);
    result = federation::RunGuestTraining(guest, config.params, t.get(),
                                          num_hosts);
  } else {
    std::vector<data::PartyDataset> hosts;
    for (int k = 1; k <= num_hosts; ++k) {
      hosts.push_back(data::ReadDataset(HostDataPath(config, run, k), false));
    }
    if (config.transport == "inproc") {
      auto r = federation::TrainInProcess(guest, hosts, config.params);
      result = std::move(r.guest);
      host_models = std::move(r.hosts);
    } else {
      host_models.resize(num_hosts);
      RunAllOverTcp(
          config.guest_address, num_hosts,
          [&](Transport* t) {
            result = federation::RunGuestTraining(guest, config.params, t,
                                                  num_hosts);
          },
          [&](int k, Transport& t) {
            federation::HostOptions options;
            options.seed = federation::HostSeed(config.params.seed, k);
            host_models[k - 1] =
                federation::RunHostTraining(hosts[k - 1], t, options);
          });
    }
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  federation::SaveGuestModel(GuestModelPath(config.output_dir), result.model);
  for (const auto& m : host_models) {
    federation::SaveHostModel(HostModelPath(config.output_dir, m.party), m);
  }
  WriteText(TrainLogPath(config.output_dir), TrainingLogJsonl(result.log));

  PrintEpochs(result, out);
  uint64_t messages = 0, ciphertexts = 0, bytes = 0;
  for (const auto& t : result.log.trees) {
    messages += t.sent.messages + t.received.messages;
    bytes += t.sent.bytes + t.received.bytes;
    ciphertexts += t.sent.ciphertexts;
  }
  out << result.model.trees.size() << " trees, " << result.instance_ids.size()
      << " aligned instances, " << std::fixed << std::setprecision(2)
      << seconds << "s total\n";
  out.unsetf(std::ios::fixed);
  out << "guest traffic during trees: " << messages << " messages, " << bytes
      << " bytes, " << ciphertexts << " ciphertexts sent\n";
  out << "models written to " << config.output_dir << "\n";
}

void Predict(const TrainConfig& config, const RunOptions& run,
             const std::string& model_dir, const std::string& out_path,
             std::ostream& out) {
  data::PartyDataset guest;
  auto p = RunPrediction(config, run, model_dir, false, &guest);
  if (!run.party.all && run.party.party > 0) {
    out << "host " << run.party.party << " served prediction\n";
    return;
  }
  auto model = federation::LoadGuestModel(GuestModelPath(model_dir));
  WriteScores(out_path, model, p);
  out << "wrote " << p.raw.rows << " scores to " << out_path << "\n";
}

EvalResult Evaluate(const TrainConfig& config, const RunOptions& run,
                    const std::string& model_dir, std::ostream& out) {
  data::PartyDataset guest;
  auto p = RunPrediction(config, run, model_dir, true, &guest);
  if (!run.party.all && run.party.party > 0) {
    out << "host " << run.party.party << " served evaluation\n";
    return {};
  }
  // Labels follow the aligned order of the prediction output.
  std::map<std::string, double> label_of;
  for (size_t i = 0; i < guest.num_instances(); ++i) {
    label_of[guest.instance_ids[i]] = (*guest.labels)[i];
  }
  std::vector<double> labels;
  for (const auto& id : p.instance_ids) labels.push_back(label_of.at(id));

  EvalResult r;
  r.instances = labels.size();
  if (p.raw.cols == 1) {
    r.metric = "auc";
    r.value = tree::Auc(labels, p.raw.data);
  } else {
    r.metric = "accuracy";
    r.value = tree::Accuracy(labels, p.raw);
  }
  out << std::setprecision(6) << r.metric << " " << r.value << " on "
      << r.instances << " instances\n";
  return r;
}

void PrintCostEstimate(const cost::CostParams& params, std::ostream& out) {
  auto base = cost::EstimateBaseline(params);
  auto opt = cost::EstimateOptimized(params);
  auto red = cost::Reduction(base, opt);
  char line[160];
  std::snprintf(line, sizeof(line),
                "n_i=%.0f n_f=%.0f n_b=%.0f h=%d n_n=%.0f eta_s=%d\n",
                params.n_instances, params.n_features, params.n_bins,
                params.depth, params.nodes(), params.capacity);
  out << line;
  std::snprintf(line, sizeof(line), "%-10s %20s %20s %10s\n", "cost",
                "baseline", "optimized", "reduction");
  out << line;
  auto row = [&](const char* name, double b, double o, double r) {
    std::snprintf(line, sizeof(line), "%-10s %20.6g %20.6g %9.3f%%\n", name, b,
                  o, 100.0 * r);
    out << line;
  };
  row("comp", base.comp, opt.comp, red.comp);
  row("ende", base.ende, opt.ende, red.ende);
  row("comm", base.comm, opt.comm, red.comm);
}

void Keygen(int key_bits, const std::string& out_path, std::ostream& out) {
  auto start = std::chrono::steady_clock::now();
  he::KeyPair keys = he::GenerateKeyPair(key_bits);
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  json j = {{"key_bits", keys.public_key.key_bits},
            {"n", Hex(keys.public_key.n)},
            {"lambda", Hex(keys.secret_key.lambda)},
            {"mu", Hex(keys.secret_key.mu)},
            {"fingerprint", he::FingerprintHex(keys.public_key.fingerprint)}};
  if (!out_path.empty()) WriteText(out_path, j.dump(1) + "\n");
  out << "generated " << key_bits << "-bit key "
      << he::FingerprintHex(keys.public_key.fingerprint) << " in "
      << std::setprecision(3) << seconds << "s\n";
}

void Synthesize(const SynthOptions& o, std::ostream& out) {
  if (o.rows < 2) throw ConfigError("rows: expected at least 2");
  if (o.hosts < 0) throw ConfigError("hosts: expected a non-negative integer");
  if (o.features < o.hosts + 1) {
    throw ConfigError("features: need at least one column per party");
  }
  if (o.classes < 2) throw ConfigError("classes: expected at least 2");
  if (o.zero_rate < 0 || o.zero_rate >= 1) {
    throw ConfigError("zero_rate: expected a value in [0, 1)");
  }
  const auto n = static_cast<size_t>(o.rows);
  const auto d = static_cast<size_t>(o.features);
  data::PartyDataset all;
  if (o.classes > 2) {
    all = data::MakeSyntheticMulticlass(n, d, o.classes, o.seed);
  } else if (o.zero_rate > 0) {
    all = data::MakeSyntheticSparseBinary(n, d, o.zero_rate, o.seed);
  } else {
    all = data::MakeSyntheticBinary(n, d, o.seed);
  }
  std::vector<double> fractions(static_cast<size_t>(o.hosts) + 1,
                                1.0 / (o.hosts + 1));
  auto parts = data::VerticalSplit(all, fractions);
  EnsureDir(o.out_dir);
  for (size_t p = 0; p < parts.size(); ++p) {
    std::string name = p == 0 ? "guest.csv" : "host" + std::to_string(p) + ".csv";
    std::string path = (std::filesystem::path(o.out_dir) / name).string();
    data::WriteCsv(path, parts[p]);
    out << "wrote " << parts[p].num_instances() << "x"
        << parts[p].num_features() << " to " << path << "\n";
  }
}

}  // namespace sbt::cli

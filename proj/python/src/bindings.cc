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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sbt/cli/commands.h"
#include "sbt/common/error.h"
#include "sbt/cost/cost_model.h"
#include "sbt/data/synthetic.h"
#include "sbt/encoding/compress.h"
#include "sbt/encoding/gh_packing.h"
#include "sbt/federation/model.h"
#include "sbt/federation/session.h"
#include "sbt/he/paillier.h"
#include "sbt/tree/metrics.h"

namespace py = pybind11;

namespace sbt::python {
namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::int_ ToPy(const he::BigInt& v) {
  std::string hex = v.get_str(16);
  return py::reinterpret_steal<py::int_>(
      PyLong_FromString(hex.c_str(), nullptr, 16));
}

he::BigInt FromPy(const py::int_& v) {
  std::string hex = py::str(py::module_::import("builtins").attr("format")(v, "x"));
  return he::BigInt(hex, 16);
}

Matrix ToMatrix(const Array& a, const char* what) {
  if (a.ndim() != 2) throw DataError(std::string(what) + ": expected a 2-d array");
  Matrix m(static_cast<size_t>(a.shape(0)), static_cast<size_t>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), m.data.begin());
  return m;
}

Array FromMatrix(const Matrix& m) {
  Array out({m.rows, m.cols});
  std::copy(m.data.begin(), m.data.end(), out.mutable_data());
  return out;
}

std::string RowId(size_t i) { return "r" + std::to_string(i); }

data::PartyDataset MakeParty(const Array& features, const char* prefix,
                             std::optional<Array> labels) {
  data::PartyDataset ds;
  ds.features = ToMatrix(features, prefix);
  for (size_t i = 0; i < ds.features.rows; ++i) ds.instance_ids.push_back(RowId(i));
  for (size_t j = 0; j < ds.features.cols; ++j) {
    ds.feature_names.push_back(std::string(prefix) + std::to_string(j));
  }
  if (labels) {
    if (labels->ndim() != 1 || static_cast<size_t>(labels->size()) != ds.features.rows) {
      throw DataError("labels: expected one value per row");
    }
    ds.labels.emplace(labels->data(), labels->data() + labels->size());
  }
  return ds;
}

std::vector<data::PartyDataset> MakeHosts(const std::vector<Array>& hosts) {
  std::vector<data::PartyDataset> out;
  for (size_t k = 0; k < hosts.size(); ++k) {
    out.push_back(MakeParty(hosts[k], ("h" + std::to_string(k + 1) + "_").c_str(), {}));
  }
  return out;
}

// Rows of `m` reordered from aligned order back to input order.
Matrix InInputOrder(const Matrix& m, const std::vector<std::string>& ids,
                    size_t n) {
  Matrix out(n, m.cols, std::nan(""));
  for (size_t r = 0; r < ids.size(); ++r) {
    size_t i = std::stoul(ids[r].substr(1));
    std::copy(m.row(r).begin(), m.row(r).end(), out.row(i).begin());
  }
  return out;
}

// A key pair plus the randomness used for encryption.
class PyKeyPair {
 public:
  PyKeyPair(int bits, std::optional<uint64_t> seed)
      : keys_(he::GenerateKeyPair(bits, seed)),
        rng_(seed ? he::RandomSource::FromSeed(*seed ^ 0x9e3779b97f4a7c15ULL)
                  : he::RandomSource::FromEntropy()) {}

  const he::PublicKey& pk() const { return keys_.public_key; }
  he::Ciphertext Encrypt(const py::int_& m) { return he::Encrypt(pk(), FromPy(m), rng_); }
  py::int_ Decrypt(const he::Ciphertext& c) const { return ToPy(he::Decrypt(keys_, c)); }
  he::Ciphertext Rerandomize(const he::Ciphertext& c) {
    return he::Rerandomize(pk(), c, rng_);
  }

 private:
  he::KeyPair keys_;
  he::RandomSource rng_;
};

struct TrainedModel {
  federation::GuestModel guest;
  std::vector<federation::HostModel> hosts;
  Matrix train_scores;
  federation::TrainingLog log;

  py::dict Predict(const Array& guest_features,
                   const std::vector<Array>& host_features) const {
    auto g = MakeParty(guest_features, "g", {});
    auto h = MakeHosts(host_features);
    federation::PredictOutput out;
    {
      py::gil_scoped_release release;
      out = federation::PredictInProcess(guest, hosts, g, h);
    }
    py::dict d;
    d["raw"] = FromMatrix(InInputOrder(out.raw, out.instance_ids, g.num_instances()));
    d["probabilities"] = FromMatrix(
        InInputOrder(out.probabilities, out.instance_ids, g.num_instances()));
    return d;
  }

  void Save(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    federation::SaveGuestModel(cli::GuestModelPath(dir), guest);
    for (const auto& h : hosts) {
      federation::SaveHostModel(cli::HostModelPath(dir, h.party), h);
    }
  }

  static TrainedModel Load(const std::string& dir) {
    TrainedModel m;
    m.guest = federation::LoadGuestModel(cli::GuestModelPath(dir));
    for (int k = 1; k <= m.guest.num_hosts; ++k) {
      m.hosts.push_back(federation::LoadHostModel(cli::HostModelPath(dir, k)));
    }
    return m;
  }
};

TrainedModel Train(const Array& guest_features, const Array& labels,
                   const std::vector<Array>& host_features,
                   const federation::BoostingParams& params) {
  auto g = MakeParty(guest_features, "g", labels);
  auto h = MakeHosts(host_features);
  federation::InProcessTraining run;
  {
    py::gil_scoped_release release;
    run = federation::TrainInProcess(g, h, params);
  }
  TrainedModel m;
  m.guest = std::move(run.guest.model);
  m.hosts = std::move(run.hosts);
  m.train_scores = InInputOrder(run.guest.train_scores, run.guest.instance_ids,
                                g.num_instances());
  m.log = std::move(run.guest.log);
  return m;
}

py::dict CostDict(const cost::CostEstimate& e) {
  py::dict d;
  d["comp"] = e.comp;
  d["ende"] = e.ende;
  d["comm"] = e.comm;
  return d;
}

}  // namespace
}  // namespace sbt::python

PYBIND11_MODULE(_core, m) {
  using namespace sbt;
  using namespace sbt::python;
  m.doc() = "Vertical federated gradient boosting with packed Paillier ciphertexts";

  auto base = py::register_exception<Error>(m, "SbtError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<DataError>(m, "DataError", base);
  py::register_exception<ProtocolError>(m, "ProtocolError", base);
  py::register_exception<CryptoError>(m, "CryptoError", base);

  // Paillier.
  py::class_<he::Ciphertext>(m, "Ciphertext")
      .def_property_readonly("value", [](const he::Ciphertext& c) { return ToPy(c.value); });
  py::class_<PyKeyPair>(m, "KeyPair")
      .def(py::init<int, std::optional<uint64_t>>(), py::arg("bits") = 1024,
           py::arg("seed") = py::none())
      .def_property_readonly("n", [](const PyKeyPair& k) { return ToPy(k.pk().n); })
      .def_property_readonly("key_bits", [](const PyKeyPair& k) { return k.pk().key_bits; })
      .def_property_readonly("max_plaintext_bits",
                             [](const PyKeyPair& k) { return k.pk().MaxPlaintextBits(); })
      .def_property_readonly("fingerprint", [](const PyKeyPair& k) {
        return he::FingerprintHex(k.pk().fingerprint);
      })
      .def("encrypt", &PyKeyPair::Encrypt, py::arg("m"))
      .def("decrypt", &PyKeyPair::Decrypt, py::arg("c"))
      .def("rerandomize", &PyKeyPair::Rerandomize, py::arg("c"))
      .def("add", [](const PyKeyPair& k, const he::Ciphertext& a,
                     const he::Ciphertext& b) { return he::Add(k.pk(), a, b); })
      .def("sub", [](const PyKeyPair& k, const he::Ciphertext& a,
                     const he::Ciphertext& b) { return he::Subtract(k.pk(), a, b); })
      .def("scalar_mul", [](const PyKeyPair& k, const py::int_& s,
                            const he::Ciphertext& c) {
        return he::ScalarMul(k.pk(), FromPy(s), c);
      });

  // Encoding.
  py::class_<encoding::PackState>(m, "PackState")
      .def_readonly("precision", &encoding::PackState::precision)
      .def_readonly("g_offset", &encoding::PackState::g_offset)
      .def_readonly("g_max", &encoding::PackState::g_max)
      .def_readonly("h_max", &encoding::PackState::h_max)
      .def_readonly("g_bits", &encoding::PackState::g_bits)
      .def_readonly("h_bits", &encoding::PackState::h_bits)
      .def_readonly("n_instances", &encoding::PackState::n_instances)
      .def_property_readonly("gh_bits", &encoding::PackState::gh_bits);
  m.def("assign_bits", &encoding::AssignBits, py::arg("n_instances"), py::arg("g_max"),
        py::arg("g_offset"), py::arg("h_max"), py::arg("precision"),
        py::arg("plaintext_bits"));
  m.def("compute_pack_state",
        [](const std::vector<double>& g, const std::vector<double>& h, int precision,
           int plaintext_bits) {
          return encoding::ComputePackState(g, h, precision, plaintext_bits);
        },
        py::arg("g"), py::arg("h"), py::arg("precision") = encoding::kDefaultPrecision,
        py::arg("plaintext_bits") = 1023);
  m.def("compress_capacity", &encoding::CompressCapacity, py::arg("plaintext_bits"),
        py::arg("gh_bits"));
  m.def("pack_gh",
        [](double g, double h, const encoding::PackState& s) {
          return ToPy(encoding::PackGh(g, h, s));
        },
        py::arg("g"), py::arg("h"), py::arg("state"));
  m.def("unpack_gh",
        [](const py::int_& v, const encoding::PackState& s, int64_t count) {
          encoding::GhSum sum = encoding::UnpackGh(FromPy(v), s, count);
          return py::make_tuple(sum.g, sum.h);
        },
        py::arg("value"), py::arg("state"), py::arg("sample_count"));

  // Training.
  py::class_<federation::BoostingParams>(m, "BoostingParams")
      .def(py::init<>())
      .def_static("baseline", &federation::BoostingParams::Baseline)
      .def_readwrite("tree_num", &federation::BoostingParams::tree_num)
      .def_readwrite("max_depth", &federation::BoostingParams::max_depth)
      .def_readwrite("learning_rate", &federation::BoostingParams::learning_rate)
      .def_readwrite("max_bins", &federation::BoostingParams::max_bins)
      .def_readwrite("lambda_", &federation::BoostingParams::lambda)
      .def_readwrite("min_gain", &federation::BoostingParams::min_gain)
      .def_readwrite("min_samples", &federation::BoostingParams::min_samples)
      .def_readwrite("precision", &federation::BoostingParams::precision)
      .def_readwrite("key_bits", &federation::BoostingParams::key_bits)
      .def_readwrite("goss", &federation::BoostingParams::goss)
      .def_readwrite("top_rate", &federation::BoostingParams::top_rate)
      .def_readwrite("other_rate", &federation::BoostingParams::other_rate)
      .def_readwrite("gh_packing", &federation::BoostingParams::gh_packing)
      .def_readwrite("hist_subtraction", &federation::BoostingParams::hist_subtraction)
      .def_readwrite("cipher_compress", &federation::BoostingParams::cipher_compress)
      .def_readwrite("seed", &federation::BoostingParams::seed)
      .def_readwrite("deterministic_crypto",
                     &federation::BoostingParams::deterministic_crypto)
      .def_readwrite("id_salt", &federation::BoostingParams::id_salt)
      .def_property(
          "mode", [](const federation::BoostingParams& p) { return modes::ModeName(p.mode.mode); },
          [](federation::BoostingParams& p, const std::string& v) {
            p.mode.mode = modes::ParseMode(v);
          })
      .def_property(
          "tree_per_party", [](const federation::BoostingParams& p) { return p.mode.tree_per_party; },
          [](federation::BoostingParams& p, int v) { p.mode.tree_per_party = v; })
      .def_property(
          "guest_depth", [](const federation::BoostingParams& p) { return p.mode.guest_depth; },
          [](federation::BoostingParams& p, int v) { p.mode.guest_depth = v; })
      .def_property(
          "host_depth", [](const federation::BoostingParams& p) { return p.mode.host_depth; },
          [](federation::BoostingParams& p, int v) { p.mode.host_depth = v; });

  py::class_<TrainedModel>(m, "Model")
      .def_property_readonly("num_trees",
                             [](const TrainedModel& t) { return t.guest.trees.size(); })
      .def_property_readonly("num_classes",
                             [](const TrainedModel& t) { return t.guest.num_classes; })
      .def_property_readonly("num_hosts",
                             [](const TrainedModel& t) { return t.guest.num_hosts; })
      .def_property_readonly("task",
                             [](const TrainedModel& t) { return federation::TaskName(t.guest.task); })
      .def_property_readonly("train_scores",
                             [](const TrainedModel& t) { return FromMatrix(t.train_scores); })
      .def("predict", &TrainedModel::Predict, py::arg("guest"),
           py::arg("hosts") = std::vector<Array>{})
      .def("guest_json", [](const TrainedModel& t) {
        return federation::SerializeGuestModel(t.guest);
      })
      .def("host_json", [](const TrainedModel& t, int party) {
        if (party < 1 || party > static_cast<int>(t.hosts.size())) {
          throw ConfigError("party: no host " + std::to_string(party));
        }
        return federation::SerializeHostModel(t.hosts[party - 1]);
      }, py::arg("party"))
      .def("log_jsonl", [](const TrainedModel& t) { return cli::TrainingLogJsonl(t.log); })
      .def("save", &TrainedModel::Save, py::arg("directory"))
      .def_static("load", &TrainedModel::Load, py::arg("directory"));

  m.def("train", &Train, py::arg("guest"), py::arg("labels"),
        py::arg("hosts") = std::vector<Array>{},
        py::arg("params") = federation::BoostingParams{});

  // Utilities.
  m.def("make_synthetic",
        [](size_t n, size_t d, int classes, uint64_t seed, double zero_rate) {
          data::PartyDataset ds =
              classes > 2 ? data::MakeSyntheticMulticlass(n, d, classes, seed)
              : zero_rate > 0 ? data::MakeSyntheticSparseBinary(n, d, zero_rate, seed)
                              : data::MakeSyntheticBinary(n, d, seed);
          Array y(static_cast<py::ssize_t>(n));
          std::copy(ds.labels->begin(), ds.labels->end(), y.mutable_data());
          return py::make_tuple(FromMatrix(ds.features), y);
        },
        py::arg("n"), py::arg("d"), py::arg("classes") = 2, py::arg("seed") = 1,
        py::arg("zero_rate") = 0.0);
  m.def("auc", [](const std::vector<double>& y, const std::vector<double>& s) {
    return tree::Auc(y, s);
  }, py::arg("labels"), py::arg("scores"));
  m.def("accuracy", [](const std::vector<double>& y, const Array& scores) {
    return tree::Accuracy(y, ToMatrix(scores, "scores"));
  }, py::arg("labels"), py::arg("scores"));
  m.def("estimate_cost",
        [](double n_instances, double n_features, double n_bins, int depth,
           int capacity, int key_bits, int precision) {
          cost::CostParams p;
          p.n_instances = n_instances;
          p.n_features = n_features;
          p.n_bins = n_bins;
          p.depth = depth;
          p.key_bits = key_bits;
          p.precision = precision;
          p.capacity = capacity > 0 ? capacity
                                    : cost::CapacityFor(n_instances, key_bits, precision);
          auto b = cost::EstimateBaseline(p);
          auto o = cost::EstimateOptimized(p);
          py::dict d;
          d["capacity"] = p.capacity;
          d["baseline"] = CostDict(b);
          d["optimized"] = CostDict(o);
          d["reduction"] = CostDict(cost::Reduction(b, o));
          return d;
        },
        py::arg("n_instances") = 1e6, py::arg("n_features") = 2000.0,
        py::arg("n_bins") = 32.0, py::arg("depth") = 5, py::arg("capacity") = 0,
        py::arg("key_bits") = 1024, py::arg("precision") = 53);
}

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

#include "sbt/cli/config.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "sbt/common/error.h"

namespace sbt::cli {
namespace {

std::string Trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

int ToInt(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size() || x < INT32_MIN || x > INT32_MAX) throw 0;
    return static_cast<int>(x);
  } catch (...) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

uint64_t ToU64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    if (!v.empty() && v[0] == '-') throw 0;
    unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw 0;
    return x;
  } catch (...) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v +
                      "'");
  }
}

double ToDouble(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw 0;
    return x;
  } catch (...) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

bool ToBool(const std::string& key, const std::string& v) {
  std::string l = Lower(v);
  if (l == "true" || l == "1" || l == "on" || l == "yes") return true;
  if (l == "false" || l == "0" || l == "off" || l == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> SplitList(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int TrainConfig::HostCount() const {
  return num_hosts >= 0 ? num_hosts : static_cast<int>(host_data.size());
}

void TrainConfig::Validate() const {
  if (transport != "inproc" && transport != "tcp") {
    throw ConfigError("transport: expected inproc or tcp, got '" + transport +
                      "'");
  }
  if (transport == "inproc" && num_hosts >= 0 &&
      num_hosts != static_cast<int>(host_data.size())) {
    throw ConfigError("num_hosts: inproc sessions take one host per "
                      "host_data entry");
  }
  params.Validate(HostCount());
}

std::map<std::string, std::string> ParseKeyValues(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    std::string key = Lower(Trim(line.substr(0, eq)));
    std::string value = Trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    }
    if (!out.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    }
  }
  return out;
}

std::map<std::string, std::string> ReadKeyValueFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseKeyValues(ss.str());
}

TrainConfig MakeTrainConfig(const std::map<std::string, std::string>& values) {
  TrainConfig c;
  auto& p = c.params;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"guest_data", [&](auto&, auto& v) { c.guest_data = v; }},
      {"host_data", [&](auto&, auto& v) { c.host_data = SplitList(v); }},
      {"num_hosts", [&](auto& k, auto& v) { c.num_hosts = ToInt(k, v); }},
      {"mode", [&](auto&, auto& v) { p.mode.mode = modes::ParseMode(v); }},
      {"tree_per_party",
       [&](auto& k, auto& v) { p.mode.tree_per_party = ToInt(k, v); }},
      {"guest_depth",
       [&](auto& k, auto& v) { p.mode.guest_depth = ToInt(k, v); }},
      {"host_depth", [&](auto& k, auto& v) { p.mode.host_depth = ToInt(k, v); }},
      {"tree_num", [&](auto& k, auto& v) { p.tree_num = ToInt(k, v); }},
      {"max_depth", [&](auto& k, auto& v) { p.max_depth = ToInt(k, v); }},
      {"learning_rate",
       [&](auto& k, auto& v) { p.learning_rate = ToDouble(k, v); }},
      {"max_bins", [&](auto& k, auto& v) { p.max_bins = ToInt(k, v); }},
      {"lambda", [&](auto& k, auto& v) { p.lambda = ToDouble(k, v); }},
      {"min_gain", [&](auto& k, auto& v) { p.min_gain = ToDouble(k, v); }},
      {"min_samples", [&](auto& k, auto& v) { p.min_samples = ToInt(k, v); }},
      {"precision", [&](auto& k, auto& v) { p.precision = ToInt(k, v); }},
      {"key_bits", [&](auto& k, auto& v) { p.key_bits = ToInt(k, v); }},
      {"goss", [&](auto& k, auto& v) { p.goss = ToBool(k, v); }},
      {"top_rate", [&](auto& k, auto& v) { p.top_rate = ToDouble(k, v); }},
      {"other_rate", [&](auto& k, auto& v) { p.other_rate = ToDouble(k, v); }},
      {"gh_packing", [&](auto& k, auto& v) { p.gh_packing = ToBool(k, v); }},
      {"hist_subtraction",
       [&](auto& k, auto& v) { p.hist_subtraction = ToBool(k, v); }},
      {"cipher_compress",
       [&](auto& k, auto& v) { p.cipher_compress = ToBool(k, v); }},
      {"transport", [&](auto&, auto& v) { c.transport = Lower(v); }},
      {"guest_address", [&](auto&, auto& v) { c.guest_address = v; }},
      {"seed", [&](auto& k, auto& v) { p.seed = ToU64(k, v); }},
      {"id_salt", [&](auto&, auto& v) { p.id_salt = v; }},
      {"output_dir", [&](auto&, auto& v) { c.output_dir = v; }},
  };
  for (const auto& [key, value] : values) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    try {
      it->second(key, value);
    } catch (const ConfigError& e) {
      std::string what = e.what();
      if (what.rfind(key + ":", 0) == 0) throw;
      throw ConfigError(key + ": " + what);
    }
  }
  return c;
}

TrainConfig LoadTrainConfig(const std::string& path,
                            const std::vector<std::string>& overrides) {
  std::map<std::string, std::string> values;
  if (!path.empty()) values = ReadKeyValueFile(path);
  for (const auto& o : overrides) {
    auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("override '" + o + "' is not key=value");
    }
    values[Lower(Trim(o.substr(0, eq)))] = Trim(o.substr(eq + 1));
  }
  return MakeTrainConfig(values);
}

}  // namespace sbt::cli

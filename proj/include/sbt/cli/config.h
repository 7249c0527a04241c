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

#ifndef SBT_CLI_CONFIG_H_
#define SBT_CLI_CONFIG_H_

#include <map>
#include <string>
#include <vector>

#include "sbt/federation/params.h"

namespace sbt::cli {

// Training configuration file: one `key = value` per line, `#` starts a
// comment. Keys:
//
//   guest_data        path of the guest CSV/libsvm file (holds the labels)
//   host_data         comma separated host files, host k is entry k
//   num_hosts         host count for tcp sessions (default: entries in
//                     host_data)
//   mode              default | mix | layered | mo
//   tree_per_party    mix mode trees per party turn            (1)
//   guest_depth       layered mode guest layers                (2)
//   host_depth        layered mode host layers                 (3)
//   tree_num          boosting epochs                          (25)
//   max_depth                                                  (5)
//   learning_rate                                              (0.3)
//   max_bins                                                   (32)
//   lambda            L2 regularization                        (0.1)
//   min_gain          minimum split gain                       (1e-4)
//   min_samples       minimum sampled instances to split       (2)
//   precision         fixed-point fraction bits r              (53)
//   key_bits          Paillier modulus size                    (1024)
//   goss              true | false                             (false)
//   top_rate, other_rate                                       (0.2, 0.1)
//   gh_packing, hist_subtraction, cipher_compress              (true)
//   transport         inproc | tcp                             (inproc)
//   guest_address     host:port the guest listens on           (127.0.0.1:9370)
//   seed                                                       (42)
//   id_salt           salt of the id digests                   (sbtplus)
//   output_dir        where models and logs go                 (sbt_out)
struct TrainConfig {
  std::string guest_data;
  std::vector<std::string> host_data;
  int num_hosts = -1;
  federation::BoostingParams params;
  std::string transport = "inproc";
  std::string guest_address = "127.0.0.1:9370";
  std::string output_dir = "sbt_out";

  int HostCount() const;
  // Throws ConfigError for unknown transports or missing data paths.
  void Validate() const;
};

// Throws ConfigError on malformed lines or duplicate keys.
std::map<std::string, std::string> ParseKeyValues(const std::string& text);
std::map<std::string, std::string> ReadKeyValueFile(const std::string& path);

// Applies `values` over the defaults. Throws ConfigError naming any unknown
// key or unparsable value.
TrainConfig MakeTrainConfig(const std::map<std::string, std::string>& values);

// Reads `path` (may be empty) and applies `overrides` ("key=value") on top.
TrainConfig LoadTrainConfig(const std::string& path,
                            const std::vector<std::string>& overrides);

}  // namespace sbt::cli

#endif  // SBT_CLI_CONFIG_H_

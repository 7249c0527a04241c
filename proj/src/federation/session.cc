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

#include "sbt/federation/session.h"

#include <exception>
#include <thread>

#include "sbt/common/error.h"

namespace sbt::federation {
namespace {

bool IsTransportError(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const TransportError&) {
    return true;
  } catch (...) {
    return false;
  }
}

// A host failure other than a dropped channel is the root cause; otherwise
// the guest's error is.
void JoinAndRethrow(std::vector<std::thread>& threads,
                    const std::vector<std::exception_ptr>& host_errors,
                    std::exception_ptr guest_error) {
  for (auto& t : threads) t.join();
  for (const auto& e : host_errors) {
    if (e && !IsTransportError(e)) std::rethrow_exception(e);
  }
  if (guest_error) std::rethrow_exception(guest_error);
  for (const auto& e : host_errors) {
    if (e) std::rethrow_exception(e);
  }
}

template <typename GuestFn, typename HostFn>
void RunParties(int num_hosts, InProcNetwork::Hook hook, GuestFn guest_fn,
                HostFn host_fn) {
  auto net = InProcNetwork::Create(num_hosts + 1);
  if (hook) net->SetInspectionHook(std::move(hook));
  std::vector<std::unique_ptr<Transport>> endpoints;
  for (int p = 0; p <= num_hosts; ++p) endpoints.push_back(net->Endpoint(p));

  std::vector<std::exception_ptr> host_errors(num_hosts);
  std::vector<std::thread> threads;
  for (int k = 1; k <= num_hosts; ++k) {
    threads.emplace_back([&, k] {
      try {
        host_fn(k, *endpoints[k]);
      } catch (...) {
        host_errors[k - 1] = std::current_exception();
      }
      endpoints[k]->Close();
    });
  }
  std::exception_ptr guest_error;
  try {
    guest_fn(endpoints[0].get());
  } catch (...) {
    guest_error = std::current_exception();
  }
  endpoints[0]->Close();
  JoinAndRethrow(threads, host_errors, guest_error);
}

}  // namespace

uint64_t HostSeed(uint64_t seed, int party) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(party);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

InProcessTraining TrainInProcess(const data::PartyDataset& guest,
                                 const std::vector<data::PartyDataset>& hosts,
                                 const BoostingParams& params,
                                 InProcNetwork::Hook hook) {
  const int num_hosts = static_cast<int>(hosts.size());
  InProcessTraining out;
  out.hosts.resize(num_hosts);
  out.sent.resize(num_hosts + 1);
  if (num_hosts == 0) {
    out.guest = RunGuestTraining(guest, params, nullptr, 0);
    return out;
  }
  RunParties(
      num_hosts, std::move(hook),
      [&](Transport* t) {
        out.guest = RunGuestTraining(guest, params, t, num_hosts);
        out.sent[0] = t->sent();
      },
      [&](int k, Transport& t) {
        HostOptions options;
        options.seed = HostSeed(params.seed, k);
        options.deterministic_crypto = params.deterministic_crypto;
        out.hosts[k - 1] = RunHostTraining(hosts[k - 1], t, options);
        out.sent[k] = t.sent();
      });
  return out;
}

PredictOutput PredictInProcess(const GuestModel& guest_model,
                               const std::vector<HostModel>& host_models,
                               const data::PartyDataset& guest,
                               const std::vector<data::PartyDataset>& hosts,
                               InProcNetwork::Hook hook) {
  const int num_hosts = guest_model.num_hosts;
  if (static_cast<int>(hosts.size()) != num_hosts ||
      static_cast<int>(host_models.size()) != num_hosts) {
    throw ConfigError("model expects " + std::to_string(num_hosts) +
                      " hosts");
  }
  if (num_hosts == 0) return RunGuestPrediction(guest, guest_model, nullptr);
  PredictOutput out;
  RunParties(
      num_hosts, std::move(hook),
      [&](Transport* t) { out = RunGuestPrediction(guest, guest_model, t); },
      [&](int k, Transport& t) {
        RunHostPrediction(hosts[k - 1], host_models[k - 1], t);
      });
  return out;
}

}  // namespace sbt::federation

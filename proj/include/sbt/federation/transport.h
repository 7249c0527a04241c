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

#ifndef SBT_FEDERATION_TRANSPORT_H_
#define SBT_FEDERATION_TRANSPORT_H_

#include <array>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "sbt/federation/wire.h"

namespace sbt::federation {

struct TransportStats {
  uint64_t messages = 0;
  uint64_t bytes = 0;
  uint64_t ciphertexts = 0;
  std::array<uint64_t, kNumMessageKinds> by_kind{};
  std::array<uint64_t, kNumMessageKinds> ciphertexts_by_kind{};

  uint64_t count(MessageKind k) const {
    return by_kind[static_cast<size_t>(k)];
  }
  uint64_t ciphertexts_of(MessageKind k) const {
    return ciphertexts_by_kind[static_cast<size_t>(k)];
  }
  void Record(const Message& m, size_t encoded_size);
  TransportStats& operator+=(const TransportStats& o);
};

// Point-to-point, ordered, reliable message channel for one party. Messages
// are serialized on every transport so the wire format is always exercised.
class Transport {
 public:
  virtual ~Transport() = default;

  virtual int self() const = 0;
  // Throws TransportError when the peer is unreachable.
  virtual void Send(int to, Message message) = 0;
  // Blocks for the next message from `from`. Throws TransportError when the
  // peer went away or the receive timeout elapsed.
  virtual Message Receive(int from) = 0;
  // Marks this endpoint offline; peers see TransportError.
  virtual void Close() = 0;

  const TransportStats& sent() const { return sent_; }
  // Ciphertext tallies are only known on the sending side.
  const TransportStats& received() const { return received_; }

 protected:
  TransportStats sent_;
  TransportStats received_;
};

// In-process transport: every party is an actor on its own thread sharing one
// InProcNetwork.
class InProcNetwork : public std::enable_shared_from_this<InProcNetwork> {
 public:
  using Hook = std::function<void(int from, int to, const Message&)>;

  static std::shared_ptr<InProcNetwork> Create(
      int num_parties,
      std::chrono::milliseconds timeout = std::chrono::minutes(10));

  std::unique_ptr<Transport> Endpoint(int party);

  // Called for every message as it is sent, after serialization round-trip.
  // Used by tests to assert what each party is allowed to see.
  void SetInspectionHook(Hook hook);

  int num_parties() const { return num_parties_; }

 private:
  friend class InProcEndpoint;
  InProcNetwork(int num_parties, std::chrono::milliseconds timeout);

  void Deliver(int from, int to, Bytes bytes);
  Bytes Take(int from, int to);
  void SetOffline(int party);

  const int num_parties_;
  const std::chrono::milliseconds timeout_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::deque<Bytes>> queues_;  // index from * n + to
  std::vector<bool> offline_;
  Hook hook_;
};

// TCP transport: the guest listens, each host connects once and introduces
// itself with its u16 party index. Frames carry a u32 big-endian length.
class TcpTransport : public Transport {
 public:
  // Guest side: binds `port` (0 picks a free one; see bound_port()) and
  // accepts exactly num_hosts connections.
  static std::unique_ptr<TcpTransport> Listen(
      uint16_t port, int num_hosts,
      std::function<void(uint16_t)> on_bound = nullptr);
  // Host side: connects to the guest, retrying until timeout.
  static std::unique_ptr<TcpTransport> Connect(
      int self, const std::string& host, uint16_t port,
      std::chrono::milliseconds timeout = std::chrono::seconds(30));

  ~TcpTransport() override;

  int self() const override { return self_; }
  void Send(int to, Message message) override;
  Message Receive(int from) override;
  void Close() override;

 private:
  TcpTransport(int self, std::vector<int> sockets);
  int Socket(int peer) const;

  int self_;
  std::vector<int> sockets_;  // indexed by peer, -1 when not connected
};

// Parses "host:port".
std::pair<std::string, uint16_t> ParseAddress(const std::string& address);

}  // namespace sbt::federation

#endif  // SBT_FEDERATION_TRANSPORT_H_

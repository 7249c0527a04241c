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

#include "sbt/federation/transport.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "sbt/common/error.h"

namespace sbt::federation {

void TransportStats::Record(const Message& m, size_t encoded_size) {
  ++messages;
  bytes += encoded_size;
  ciphertexts += m.ciphertexts;
  by_kind[static_cast<size_t>(m.kind)] += 1;
  ciphertexts_by_kind[static_cast<size_t>(m.kind)] += m.ciphertexts;
}

TransportStats& TransportStats::operator+=(const TransportStats& o) {
  messages += o.messages;
  bytes += o.bytes;
  ciphertexts += o.ciphertexts;
  for (size_t i = 0; i < by_kind.size(); ++i) {
    by_kind[i] += o.by_kind[i];
    ciphertexts_by_kind[i] += o.ciphertexts_by_kind[i];
  }
  return *this;
}

// ---------------------------------------------------------------------------
// In-process

class InProcEndpoint : public Transport {
 public:
  InProcEndpoint(std::shared_ptr<InProcNetwork> net, int self)
      : net_(std::move(net)), self_(self) {}
  ~InProcEndpoint() override { Close(); }

  int self() const override { return self_; }

  void Send(int to, Message message) override {
    if (to < 0 || to >= net_->num_parties() || to == self_) {
      throw TransportError("invalid destination party " + std::to_string(to));
    }
    message.sender = static_cast<uint16_t>(self_);
    Bytes bytes = EncodeEnvelope(message);
    sent_.Record(message, bytes.size());
    net_->Deliver(self_, to, std::move(bytes));
  }

  Message Receive(int from) override {
    Bytes bytes = net_->Take(from, self_);
    Message m = DecodeEnvelope(bytes);
    if (m.sender != from) {
      throw ProtocolError("sender field does not match channel");
    }
    received_.Record(m, bytes.size());
    return m;
  }

  void Close() override {
    if (!closed_) {
      closed_ = true;
      net_->SetOffline(self_);
    }
  }

 private:
  std::shared_ptr<InProcNetwork> net_;
  int self_;
  bool closed_ = false;
};

InProcNetwork::InProcNetwork(int num_parties, std::chrono::milliseconds timeout)
    : num_parties_(num_parties),
      timeout_(timeout),
      queues_(static_cast<size_t>(num_parties) * num_parties),
      offline_(num_parties, false) {}

std::shared_ptr<InProcNetwork> InProcNetwork::Create(
    int num_parties, std::chrono::milliseconds timeout) {
  if (num_parties < 2) throw ConfigError("need at least two parties");
  return std::shared_ptr<InProcNetwork>(
      new InProcNetwork(num_parties, timeout));
}

std::unique_ptr<Transport> InProcNetwork::Endpoint(int party) {
  if (party < 0 || party >= num_parties_) {
    throw ConfigError("invalid party index " + std::to_string(party));
  }
  return std::make_unique<InProcEndpoint>(shared_from_this(), party);
}

void InProcNetwork::SetInspectionHook(Hook hook) {
  std::lock_guard<std::mutex> lock(mu_);
  hook_ = std::move(hook);
}

void InProcNetwork::Deliver(int from, int to, Bytes bytes) {
  Hook hook;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (offline_[to]) {
      throw TransportError("party " + std::to_string(to) + " is offline");
    }
    hook = hook_;
  }
  if (hook) hook(from, to, DecodeEnvelope(bytes));
  {
    std::lock_guard<std::mutex> lock(mu_);
    queues_[static_cast<size_t>(from) * num_parties_ + to].push_back(
        std::move(bytes));
  }
  cv_.notify_all();
}

Bytes InProcNetwork::Take(int from, int to) {
  if (from < 0 || from >= num_parties_) {
    throw TransportError("invalid source party " + std::to_string(from));
  }
  std::unique_lock<std::mutex> lock(mu_);
  auto& q = queues_[static_cast<size_t>(from) * num_parties_ + to];
  bool ready = cv_.wait_for(lock, timeout_, [&] {
    return !q.empty() || offline_[from] || offline_[to];
  });
  if (!q.empty()) {
    Bytes b = std::move(q.front());
    q.pop_front();
    return b;
  }
  if (!ready) throw TransportError("receive timed out");
  throw TransportError("party " + std::to_string(offline_[from] ? from : to) +
                       " is offline");
}

void InProcNetwork::SetOffline(int party) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    offline_[party] = true;
  }
  cv_.notify_all();
}

// ---------------------------------------------------------------------------
// TCP

namespace {

void WriteAll(int fd, const uint8_t* data, size_t n) {
  while (n > 0) {
    ssize_t w = ::send(fd, data, n, MSG_NOSIGNAL);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("send failed: ") + std::strerror(errno));
    }
    data += w;
    n -= static_cast<size_t>(w);
  }
}

void ReadAll(int fd, uint8_t* data, size_t n) {
  while (n > 0) {
    ssize_t r = ::recv(fd, data, n, 0);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("recv failed: ") + std::strerror(errno));
    }
    if (r == 0) throw TransportError("connection closed by peer");
    data += r;
    n -= static_cast<size_t>(r);
  }
}

uint32_t ReadLength(int fd) {
  uint8_t b[4];
  ReadAll(fd, b, 4);
  return (uint32_t{b[0]} << 24) | (uint32_t{b[1]} << 16) |
         (uint32_t{b[2]} << 8) | uint32_t{b[3]};
}

void WriteFrame(int fd, const Bytes& body) {
  uint32_t n = static_cast<uint32_t>(body.size());
  uint8_t b[4] = {static_cast<uint8_t>(n >> 24), static_cast<uint8_t>(n >> 16),
                  static_cast<uint8_t>(n >> 8), static_cast<uint8_t>(n)};
  WriteAll(fd, b, 4);
  WriteAll(fd, body.data(), body.size());
}

void SetNoDelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

constexpr uint32_t kMaxFrame = 1u << 31;

}  // namespace

std::pair<std::string, uint16_t> ParseAddress(const std::string& address) {
  auto colon = address.rfind(':');
  if (colon == std::string::npos || colon + 1 == address.size()) {
    throw ConfigError("address must be host:port, got '" + address + "'");
  }
  int port = 0;
  try {
    port = std::stoi(address.substr(colon + 1));
  } catch (const std::exception&) {
    throw ConfigError("invalid port in '" + address + "'");
  }
  if (port < 0 || port > 65535) throw ConfigError("port out of range");
  return {address.substr(0, colon), static_cast<uint16_t>(port)};
}

TcpTransport::TcpTransport(int self, std::vector<int> sockets)
    : self_(self), sockets_(std::move(sockets)) {}

TcpTransport::~TcpTransport() { Close(); }

std::unique_ptr<TcpTransport> TcpTransport::Listen(
    uint16_t port, int num_hosts, std::function<void(uint16_t)> on_bound) {
  int lfd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (lfd < 0) throw TransportError("socket() failed");
  int one = 1;
  ::setsockopt(lfd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(port);
  if (::bind(lfd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(lfd, num_hosts) != 0) {
    ::close(lfd);
    throw TransportError("cannot listen on port " + std::to_string(port) +
                         ": " + std::strerror(errno));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(lfd, reinterpret_cast<sockaddr*>(&addr), &len);
  if (on_bound) on_bound(ntohs(addr.sin_port));

  std::vector<int> sockets(num_hosts + 1, -1);
  try {
    for (int accepted = 0; accepted < num_hosts; ++accepted) {
      int fd = ::accept(lfd, nullptr, nullptr);
      if (fd < 0) throw TransportError("accept() failed");
      SetNoDelay(fd);
      uint8_t hello[2];
      ReadAll(fd, hello, 2);
      int party = (hello[0] << 8) | hello[1];
      if (party < 1 || party > num_hosts || sockets[party] != -1) {
        ::close(fd);
        throw ProtocolError("unexpected host id " + std::to_string(party));
      }
      sockets[party] = fd;
    }
  } catch (...) {
    for (int fd : sockets) {
      if (fd >= 0) ::close(fd);
    }
    ::close(lfd);
    throw;
  }
  ::close(lfd);
  return std::unique_ptr<TcpTransport>(new TcpTransport(0, std::move(sockets)));
}

std::unique_ptr<TcpTransport> TcpTransport::Connect(
    int self, const std::string& host, uint16_t port,
    std::chrono::milliseconds timeout) {
  if (self < 1 || self > 0xFFFF) throw ConfigError("invalid host party index");
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints,
                    &res) != 0 ||
      res == nullptr) {
    throw TransportError("cannot resolve " + host);
  }
  auto deadline = std::chrono::steady_clock::now() + timeout;
  int fd = -1;
  while (true) {
    fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd >= 0 && ::connect(fd, res->ai_addr, res->ai_addrlen) == 0) break;
    if (fd >= 0) ::close(fd);
    fd = -1;
    if (std::chrono::steady_clock::now() > deadline) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw TransportError("cannot connect to " + host + ":" +
                         std::to_string(port));
  }
  SetNoDelay(fd);
  uint8_t hello[2] = {static_cast<uint8_t>(self >> 8),
                      static_cast<uint8_t>(self)};
  WriteAll(fd, hello, 2);
  std::vector<int> sockets(self + 1, -1);
  sockets[0] = fd;
  return std::unique_ptr<TcpTransport>(
      new TcpTransport(self, std::move(sockets)));
}

int TcpTransport::Socket(int peer) const {
  if (peer < 0 || peer >= static_cast<int>(sockets_.size()) ||
      sockets_[peer] < 0) {
    throw TransportError("no connection to party " + std::to_string(peer));
  }
  return sockets_[peer];
}

void TcpTransport::Send(int to, Message message) {
  int fd = Socket(to);
  message.sender = static_cast<uint16_t>(self_);
  Bytes bytes = EncodeEnvelope(message);
  WriteFrame(fd, bytes);
  sent_.Record(message, bytes.size());
}

Message TcpTransport::Receive(int from) {
  int fd = Socket(from);
  uint32_t n = ReadLength(fd);
  if (n >= kMaxFrame) throw ProtocolError("frame too large");
  Bytes body(n);
  ReadAll(fd, body.data(), n);
  Message m = DecodeEnvelope(body);
  if (m.sender != from) {
    throw ProtocolError("sender field does not match connection");
  }
  received_.Record(m, body.size());
  return m;
}

void TcpTransport::Close() {
  for (int& fd : sockets_) {
    if (fd >= 0) {
      ::shutdown(fd, SHUT_RDWR);
      ::close(fd);
      fd = -1;
    }
  }
}

}  // namespace sbt::federation

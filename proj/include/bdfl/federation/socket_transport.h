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

#ifndef BDFL_FEDERATION_SOCKET_TRANSPORT_H_
#define BDFL_FEDERATION_SOCKET_TRANSPORT_H_

#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "bdfl/federation/transport.h"

namespace bdfl::federation {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

// "host:port". Throws ConfigError.
Endpoint ParseEndpoint(const std::string& text);

// TCP links between one party and its peers. Each frame travels as a 4-byte
// big-endian length followed by the bytes. A party dials every peer with a
// higher role index (A < B < C) and accepts the lower ones; the dialling side
// opens with a hello frame naming its role.
class SocketTransport : public Transport {
 public:
  // Binds the listening socket unless `me` is the lowest role. Port 0 picks
  // an ephemeral port. Throws ProtocolError.
  SocketTransport(PartyRole me, const Endpoint& listen);
  ~SocketTransport() override;

  SocketTransport(const SocketTransport&) = delete;
  SocketTransport& operator=(const SocketTransport&) = delete;

  // Actual listening port, 0 when not listening.
  std::uint16_t port() const { return port_; }

  // Links to every other role. `peers` needs entries for the higher roles;
  // dialling retries until `timeout`.
  void Connect(const std::map<PartyRole, Endpoint>& peers,
               std::chrono::milliseconds timeout);

  void Send(PartyRole from, PartyRole to, std::string frame) override;
  std::string Receive(PartyRole me) override;

  // Shuts every link down so that blocked receivers, here and at the peers,
  // fail instead of waiting forever. Safe to call from any thread.
  void Abort();

 private:
  void Adopt(PartyRole peer, int fd);

  PartyRole me_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::map<PartyRole, int> links_;
  std::mutex send_mu_;
  std::mutex fds_mu_;
  std::vector<int> owned_fds_;
};

}  // namespace bdfl::federation

#endif  // BDFL_FEDERATION_SOCKET_TRANSPORT_H_

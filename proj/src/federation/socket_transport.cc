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

#include "bdfl/federation/socket_transport.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <optional>
#include <thread>
#include <vector>

#include "bdfl/error.h"

namespace bdfl::federation {
namespace {

constexpr std::uint32_t kMaxFrameBytes = 1u << 30;

[[noreturn]] void Fail(const std::string& what) {
  throw ProtocolError(what + ": " + std::strerror(errno));
}

void WriteAll(int fd, const char* data, std::size_t size) {
  while (size > 0) {
    const ssize_t n = ::send(fd, data, size, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      Fail("send");
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

// False on a clean end of stream before the first byte.
bool ReadAll(int fd, char* data, std::size_t size) {
  std::size_t got = 0;
  while (got < size) {
    const ssize_t n = ::recv(fd, data + got, size - got, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      Fail("recv");
    }
    if (n == 0) {
      if (got == 0) return false;
      throw ProtocolError("connection closed mid-frame");
    }
    got += static_cast<std::size_t>(n);
  }
  return true;
}

void WriteFrame(int fd, const std::string& frame) {
  if (frame.size() > kMaxFrameBytes) throw ProtocolError("frame too large");
  const auto size = static_cast<std::uint32_t>(frame.size());
  const std::array<char, 4> header = {
      static_cast<char>(size >> 24), static_cast<char>(size >> 16),
      static_cast<char>(size >> 8), static_cast<char>(size)};
  WriteAll(fd, header.data(), header.size());
  WriteAll(fd, frame.data(), frame.size());
}

// Nothing on a clean end of stream.
std::optional<std::string> ReadFrame(int fd) {
  std::array<unsigned char, 4> header;
  if (!ReadAll(fd, reinterpret_cast<char*>(header.data()), header.size())) {
    return std::nullopt;
  }
  const std::uint32_t size = (std::uint32_t{header[0]} << 24) |
                             (std::uint32_t{header[1]} << 16) |
                             (std::uint32_t{header[2]} << 8) |
                             std::uint32_t{header[3]};
  if (size > kMaxFrameBytes) throw ProtocolError("frame too large");
  std::string frame(size, '\0');
  if (size > 0 && !ReadAll(fd, frame.data(), size)) {
    throw ProtocolError("connection closed mid-frame");
  }
  return frame;
}

void SetNoDelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

sockaddr_in Resolve(const Endpoint& ep) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const int rc = ::getaddrinfo(ep.host.c_str(), nullptr, &hints, &res);
  if (rc != 0 || res == nullptr) {
    throw ProtocolError("cannot resolve " + ep.host + ": " +
                        ::gai_strerror(rc));
  }
  sockaddr_in addr = *reinterpret_cast<sockaddr_in*>(res->ai_addr);
  ::freeaddrinfo(res);
  addr.sin_port = htons(ep.port);
  return addr;
}

int Dial(const Endpoint& ep, std::chrono::steady_clock::time_point deadline) {
  const sockaddr_in addr = Resolve(ep);
  auto backoff = std::chrono::milliseconds(10);
  while (true) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) Fail("socket");
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr),
                  sizeof(addr)) == 0) {
      SetNoDelay(fd);
      return fd;
    }
    ::close(fd);
    if (std::chrono::steady_clock::now() >= deadline) {
      Fail("connect to " + ep.host + ":" + std::to_string(ep.port));
    }
    std::this_thread::sleep_for(backoff);
    backoff = std::min(backoff * 2, std::chrono::milliseconds(500));
  }
}

}  // namespace

Endpoint ParseEndpoint(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw ConfigError("endpoint must be host:port, got '" + text + "'");
  }
  Endpoint ep;
  ep.host = text.substr(0, colon);
  try {
    const int port = std::stoi(text.substr(colon + 1));
    if (port < 0 || port > 65535) throw std::out_of_range("port");
    ep.port = static_cast<std::uint16_t>(port);
  } catch (const std::exception&) {
    throw ConfigError("bad port in endpoint '" + text + "'");
  }
  return ep;
}

SocketTransport::SocketTransport(PartyRole me, const Endpoint& listen)
    : me_(me) {
  if (me == PartyRole::kHostA) return;
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) Fail("socket");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = Resolve(listen);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) <
      0) {
    Fail("bind " + listen.host + ":" + std::to_string(listen.port));
  }
  if (::listen(listen_fd_, 4) < 0) Fail("listen");
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

SocketTransport::~SocketTransport() {
  for (int fd : owned_fds_) ::close(fd);
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void SocketTransport::Adopt(PartyRole peer, int fd) {
  std::lock_guard lock(fds_mu_);
  owned_fds_.push_back(fd);
  links_[peer] = fd;
}

void SocketTransport::Abort() {
  std::lock_guard lock(fds_mu_);
  for (int fd : owned_fds_) ::shutdown(fd, SHUT_RDWR);
}

void SocketTransport::Connect(const std::map<PartyRole, Endpoint>& peers,
                              std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  const int me = static_cast<int>(me_);
  for (int r = me + 1; r < 3; ++r) {
    const auto role = static_cast<PartyRole>(r);
    const auto it = peers.find(role);
    if (it == peers.end()) {
      throw ConfigError("no endpoint for " + std::string(RoleName(role)));
    }
    const int fd = Dial(it->second, deadline);
    Adopt(role, fd);
    WriteFrame(fd, std::string(RoleName(me_)));
  }
  for (int pending = me; pending > 0; --pending) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    const int rc = ::poll(&pfd, 1, std::max<int>(0, left.count()));
    if (rc < 0) Fail("poll");
    if (rc == 0) throw ProtocolError("timed out waiting for peers");
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) Fail("accept");
    SetNoDelay(fd);
    const std::optional<std::string> hello = ReadFrame(fd);
    if (!hello) {
      ::close(fd);
      throw ProtocolError("peer closed the connection before hello");
    }
    const PartyRole peer = ParseRole(*hello);
    if (static_cast<int>(peer) >= me || links_.count(peer) > 0) {
      ::close(fd);
      throw ProtocolError("unexpected hello from " +
                          std::string(RoleName(peer)));
    }
    Adopt(peer, fd);
  }
}

void SocketTransport::Send(PartyRole from, PartyRole to, std::string frame) {
  if (from != me_) throw ProtocolError("send on behalf of another party");
  const auto it = links_.find(to);
  if (it == links_.end()) {
    throw ProtocolError("no link to " + std::string(RoleName(to)));
  }
  std::lock_guard lock(send_mu_);
  WriteFrame(it->second, frame);
}

std::string SocketTransport::Receive(PartyRole me) {
  if (me != me_) throw ProtocolError("receive on behalf of another party");
  while (true) {
    // A peer that finished closes its link; keep serving the others.
    if (links_.empty()) throw ProtocolError("all peers closed the connection");
    std::vector<pollfd> fds;
    std::vector<PartyRole> roles;
    for (const auto& [role, fd] : links_) {
      fds.push_back({fd, POLLIN, 0});
      roles.push_back(role);
    }
    const int rc = ::poll(fds.data(), fds.size(), -1);
    if (rc < 0) {
      if (errno == EINTR) continue;
      Fail("poll");
    }
    for (std::size_t i = 0; i < fds.size(); ++i) {
      if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      if (std::optional<std::string> frame = ReadFrame(fds[i].fd)) {
        return std::move(*frame);
      }
      // The descriptor stays open until destruction so Abort never touches
      // a recycled number.
      links_.erase(roles[i]);
      break;
    }
  }
}

}  // namespace bdfl::federation

// Copyright 2026 The roslite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROSLITE_NET_SOCKET_H_
#define ROSLITE_NET_SOCKET_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "roslite/util/error.h"

namespace roslite::net {

using Clock = std::chrono::steady_clock;
using Millis = std::chrono::milliseconds;

class Disconnected : public IoError {
 public:
  using IoError::IoError;
};

class BindError : public IoError {
 public:
  using IoError::IoError;
};

// Point in time after which blocking calls give up; nullopt blocks forever.
using Deadline = std::optional<Clock::time_point>;
inline Deadline deadline_after(std::optional<Millis> timeout) {
  if (!timeout) return std::nullopt;
  return Clock::now() + *timeout;
}

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

// Owning TCP socket. Move-only; closes on destruction. shutdown() may be
// called from another thread to unblock a reader or writer; close() may not.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& other) noexcept : fd_(other.fd_.exchange(-1)) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { close(); }

  static Socket connect(const std::string& host, std::uint16_t port, Millis timeout);

  int fd() const { return fd_.load(); }
  bool valid() const { return fd_.load() >= 0; }

  void send_all(std::span<const std::uint8_t> data, Deadline deadline = std::nullopt);
  void send_all(std::string_view data, Deadline deadline = std::nullopt);

  // Fills `out` completely. Disconnected on EOF, TimeoutError past deadline.
  void recv_exact(std::span<std::uint8_t> out, Deadline deadline = std::nullopt);
  // Returns 0 on orderly EOF.
  std::size_t recv_some(std::span<std::uint8_t> out, Deadline deadline = std::nullopt);

  void set_nodelay(bool enabled);
  bool nodelay() const;

  Endpoint local_endpoint() const;
  Endpoint peer_endpoint() const;

  void shutdown();
  void close();

 private:
  std::atomic<int> fd_{-1};
};

class Listener {
 public:
  Listener() = default;
  Listener(Listener&&) noexcept = default;
  Listener& operator=(Listener&&) noexcept = default;

  // Port 0 binds an ephemeral port; port() reports the one chosen.
  static Listener bind(const std::string& host, std::uint16_t port, int backlog = 64);

  std::uint16_t port() const { return port_; }
  // nullopt on timeout.
  std::optional<Socket> accept(Millis timeout);
  void close() { socket_.close(); }
  bool valid() const { return socket_.valid(); }
  int fd() const { return socket_.fd(); }

 private:
  Socket socket_;
  std::uint16_t port_ = 0;
};

// Connected local pair (AF_UNIX); handy for in-process plumbing and tests.
std::pair<Socket, Socket> socket_pair();

// Hostname for URIs this process advertises (ROS_HOSTNAME / ROS_IP, else the
// system hostname).
std::string default_advertised_host();

}  // namespace roslite::net

#endif  // ROSLITE_NET_SOCKET_H_

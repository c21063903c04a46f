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

#include "roslite/net/socket.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

namespace roslite::net {

namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

// Waits for `events`; false on timeout.
bool wait_for(int fd, short events, Deadline deadline) {
  while (true) {
    int timeout_ms = -1;
    if (deadline) {
      auto left = std::chrono::duration_cast<Millis>(*deadline - Clock::now()).count();
      if (left <= 0) return false;
      timeout_ms = static_cast<int>(std::min<long long>(left, 1 << 30));
    }
    pollfd p{fd, events, 0};
    int rc = ::poll(&p, 1, timeout_ms);
    if (rc > 0) return true;
    if (rc == 0) return false;
    if (errno != EINTR) throw IoError(errno_text("poll"));
  }
}

Endpoint endpoint_of(const sockaddr_storage& addr) {
  char host[INET6_ADDRSTRLEN] = {0};
  Endpoint ep;
  if (addr.ss_family == AF_INET) {
    const auto* in = reinterpret_cast<const sockaddr_in*>(&addr);
    ::inet_ntop(AF_INET, &in->sin_addr, host, sizeof(host));
    ep.port = ntohs(in->sin_port);
  } else if (addr.ss_family == AF_INET6) {
    const auto* in6 = reinterpret_cast<const sockaddr_in6*>(&addr);
    ::inet_ntop(AF_INET6, &in6->sin6_addr, host, sizeof(host));
    ep.port = ntohs(in6->sin6_port);
  }
  ep.host = host;
  return ep;
}

}  // namespace

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_.exchange(-1);
  }
  return *this;
}

Socket Socket::connect(const std::string& host, std::uint16_t port, Millis timeout) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  std::string port_text = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), port_text.c_str(), &hints, &res); rc != 0) {
    throw IoError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  }
  Deadline deadline = Clock::now() + timeout;
  std::string last_error = "no addresses for " + host;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC | SOCK_NONBLOCK, ai->ai_protocol);
    if (fd < 0) continue;
    Socket sock(fd);
    int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
    if (rc != 0 && errno != EINPROGRESS) {
      last_error = errno_text("connect");
      continue;
    }
    if (rc != 0) {
      if (!wait_for(fd, POLLOUT, deadline)) {
        last_error = "connect to " + host + ":" + port_text + " timed out";
        continue;
      }
      int err = 0;
      socklen_t len = sizeof(err);
      ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
      if (err != 0) {
        last_error = "connect to " + host + ":" + port_text + ": " + std::strerror(err);
        continue;
      }
    }
    int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags & ~O_NONBLOCK);
    ::freeaddrinfo(res);
    return sock;
  }
  ::freeaddrinfo(res);
  if (last_error.find("timed out") != std::string::npos) throw TimeoutError(last_error);
  throw IoError(last_error);
}

void Socket::send_all(std::span<const std::uint8_t> data, Deadline deadline) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    int fd = fd_.load();
    if (fd < 0) throw Disconnected("socket closed");
    if (deadline && !wait_for(fd, POLLOUT, deadline)) throw TimeoutError("send timed out");
    ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      if (errno == EPIPE || errno == ECONNRESET || errno == ENOTCONN || errno == EBADF) {
        throw Disconnected(errno_text("send"));
      }
      throw IoError(errno_text("send"));
    }
    sent += static_cast<std::size_t>(n);
  }
}

void Socket::send_all(std::string_view data, Deadline deadline) {
  send_all(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()), deadline);
}

std::size_t Socket::recv_some(std::span<std::uint8_t> out, Deadline deadline) {
  while (true) {
    int fd = fd_.load();
    if (fd < 0) throw Disconnected("socket closed");
    if (deadline && !wait_for(fd, POLLIN, deadline)) throw TimeoutError("receive timed out");
    ssize_t n = ::recv(fd, out.data(), out.size(), 0);
    if (n >= 0) return static_cast<std::size_t>(n);
    if (errno == EINTR || errno == EAGAIN) continue;
    if (errno == ECONNRESET || errno == ENOTCONN || errno == EBADF) throw Disconnected(errno_text("recv"));
    throw IoError(errno_text("recv"));
  }
}

void Socket::recv_exact(std::span<std::uint8_t> out, Deadline deadline) {
  std::size_t got = 0;
  while (got < out.size()) {
    std::size_t n = recv_some(out.subspan(got), deadline);
    if (n == 0) throw Disconnected("connection closed by peer");
    got += n;
  }
}

void Socket::set_nodelay(bool enabled) {
  int v = enabled ? 1 : 0;
  ::setsockopt(fd_.load(), IPPROTO_TCP, TCP_NODELAY, &v, sizeof(v));
}

bool Socket::nodelay() const {
  int v = 0;
  socklen_t len = sizeof(v);
  ::getsockopt(fd_.load(), IPPROTO_TCP, TCP_NODELAY, &v, &len);
  return v != 0;
}

Endpoint Socket::local_endpoint() const {
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(fd_.load(), reinterpret_cast<sockaddr*>(&addr), &len);
  return endpoint_of(addr);
}

Endpoint Socket::peer_endpoint() const {
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getpeername(fd_.load(), reinterpret_cast<sockaddr*>(&addr), &len);
  return endpoint_of(addr);
}

void Socket::shutdown() {
  int fd = fd_.load();
  if (fd >= 0) ::shutdown(fd, SHUT_RDWR);
}

void Socket::close() {
  int fd = fd_.exchange(-1);
  if (fd >= 0) ::close(fd);
}

Listener Listener::bind(const std::string& host, std::uint16_t port, int backlog) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  std::string port_text = std::to_string(port);
  const char* node = host.empty() ? nullptr : host.c_str();
  if (int rc = ::getaddrinfo(node, port_text.c_str(), &hints, &res); rc != 0) {
    throw BindError("cannot resolve bind address " + host + ": " + ::gai_strerror(rc));
  }
  std::string last_error = "no usable address";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    Socket sock(fd);
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) != 0 || ::listen(fd, backlog) != 0) {
      last_error = errno_text("bind");
      continue;
    }
    ::freeaddrinfo(res);
    Listener l;
    l.port_ = sock.local_endpoint().port;
    l.socket_ = std::move(sock);
    return l;
  }
  ::freeaddrinfo(res);
  throw BindError("cannot bind " + host + ":" + port_text + ": " + last_error);
}

std::optional<Socket> Listener::accept(Millis timeout) {
  int fd = socket_.fd();
  if (fd < 0) throw IoError("listener closed");
  if (!wait_for(fd, POLLIN, Clock::now() + timeout)) return std::nullopt;
  int client = ::accept4(fd, nullptr, nullptr, SOCK_CLOEXEC);
  if (client < 0) {
    if (errno == EINTR || errno == EAGAIN || errno == ECONNABORTED) return std::nullopt;
    throw IoError(errno_text("accept"));
  }
  return Socket(client);
}

std::pair<Socket, Socket> socket_pair() {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) throw IoError(errno_text("socketpair"));
  return {Socket(fds[0]), Socket(fds[1])};
}

std::string default_advertised_host() {
  if (const char* h = std::getenv("ROS_HOSTNAME"); h && *h) return h;
  if (const char* ip = std::getenv("ROS_IP"); ip && *ip) return ip;
  char name[256] = {0};
  if (::gethostname(name, sizeof(name) - 1) == 0 && name[0]) return name;
  return "localhost";
}

}  // namespace roslite::net

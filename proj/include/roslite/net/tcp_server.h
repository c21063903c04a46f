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

#ifndef ROSLITE_NET_TCP_SERVER_H_
#define ROSLITE_NET_TCP_SERVER_H_

#include <atomic>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "roslite/net/socket.h"

namespace roslite::net {

// Accept loop with one thread per connection. The handler owns the
// conversation; when it returns the connection is shut down. stop() wakes
// every handler blocked on its socket and joins them.
class TcpServer {
 public:
  using Handler = std::function<void(Socket&)>;

  TcpServer() = default;
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;
  ~TcpServer() { stop(); }

  // Throws BindError.
  void start(const std::string& host, std::uint16_t port, Handler handler);
  void stop();

  std::uint16_t port() const { return port_; }
  bool running() const { return running_.load(); }
  std::size_t active_connections() const;

 private:
  struct Connection {
    Socket socket;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void accept_loop();
  void reap_finished();

  Listener listener_;
  Handler handler_;
  std::uint16_t port_ = 0;
  std::thread acceptor_;
  std::atomic<bool> running_{false};
  std::atomic<bool> stopping_{false};
  mutable std::mutex mu_;
  std::list<std::unique_ptr<Connection>> connections_;
};

}  // namespace roslite::net

#endif  // ROSLITE_NET_TCP_SERVER_H_

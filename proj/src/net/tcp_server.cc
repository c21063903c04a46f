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

#include "roslite/net/tcp_server.h"

#include <sys/socket.h>

namespace roslite::net {

void TcpServer::start(const std::string& host, std::uint16_t port, Handler handler) {
  if (running_) throw Error("server already running");
  listener_ = Listener::bind(host, port);
  port_ = listener_.port();
  handler_ = std::move(handler);
  stopping_ = false;
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void TcpServer::accept_loop() {
  while (!stopping_) {
    std::optional<Socket> client;
    try {
      client = listener_.accept(Millis(100));
    } catch (const IoError&) {
      if (stopping_) break;
      std::this_thread::sleep_for(Millis(10));
      continue;
    }
    reap_finished();
    if (!client) continue;
    auto conn = std::make_unique<Connection>();
    conn->socket = std::move(*client);
    Connection* raw = conn.get();
    std::lock_guard lock(mu_);
    if (stopping_) break;
    connections_.push_back(std::move(conn));
    raw->thread = std::thread([this, raw] {
      try {
        handler_(raw->socket);
      } catch (const std::exception&) {
        // A failing connection never affects the server or its siblings.
      }
      raw->socket.shutdown();
      raw->done = true;
    });
  }
}

void TcpServer::reap_finished() {
  std::list<std::unique_ptr<Connection>> finished;
  {
    std::lock_guard lock(mu_);
    for (auto it = connections_.begin(); it != connections_.end();) {
      if ((*it)->done) {
        finished.push_back(std::move(*it));
        it = connections_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (auto& c : finished) {
    if (c->thread.joinable()) c->thread.join();
  }
}

void TcpServer::stop() {
  if (!running_.exchange(false)) return;
  stopping_ = true;
  if (listener_.valid()) ::shutdown(listener_.fd(), SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  listener_.close();
  std::list<std::unique_ptr<Connection>> all;
  {
    std::lock_guard lock(mu_);
    all.swap(connections_);
  }
  for (auto& c : all) c->socket.shutdown();
  for (auto& c : all) {
    if (c->thread.joinable()) c->thread.join();
  }
}

std::size_t TcpServer::active_connections() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& c : connections_) n += c->done ? 0 : 1;
  return n;
}

}  // namespace roslite::net

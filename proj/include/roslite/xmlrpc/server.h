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

#ifndef ROSLITE_XMLRPC_SERVER_H_
#define ROSLITE_XMLRPC_SERVER_H_

#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <string>

#include "roslite/net/tcp_server.h"
#include "roslite/xmlrpc/codec.h"

namespace roslite::xmlrpc {

// XML-RPC server answering POSTs on any path. Handlers run concurrently, one
// connection per request. A handler throwing FaultError returns that fault;
// any other exception becomes Fault(-1, what()).
class Server {
 public:
  using Handler = std::function<XrValue(const Params&)>;

  Server() = default;
  ~Server() { stop(); }

  void register_method(const std::string& name, Handler handler);
  // Throws net::BindError.
  void start(const std::string& bind_host = "0.0.0.0", std::uint16_t port = 0);
  void stop();

  std::uint16_t port() const { return tcp_.port(); }
  std::uint64_t requests_served() const { return served_.load(); }
  void set_read_timeout(std::chrono::milliseconds t) { read_timeout_ = t; }

  // Dispatches one decoded body; exposed for in-process use and tests.
  std::string handle_body(std::string_view body);

 private:
  void serve(net::Socket& socket);

  std::mutex mu_;
  std::map<std::string, Handler, std::less<>> methods_;
  net::TcpServer tcp_;
  std::atomic<std::uint64_t> served_{0};
  std::chrono::milliseconds read_timeout_{std::chrono::seconds(10)};
};

}  // namespace roslite::xmlrpc

#endif  // ROSLITE_XMLRPC_SERVER_H_

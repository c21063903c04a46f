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

#include "roslite/xmlrpc/server.h"

namespace roslite::xmlrpc {

void Server::register_method(const std::string& name, Handler handler) {
  std::lock_guard lock(mu_);
  methods_[name] = std::move(handler);
}

void Server::start(const std::string& bind_host, std::uint16_t port) {
  tcp_.start(bind_host, port, [this](net::Socket& s) { serve(s); });
}

void Server::stop() { tcp_.stop(); }

std::string Server::handle_body(std::string_view body) {
  MethodCall call;
  try {
    call = decode_call_body(body);
  } catch (const Error& e) {
    return encode_fault_body({-1, std::string("malformed request: ") + e.what()});
  }
  Handler handler;
  {
    std::lock_guard lock(mu_);
    auto it = methods_.find(call.method);
    if (it != methods_.end()) handler = it->second;
  }
  if (!handler) return encode_fault_body({-1, "method not found"});
  try {
    return encode_response_body(handler(call.params));
  } catch (const FaultError& e) {
    return encode_fault_body(e.fault());
  } catch (const std::exception& e) {
    return encode_fault_body({-1, e.what()});
  }
}

void Server::serve(net::Socket& socket) {
  http::Message request;
  try {
    request = http::read(socket, net::Clock::now() + read_timeout_);
  } catch (const HttpError& e) {
    socket.send_all(http::make_response(400, "Bad Request", "text/plain", e.what()));
    return;
  }
  std::string body;
  if (request.method() != "POST") {
    socket.send_all(http::make_response(405, "Method Not Allowed", "text/plain", "xml-rpc requires POST"));
    return;
  }
  body = handle_body(request.body);
  served_.fetch_add(1);
  socket.send_all(http::make_response(200, "OK", "text/xml", body));
}

}  // namespace roslite::xmlrpc

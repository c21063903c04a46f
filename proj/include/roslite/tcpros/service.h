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

#ifndef ROSLITE_TCPROS_SERVICE_H_
#define ROSLITE_TCPROS_SERVICE_H_

#include <chrono>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "roslite/tcpros/handshake.h"

namespace roslite::tcpros {

struct ServiceResponse {
  bool ok = false;
  // Serialized response on ok, UTF-8 error text otherwise.
  std::vector<std::uint8_t> payload;

  std::string error_text() const { return std::string(payload.begin(), payload.end()); }
};

struct ServiceRequestHeader {
  std::string service;
  std::string md5 = kAnyMd5;
  std::string caller_id;
  bool persistent = false;
  bool probe = false;
};

ConnectionHeader make_service_header(const ServiceRequestHeader& request);

// ok octet, then 4-byte LE length + payload.
void write_service_response(net::Socket& socket, bool ok, std::span<const std::uint8_t> payload,
                            net::Deadline deadline = std::nullopt);
ServiceResponse read_service_response(net::Socket& socket, net::Deadline deadline,
                                      std::size_t max_size = kDefaultMaxFrame);

// Client connection to one service server; keeps the socket for persistent
// use. Not thread-safe.
class ServiceConnection {
 public:
  // Connects and handshakes. HandshakeRejected, Md5Mismatch, TimeoutError.
  static ServiceConnection open(const std::string& host, std::uint16_t port, const ServiceRequestHeader& request,
                                std::chrono::milliseconds timeout = kDefaultHandshakeTimeout);

  ServiceResponse call(std::span<const std::uint8_t> request, std::chrono::milliseconds timeout,
                       std::size_t max_response = kDefaultMaxFrame);
  const ConnectionHeader& reply() const { return reply_; }
  bool valid() const { return socket_.valid(); }

 private:
  net::Socket socket_;
  ConnectionHeader reply_;
  std::string local_md5_;
};

// One-shot call over an already connected socket.
ServiceResponse service_call(net::Socket& socket, const ServiceRequestHeader& request,
                             std::span<const std::uint8_t> request_bytes,
                             std::chrono::milliseconds timeout = kDefaultHandshakeTimeout);

// Server-side binding. The handler returns the serialized response or throws;
// the exception text becomes the ok=0 payload.
struct ServiceBinding {
  std::string name;
  std::string type;
  std::string md5;
  std::string request_type;
  std::string response_type;
  std::string caller_id;
  std::function<std::vector<std::uint8_t>(std::span<const std::uint8_t>)> handler;
};

using ServiceLookup = std::function<std::shared_ptr<const ServiceBinding>(const std::string& name)>;

// Answers an already-read client header and serves requests until the
// client disconnects (persistent) or after one request.
void serve_service_connection(net::Socket& socket, const ConnectionHeader& request, const ServiceLookup& lookup,
                              std::chrono::milliseconds timeout = kDefaultHandshakeTimeout,
                              std::size_t max_request = kDefaultMaxFrame);

}  // namespace roslite::tcpros

#endif  // ROSLITE_TCPROS_SERVICE_H_

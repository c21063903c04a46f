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

#include "roslite/tcpros/service.h"

namespace roslite::tcpros {

ConnectionHeader make_service_header(const ServiceRequestHeader& request) {
  ConnectionHeader h{{"callerid", request.caller_id},
                     {"service", request.service},
                     {"md5sum", request.md5.empty() ? std::string(kAnyMd5) : request.md5}};
  if (request.persistent) h.set("persistent", "1");
  if (request.probe) h.set("probe", "1");
  return h;
}

void write_service_response(net::Socket& socket, bool ok, std::span<const std::uint8_t> payload,
                            net::Deadline deadline) {
  std::vector<std::uint8_t> out;
  out.reserve(5 + payload.size());
  out.push_back(ok ? 1 : 0);
  auto n = static_cast<std::uint32_t>(payload.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
  out.insert(out.end(), payload.begin(), payload.end());
  socket.send_all(out, deadline);
}

ServiceResponse read_service_response(net::Socket& socket, net::Deadline deadline, std::size_t max_size) {
  std::uint8_t ok = 0;
  socket.recv_exact(std::span<std::uint8_t>(&ok, 1), deadline);
  ServiceResponse r;
  r.ok = ok != 0;
  r.payload = read_frame(socket, deadline, max_size);
  return r;
}

namespace {

ConnectionHeader client_handshake(net::Socket& socket, const ServiceRequestHeader& request, net::Deadline deadline) {
  write_header(socket, make_service_header(request), deadline);
  ConnectionHeader reply = read_header(socket, deadline);
  if (const std::string* err = reply.get("error")) throw HandshakeRejected(*err);
  std::string remote = reply.get_or("md5sum", kAnyMd5);
  if (request.md5 != kAnyMd5 && !request.md5.empty() && remote != kAnyMd5 && remote != request.md5) {
    throw Md5Mismatch(request.md5, remote);
  }
  return reply;
}

}  // namespace

ServiceConnection ServiceConnection::open(const std::string& host, std::uint16_t port,
                                          const ServiceRequestHeader& request, std::chrono::milliseconds timeout) {
  ServiceConnection c;
  net::Deadline deadline = net::Clock::now() + timeout;
  c.socket_ = net::Socket::connect(host, port, timeout);
  c.socket_.set_nodelay(true);
  c.reply_ = client_handshake(c.socket_, request, deadline);
  c.local_md5_ = request.md5;
  return c;
}

ServiceResponse ServiceConnection::call(std::span<const std::uint8_t> request, std::chrono::milliseconds timeout,
                                        std::size_t max_response) {
  net::Deadline deadline = net::Clock::now() + timeout;
  write_frame(socket_, request, deadline);
  return read_service_response(socket_, deadline, max_response);
}

ServiceResponse service_call(net::Socket& socket, const ServiceRequestHeader& request,
                             std::span<const std::uint8_t> request_bytes, std::chrono::milliseconds timeout) {
  net::Deadline deadline = net::Clock::now() + timeout;
  client_handshake(socket, request, deadline);
  write_frame(socket, request_bytes, deadline);
  return read_service_response(socket, deadline);
}

void serve_service_connection(net::Socket& socket, const ConnectionHeader& request, const ServiceLookup& lookup,
                              std::chrono::milliseconds timeout, std::size_t max_request) {
  net::Deadline deadline = net::Clock::now() + timeout;
  std::string name = request.get_or("service", "");
  std::shared_ptr<const ServiceBinding> binding = lookup ? lookup(name) : nullptr;
  if (!binding) {
    send_error_header(socket, "service [" + name + "] is not provided by this node", deadline);
    return;
  }
  std::string md5 = request.get_or("md5sum", kAnyMd5);
  if (md5 != kAnyMd5 && md5 != binding->md5) {
    send_error_header(socket,
                      "request from [" + request.get_or("callerid", "?") + "]: md5sums do not match: [" + md5 +
                          "] vs. [" + binding->md5 + "]",
                      deadline);
    return;
  }
  write_header(socket,
               ConnectionHeader{{"callerid", binding->caller_id},
                                {"md5sum", binding->md5},
                                {"request_type", binding->request_type},
                                {"response_type", binding->response_type},
                                {"type", binding->type}},
               deadline);
  if (request.get_or("probe", "0") == "1") return;
  socket.set_nodelay(true);
  bool persistent = request.get_or("persistent", "0") == "1";
  do {
    std::vector<std::uint8_t> body;
    try {
      // Persistent clients may idle between calls.
      body = read_frame(socket, persistent ? net::Deadline{} : net::Clock::now() + timeout, max_request);
    } catch (const Disconnected&) {
      return;
    }
    try {
      std::vector<std::uint8_t> response = binding->handler(body);
      write_service_response(socket, true, response);
    } catch (const Disconnected&) {
      return;
    } catch (const std::exception& e) {
      std::string text = e.what();
      write_service_response(socket, false,
                             std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    }
  } while (persistent);
}

}  // namespace roslite::tcpros

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

#ifndef ROSLITE_BRIDGE_WEBSOCKET_H_
#define ROSLITE_BRIDGE_WEBSOCKET_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "roslite/net/socket.h"
#include "roslite/xmlrpc/http.h"

// RFC 6455 framing and handshakes, server and client side. No extensions.
namespace roslite::bridge::ws {

class ProtocolError : public IoError {
 public:
  ProtocolError(std::uint16_t close_code, const std::string& what) : IoError(what), close_code_(close_code) {}
  std::uint16_t close_code() const { return close_code_; }

 private:
  std::uint16_t close_code_;
};

enum class Opcode : std::uint8_t { kContinuation = 0, kText = 1, kBinary = 2, kClose = 8, kPing = 9, kPong = 10 };

namespace close_code {
inline constexpr std::uint16_t kNormal = 1000;
inline constexpr std::uint16_t kGoingAway = 1001;
inline constexpr std::uint16_t kProtocolError = 1002;
inline constexpr std::uint16_t kInvalidData = 1007;
inline constexpr std::uint16_t kPolicyViolation = 1008;
inline constexpr std::uint16_t kTooBig = 1009;
}  // namespace close_code

inline constexpr std::size_t kDefaultMaxMessage = 16u << 20;

// Sec-WebSocket-Accept for a client key.
std::string accept_key(std::string_view client_key);

// One frame. Clients must mask (`mask_key` set), servers must not.
std::string encode_frame(Opcode opcode, std::string_view payload, bool fin = true,
                         std::optional<std::uint32_t> mask_key = std::nullopt);

struct Frame {
  bool fin = true;
  Opcode opcode = Opcode::kText;
  bool masked = false;
  std::string payload;  // unmasked
};

Frame read_frame(net::Socket& socket, std::size_t max_payload, net::Deadline deadline = std::nullopt);

// Reads up to and including the blank line ending an HTTP head, one byte at
// a time so nothing past it is consumed.
http::Message read_http_head(net::Socket& socket, net::Deadline deadline, std::size_t max_size = 16384);

bool is_upgrade_request(const http::Message& request);
// The 101 response; HttpError(400) for a malformed upgrade request.
std::string handshake_response(const http::Message& request);

struct Message {
  Opcode opcode = Opcode::kText;  // kText, kBinary or kClose
  std::string data;
  std::uint16_t close_code = 0;
};

// A message-level endpoint over an upgraded socket. Reassembles fragments,
// answers pings, and echoes close. send_* may be called from any thread.
class Connection {
 public:
  Connection(net::Socket& socket, bool client_side, std::size_t max_message = kDefaultMaxMessage);

  // Next text/binary message, or a kClose message once the peer closed.
  // ProtocolError on violations (after sending the matching close frame).
  Message receive(net::Deadline deadline = std::nullopt);

  void send_text(std::string_view text, net::Deadline deadline = std::nullopt);
  void send_binary(std::string_view data, net::Deadline deadline = std::nullopt);
  void send_ping(std::string_view data = {});
  // Sends a close frame once; later calls do nothing.
  void close(std::uint16_t code = close_code::kNormal, std::string_view reason = {});
  bool close_sent() const;

 private:
  void send(Opcode opcode, std::string_view payload, net::Deadline deadline);

  net::Socket& socket_;
  bool client_side_;
  std::size_t max_message_;
  mutable std::mutex send_mu_;
  bool close_sent_ = false;
};

// Websocket client used by tests, tools and bindings.
class Client {
 public:
  // Connects to ws://host:port/path and completes the handshake. HttpError
  // when the server refuses the upgrade.
  static Client connect(const std::string& host, std::uint16_t port, const std::string& path = "/",
                        net::Millis timeout = net::Millis(5000));

  Client(Client&& other) noexcept;
  Client& operator=(Client&&) = delete;
  ~Client();

  void send_text(std::string_view text) { conn_->send_text(text); }
  Message receive(net::Deadline deadline = std::nullopt) { return conn_->receive(deadline); }
  void close(std::uint16_t code = close_code::kNormal) { conn_->close(code); }
  // Drops the TCP connection without a close handshake.
  void abort() { socket_->shutdown(); }

 private:
  Client() = default;
  std::unique_ptr<net::Socket> socket_;
  std::unique_ptr<Connection> conn_;
};

}  // namespace roslite::bridge::ws

#endif  // ROSLITE_BRIDGE_WEBSOCKET_H_

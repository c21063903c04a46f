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

#include "roslite/bridge/websocket.h"

#include <array>
#include <random>

#include "roslite/util/digest.h"
#include "roslite/util/strings.h"

namespace roslite::bridge::ws {

namespace {

constexpr std::string_view kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";

bool has_token(const std::string* header, std::string_view token) {
  if (!header) return false;
  for (std::string_view part : util::split(*header, ',')) {
    if (util::to_lower(util::trim(part)) == token) return true;
  }
  return false;
}

std::uint32_t random_u32() {
  static thread_local std::mt19937 rng(std::random_device{}());
  return static_cast<std::uint32_t>(rng());
}

bool is_control(Opcode op) { return static_cast<std::uint8_t>(op) >= 8; }

bool known_opcode(std::uint8_t op) { return op <= 2 || (op >= 8 && op <= 10); }

}  // namespace

std::string accept_key(std::string_view client_key) {
  std::string text(client_key);
  text += kGuid;
  auto digest = util::sha1(text);
  return util::base64_encode(std::span<const std::uint8_t>(digest.data(), digest.size()));
}

std::string encode_frame(Opcode opcode, std::string_view payload, bool fin, std::optional<std::uint32_t> mask_key) {
  std::string out;
  out.reserve(payload.size() + 14);
  out.push_back(static_cast<char>((fin ? 0x80 : 0x00) | static_cast<std::uint8_t>(opcode)));
  std::uint8_t mask_bit = mask_key ? 0x80 : 0x00;
  std::uint64_t n = payload.size();
  if (n < 126) {
    out.push_back(static_cast<char>(mask_bit | n));
  } else if (n <= 0xFFFF) {
    out.push_back(static_cast<char>(mask_bit | 126));
    out.push_back(static_cast<char>(n >> 8));
    out.push_back(static_cast<char>(n & 0xFF));
  } else {
    out.push_back(static_cast<char>(mask_bit | 127));
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((n >> shift) & 0xFF));
  }
  if (!mask_key) {
    out.append(payload);
    return out;
  }
  std::array<std::uint8_t, 4> key{static_cast<std::uint8_t>(*mask_key >> 24), static_cast<std::uint8_t>(*mask_key >> 16),
                                  static_cast<std::uint8_t>(*mask_key >> 8), static_cast<std::uint8_t>(*mask_key)};
  out.append(reinterpret_cast<const char*>(key.data()), key.size());
  std::size_t base = out.size();
  out.append(payload);
  for (std::size_t i = 0; i < payload.size(); ++i) out[base + i] = static_cast<char>(out[base + i] ^ key[i & 3]);
  return out;
}

Frame read_frame(net::Socket& socket, std::size_t max_payload, net::Deadline deadline) {
  std::array<std::uint8_t, 2> head{};
  socket.recv_exact(head, deadline);
  Frame f;
  f.fin = head[0] & 0x80;
  if (head[0] & 0x70) throw ProtocolError(close_code::kProtocolError, "reserved bits set");
  std::uint8_t op = head[0] & 0x0F;
  if (!known_opcode(op)) throw ProtocolError(close_code::kProtocolError, "unknown opcode " + std::to_string(op));
  f.opcode = static_cast<Opcode>(op);
  f.masked = head[1] & 0x80;
  std::uint64_t n = head[1] & 0x7F;
  if (is_control(f.opcode) && (n > 125 || !f.fin)) {
    throw ProtocolError(close_code::kProtocolError, "malformed control frame");
  }
  if (n == 126) {
    std::array<std::uint8_t, 2> ext{};
    socket.recv_exact(ext, deadline);
    n = (std::uint64_t{ext[0]} << 8) | ext[1];
  } else if (n == 127) {
    std::array<std::uint8_t, 8> ext{};
    socket.recv_exact(ext, deadline);
    n = 0;
    for (std::uint8_t b : ext) n = (n << 8) | b;
    if (n >> 63) throw ProtocolError(close_code::kProtocolError, "payload length high bit set");
  }
  if (n > max_payload) {
    throw ProtocolError(close_code::kTooBig, "frame of " + std::to_string(n) + " bytes exceeds " +
                                                 std::to_string(max_payload));
  }
  std::array<std::uint8_t, 4> key{};
  if (f.masked) socket.recv_exact(key, deadline);
  f.payload.resize(n);
  socket.recv_exact(std::span<std::uint8_t>(reinterpret_cast<std::uint8_t*>(f.payload.data()), n), deadline);
  if (f.masked) {
    for (std::size_t i = 0; i < n; ++i) f.payload[i] = static_cast<char>(f.payload[i] ^ key[i & 3]);
  }
  return f;
}

http::Message read_http_head(net::Socket& socket, net::Deadline deadline, std::size_t max_size) {
  std::string head;
  std::uint8_t c = 0;
  while (head.size() < 4 || head.compare(head.size() - 4, 4, "\r\n\r\n") != 0) {
    if (head.size() >= max_size) throw http::HttpError(431, "request head too large");
    if (socket.recv_some(std::span<std::uint8_t>(&c, 1), deadline) == 0) {
      throw net::Disconnected("connection closed during http head");
    }
    head.push_back(static_cast<char>(c));
  }
  return http::parse(head);
}

bool is_upgrade_request(const http::Message& request) { return has_token(request.header("Upgrade"), "websocket"); }

std::string handshake_response(const http::Message& request) {
  if (request.method() != "GET") throw http::HttpError(400, "websocket upgrade must use GET");
  if (!is_upgrade_request(request)) throw http::HttpError(400, "missing Upgrade: websocket");
  if (!has_token(request.header("Connection"), "upgrade")) throw http::HttpError(400, "missing Connection: Upgrade");
  const std::string* version = request.header("Sec-WebSocket-Version");
  if (!version || util::trim(*version) != "13") throw http::HttpError(400, "unsupported websocket version");
  const std::string* key = request.header("Sec-WebSocket-Key");
  if (!key) throw http::HttpError(400, "missing Sec-WebSocket-Key");
  std::string k(util::trim(*key));
  auto decoded = util::base64_decode(k);
  if (!decoded || decoded->size() != 16) throw http::HttpError(400, "malformed Sec-WebSocket-Key");
  return "HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Accept: " +
         accept_key(k) + "\r\n\r\n";
}

Connection::Connection(net::Socket& socket, bool client_side, std::size_t max_message)
    : socket_(socket), client_side_(client_side), max_message_(max_message) {}

void Connection::send(Opcode opcode, std::string_view payload, net::Deadline deadline) {
  std::optional<std::uint32_t> mask;
  if (client_side_) mask = random_u32();
  std::string frame = encode_frame(opcode, payload, true, mask);
  std::lock_guard lock(send_mu_);
  if (close_sent_) throw net::Disconnected("websocket already closed");
  socket_.send_all(frame, deadline);
}

void Connection::send_text(std::string_view text, net::Deadline deadline) { send(Opcode::kText, text, deadline); }
void Connection::send_binary(std::string_view data, net::Deadline deadline) { send(Opcode::kBinary, data, deadline); }
void Connection::send_ping(std::string_view data) { send(Opcode::kPing, data, std::nullopt); }

void Connection::close(std::uint16_t code, std::string_view reason) {
  std::string payload;
  payload.push_back(static_cast<char>(code >> 8));
  payload.push_back(static_cast<char>(code & 0xFF));
  payload.append(reason.substr(0, 123));
  std::optional<std::uint32_t> mask;
  if (client_side_) mask = random_u32();
  std::string frame = encode_frame(Opcode::kClose, payload, true, mask);
  std::lock_guard lock(send_mu_);
  if (close_sent_) return;
  close_sent_ = true;
  try {
    socket_.send_all(frame, net::Clock::now() + net::Millis(1000));
  } catch (const std::exception&) {
  }
}

bool Connection::close_sent() const {
  std::lock_guard lock(send_mu_);
  return close_sent_;
}

Message Connection::receive(net::Deadline deadline) {
  Message msg;
  bool in_message = false;
  try {
    for (;;) {
      Frame f = read_frame(socket_, max_message_, deadline);
      if (f.masked == client_side_) {
        throw ProtocolError(close_code::kProtocolError, client_side_ ? "server frame is masked" : "client frame is not masked");
      }
      switch (f.opcode) {
        case Opcode::kPing:
          send(Opcode::kPong, f.payload, deadline);
          continue;
        case Opcode::kPong:
          continue;
        case Opcode::kClose: {
          msg.opcode = Opcode::kClose;
          if (f.payload.size() == 1) throw ProtocolError(close_code::kProtocolError, "close payload of one byte");
          if (f.payload.size() >= 2) {
            msg.close_code = static_cast<std::uint16_t>((static_cast<std::uint8_t>(f.payload[0]) << 8) |
                                                        static_cast<std::uint8_t>(f.payload[1]));
            msg.data = f.payload.substr(2);
          }
          close(msg.close_code ? msg.close_code : close_code::kNormal);
          return msg;
        }
        case Opcode::kContinuation:
          if (!in_message) throw ProtocolError(close_code::kProtocolError, "continuation without a message");
          break;
        case Opcode::kText:
        case Opcode::kBinary:
          if (in_message) throw ProtocolError(close_code::kProtocolError, "new message inside a fragmented one");
          in_message = true;
          msg.opcode = f.opcode;
          break;
      }
      if (msg.data.size() + f.payload.size() > max_message_) {
        throw ProtocolError(close_code::kTooBig, "message exceeds " + std::to_string(max_message_) + " bytes");
      }
      msg.data += f.payload;
      if (f.fin) return msg;
    }
  } catch (const ProtocolError& e) {
    close(e.close_code(), e.what());
    throw;
  }
}

Client Client::connect(const std::string& host, std::uint16_t port, const std::string& path, net::Millis timeout) {
  Client c;
  c.socket_ = std::make_unique<net::Socket>(net::Socket::connect(host, port, timeout));
  c.socket_->set_nodelay(true);
  std::array<std::uint8_t, 16> nonce{};
  for (auto& b : nonce) b = static_cast<std::uint8_t>(random_u32());
  std::string key = util::base64_encode(std::span<const std::uint8_t>(nonce.data(), nonce.size()));
  std::string request = "GET " + path + " HTTP/1.1\r\nHost: " + host + ":" + std::to_string(port) +
                        "\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Key: " + key +
                        "\r\nSec-WebSocket-Version: 13\r\n\r\n";
  net::Deadline deadline = net::Clock::now() + timeout;
  c.socket_->send_all(request, deadline);
  http::Message reply = read_http_head(*c.socket_, deadline);
  int status = reply.status();
  if (status != 101) throw http::HttpError(status, "websocket upgrade refused");
  const std::string* accept = reply.header("Sec-WebSocket-Accept");
  if (!accept || util::trim(*accept) != accept_key(key)) throw http::HttpError(101, "bad Sec-WebSocket-Accept");
  c.conn_ = std::make_unique<Connection>(*c.socket_, true);
  return c;
}

Client::Client(Client&& other) noexcept : socket_(std::move(other.socket_)), conn_(std::move(other.conn_)) {}

Client::~Client() {
  if (conn_) conn_->close(close_code::kGoingAway);
}

}  // namespace roslite::bridge::ws

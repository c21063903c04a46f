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

#include "roslite/tcpros/header.h"

#include <cstring>

namespace roslite::tcpros {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

}  // namespace

ConnectionHeader::ConnectionHeader(std::initializer_list<std::pair<std::string, std::string>> entries) {
  for (const auto& [k, v] : entries) set(k, v);
}

void ConnectionHeader::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

const std::string* ConnectionHeader::get(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string ConnectionHeader::get_or(std::string_view key, std::string fallback) const {
  const std::string* v = get(key);
  return v ? *v : std::move(fallback);
}

std::vector<std::uint8_t> encode_header(const ConnectionHeader& header) {
  std::size_t total = 0;
  for (const auto& [k, v] : header.entries()) {
    if (k.find('=') != std::string::npos) throw MalformedHeader("header key contains '=': " + k);
    total += 4 + k.size() + 1 + v.size();
  }
  if (total > kMaxHeaderSize) throw OversizeHeader("connection header of " + std::to_string(total) + " bytes");
  std::vector<std::uint8_t> out;
  out.reserve(4 + total);
  put_u32(out, static_cast<std::uint32_t>(total));
  for (const auto& [k, v] : header.entries()) {
    put_u32(out, static_cast<std::uint32_t>(k.size() + 1 + v.size()));
    out.insert(out.end(), k.begin(), k.end());
    out.push_back('=');
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

ConnectionHeader decode_header_block(std::span<const std::uint8_t> block) {
  ConnectionHeader h;
  std::size_t pos = 0;
  while (pos < block.size()) {
    if (block.size() - pos < 4) throw MalformedHeader("truncated entry length");
    std::uint32_t len = get_u32(block.data() + pos);
    pos += 4;
    if (len > block.size() - pos) throw MalformedHeader("entry length overruns header");
    std::string_view entry(reinterpret_cast<const char*>(block.data() + pos), len);
    pos += len;
    std::size_t eq = entry.find('=');
    if (eq == std::string_view::npos) throw MalformedHeader("entry without '='");
    h.set(std::string(entry.substr(0, eq)), std::string(entry.substr(eq + 1)));
  }
  return h;
}

ConnectionHeader read_header(net::Socket& socket, net::Deadline deadline, std::size_t max_size) {
  std::uint8_t len_bytes[4];
  socket.recv_exact(len_bytes, deadline);
  std::uint32_t len = get_u32(len_bytes);
  if (len > max_size) throw OversizeHeader("peer announced a " + std::to_string(len) + " byte header");
  std::vector<std::uint8_t> block(len);
  socket.recv_exact(block, deadline);
  return decode_header_block(block);
}

void write_header(net::Socket& socket, const ConnectionHeader& header, net::Deadline deadline) {
  socket.send_all(encode_header(header), deadline);
}

std::vector<std::uint8_t> encode_frame(std::span<const std::uint8_t> body) {
  std::vector<std::uint8_t> out;
  out.reserve(4 + body.size());
  put_u32(out, static_cast<std::uint32_t>(body.size()));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

void write_frame(net::Socket& socket, std::span<const std::uint8_t> body, net::Deadline deadline) {
  std::uint8_t len[4];
  std::uint32_t n = static_cast<std::uint32_t>(body.size());
  for (int i = 0; i < 4; ++i) len[i] = static_cast<std::uint8_t>(n >> (8 * i));
  // Small frames go out in one segment.
  if (body.size() <= 4096) {
    std::uint8_t buf[4096 + 4];
    std::memcpy(buf, len, 4);
    if (!body.empty()) std::memcpy(buf + 4, body.data(), body.size());
    socket.send_all(std::span<const std::uint8_t>(buf, body.size() + 4), deadline);
    return;
  }
  socket.send_all(len, deadline);
  socket.send_all(body, deadline);
}

std::vector<std::uint8_t> read_frame(net::Socket& socket, net::Deadline deadline, std::size_t max_size) {
  std::uint8_t len_bytes[4];
  socket.recv_exact(len_bytes, deadline);
  std::uint32_t len = get_u32(len_bytes);
  if (len > max_size) throw FrameTooLarge(len, max_size);
  std::vector<std::uint8_t> body(len);
  if (len) socket.recv_exact(body, deadline);
  return body;
}

}  // namespace roslite::tcpros

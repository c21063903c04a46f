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

#ifndef ROSLITE_TCPROS_HEADER_H_
#define ROSLITE_TCPROS_HEADER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roslite/net/socket.h"
#include "roslite/util/error.h"

namespace roslite::tcpros {

class TcprosError : public Error {
 public:
  using Error::Error;
};

class OversizeHeader : public TcprosError {
 public:
  using TcprosError::TcprosError;
};

class MalformedHeader : public TcprosError {
 public:
  using TcprosError::TcprosError;
};

class FrameTooLarge : public TcprosError {
 public:
  FrameTooLarge(std::size_t size, std::size_t limit)
      : TcprosError("frame of " + std::to_string(size) + " bytes exceeds limit " + std::to_string(limit)),
        size_(size) {}
  std::size_t size() const { return size_; }

 private:
  std::size_t size_;
};

using net::Disconnected;

inline constexpr std::size_t kMaxHeaderSize = 16u << 20;
inline constexpr std::size_t kDefaultMaxFrame = 64u << 20;

// Ordered key/value pairs. set() on an existing key replaces the value in
// place; decoding keeps the last occurrence of a duplicated key.
class ConnectionHeader {
 public:
  ConnectionHeader() = default;
  ConnectionHeader(std::initializer_list<std::pair<std::string, std::string>> entries);

  void set(std::string key, std::string value);
  const std::string* get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string fallback) const;
  bool has(std::string_view key) const { return get(key) != nullptr; }
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool operator==(const ConnectionHeader&) const = default;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// 4-byte LE total length, then per entry 4-byte LE length + "key=value".
std::vector<std::uint8_t> encode_header(const ConnectionHeader& header);
// Decodes the entries block (the bytes after the total length).
ConnectionHeader decode_header_block(std::span<const std::uint8_t> block);

ConnectionHeader read_header(net::Socket& socket, net::Deadline deadline, std::size_t max_size = kMaxHeaderSize);
void write_header(net::Socket& socket, const ConnectionHeader& header, net::Deadline deadline = std::nullopt);

std::vector<std::uint8_t> encode_frame(std::span<const std::uint8_t> body);
void write_frame(net::Socket& socket, std::span<const std::uint8_t> body, net::Deadline deadline = std::nullopt);
// FrameTooLarge when the announced length exceeds `max_size`.
std::vector<std::uint8_t> read_frame(net::Socket& socket, net::Deadline deadline = std::nullopt,
                                     std::size_t max_size = kDefaultMaxFrame);

}  // namespace roslite::tcpros

#endif  // ROSLITE_TCPROS_HEADER_H_

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

#ifndef ROSLITE_SERDE_WIRE_H_
#define ROSLITE_SERDE_WIRE_H_

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "roslite/util/error.h"
#include "roslite/util/strings.h"

// Little-endian ROS 1 wire primitives shared by the schema-driven codec and
// by generated message headers.
namespace roslite::serde {

static_assert(std::endian::native == std::endian::little, "wire codec assumes a little-endian host");

struct Time {
  std::uint32_t sec = 0;
  std::uint32_t nsec = 0;
  bool operator==(const Time&) const = default;
};

struct Duration {
  std::int32_t sec = 0;
  std::int32_t nsec = 0;
  bool operator==(const Duration&) const = default;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class Truncated : public DecodeError {
 public:
  explicit Truncated(std::size_t offset)
      : DecodeError("message truncated at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class TrailingBytes : public DecodeError {
 public:
  explicit TrailingBytes(std::size_t count)
      : DecodeError(std::to_string(count) + " trailing bytes after message"), count_(count) {}
  std::size_t count() const { return count_; }

 private:
  std::size_t count_;
};

class LengthOverrun : public DecodeError {
 public:
  LengthOverrun(std::size_t offset, std::uint64_t declared, std::size_t remaining)
      : DecodeError("declared length " + std::to_string(declared) + " at offset " + std::to_string(offset) +
                    " exceeds " + std::to_string(remaining) + " remaining bytes") {}
};

class InvalidUtf8 : public DecodeError {
 public:
  explicit InvalidUtf8(std::string field_path)
      : DecodeError("invalid UTF-8 in " + field_path), field_path_(std::move(field_path)) {}
  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

class WireWriter {
 public:
  WireWriter() = default;
  explicit WireWriter(std::size_t reserve) { bytes_.reserve(reserve); }

  template <typename T>
    requires std::is_arithmetic_v<T>
  void write(T value) {
    if constexpr (std::is_same_v<T, bool>) {
      bytes_.push_back(value ? 1 : 0);
    } else {
      auto pos = bytes_.size();
      bytes_.resize(pos + sizeof(T));
      std::memcpy(bytes_.data() + pos, &value, sizeof(T));
    }
  }

  void write(const Time& t) {
    write(t.sec);
    write(t.nsec);
  }
  void write(const Duration& d) {
    write(d.sec);
    write(d.nsec);
  }
  void write(std::string_view s) {
    write(static_cast<std::uint32_t>(s.size()));
    append(s.data(), s.size());
  }
  void write(const std::string& s) { write(std::string_view(s)); }

  void write_length(std::size_t n) { write(static_cast<std::uint32_t>(n)); }

  // Packs a contiguous run of arithmetic values (no length prefix).
  template <typename T>
    requires(std::is_arithmetic_v<T> && !std::is_same_v<T, bool>)
  void write_span(std::span<const T> values) {
    append(values.data(), values.size_bytes());
  }

  void append(const void* data, std::size_t n) {
    auto pos = bytes_.size();
    bytes_.resize(pos + n);
    if (n) std::memcpy(bytes_.data() + pos, data, n);
  }

  std::size_t size() const { return bytes_.size(); }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class WireReader {
 public:
  explicit WireReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return cursor_; }
  std::size_t remaining() const { return bytes_.size() - cursor_; }

  template <typename T>
    requires std::is_arithmetic_v<T>
  T read() {
    if constexpr (std::is_same_v<T, bool>) {
      return read<std::uint8_t>() != 0;
    } else {
      require(sizeof(T));
      T value;
      std::memcpy(&value, bytes_.data() + cursor_, sizeof(T));
      cursor_ += sizeof(T);
      return value;
    }
  }

  Time read_time() {
    Time t;
    t.sec = read<std::uint32_t>();
    t.nsec = read<std::uint32_t>();
    return t;
  }

  Duration read_duration() {
    Duration d;
    d.sec = read<std::int32_t>();
    d.nsec = read<std::int32_t>();
    return d;
  }

  // Element count of a variable-length array. Rejects counts that cannot fit
  // in the remaining bytes before anything is allocated.
  std::size_t read_length(std::size_t min_element_size) {
    std::size_t at = cursor_;
    auto n = read<std::uint32_t>();
    std::size_t unit = min_element_size == 0 ? 1 : min_element_size;
    if (static_cast<std::uint64_t>(n) * unit > remaining()) {
      // Zero-size elements (empty messages) are legal but capped so a hostile
      // count cannot spin forever.
      if (min_element_size != 0 || n > kMaxZeroSizeElements) throw LengthOverrun(at, n, remaining());
    }
    return n;
  }

  std::string read_string(std::string_view field_path) {
    std::size_t n = read_length(1);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + cursor_), n);
    cursor_ += n;
    if (!util::is_valid_utf8(s)) throw InvalidUtf8(std::string(field_path));
    return s;
  }

  template <typename T>
    requires(std::is_arithmetic_v<T> && !std::is_same_v<T, bool>)
  void read_span(std::span<T> out) {
    require(out.size_bytes());
    if (!out.empty()) std::memcpy(out.data(), bytes_.data() + cursor_, out.size_bytes());
    cursor_ += out.size_bytes();
  }

  void expect_end() const {
    if (cursor_ != bytes_.size()) throw TrailingBytes(bytes_.size() - cursor_);
  }

  static constexpr std::size_t kMaxZeroSizeElements = 1u << 20;

 private:
  void require(std::size_t n) const {
    if (n > remaining()) throw Truncated(cursor_);
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t cursor_ = 0;
};

}  // namespace roslite::serde

#endif  // ROSLITE_SERDE_WIRE_H_

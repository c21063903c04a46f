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

#ifndef ROSLITE_SERDE_DYNAMIC_VALUE_H_
#define ROSLITE_SERDE_DYNAMIC_VALUE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "roslite/serde/wire.h"

namespace roslite::serde {

// A runtime-typed message value. Records keep their fields in schema order.
// Numeric arrays decoded from the wire are held packed (one std::vector per
// element type); a Seq of scalars with the same element type is accepted
// everywhere a packed array is and compares equal to it.
class DynamicValue {
 public:
  enum class Kind : std::uint8_t {
    kBool,
    kI8,
    kU8,
    kI16,
    kU16,
    kI32,
    kU32,
    kI64,
    kU64,
    kF32,
    kF64,
    kStr,
    kTime,
    kDuration,
    kSeq,
    kRecord,
    kPacked,
  };

  using Seq = std::vector<DynamicValue>;
  using Field = std::pair<std::string, DynamicValue>;
  using Record = std::vector<Field>;
  using PackedArray = std::variant<std::vector<std::int8_t>, std::vector<std::uint8_t>, std::vector<std::int16_t>,
                                   std::vector<std::uint16_t>, std::vector<std::int32_t>, std::vector<std::uint32_t>,
                                   std::vector<std::int64_t>, std::vector<std::uint64_t>, std::vector<float>,
                                   std::vector<double>>;
  using Storage = std::variant<bool, std::int8_t, std::uint8_t, std::int16_t, std::uint16_t, std::int32_t,
                               std::uint32_t, std::int64_t, std::uint64_t, float, double, std::string, Time, Duration,
                               Seq, Record, PackedArray>;

  DynamicValue() : storage_(Record{}) {}

  template <typename T>
    requires std::is_constructible_v<Storage, T&&> && (!std::is_same_v<std::remove_cvref_t<T>, DynamicValue>) &&
             (!std::is_same_v<std::remove_cvref_t<T>, const char*>)
  DynamicValue(T&& value) : storage_(std::forward<T>(value)) {}  // NOLINT(google-explicit-constructor)

  DynamicValue(const char* s) : storage_(std::string(s)) {}  // NOLINT(google-explicit-constructor)

  static DynamicValue record(Record fields = {}) { return DynamicValue(Storage(std::move(fields))); }
  static DynamicValue seq(Seq items = {}) { return DynamicValue(Storage(std::move(items))); }

  Kind kind() const { return static_cast<Kind>(storage_.index()); }
  const Storage& storage() const { return storage_; }
  Storage& storage() { return storage_; }

  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(storage_);
  }
  template <typename T>
  const T& get() const {
    return std::get<T>(storage_);
  }
  template <typename T>
  T& get() {
    return std::get<T>(storage_);
  }

  bool is_record() const { return is<Record>(); }
  bool is_array() const { return is<Seq>() || is<PackedArray>(); }

  // Record access. find() returns nullptr for a missing field; at() throws.
  const DynamicValue* find(std::string_view name) const;
  DynamicValue* find(std::string_view name);
  const DynamicValue& at(std::string_view name) const;
  DynamicValue& at(std::string_view name);
  DynamicValue& set(std::string_view name, DynamicValue value);

  // Array access across Seq and packed storage.
  std::size_t array_size() const;
  DynamicValue array_element(std::size_t i) const;

  // Scalar numeric value widened to double (throws for non-numeric kinds).
  double as_double() const;

  // Structural identity. Floating-point elements compare by bit pattern so
  // that NaN payloads round-trip as equal.
  bool operator==(const DynamicValue& other) const;

  std::string debug_string() const;

 private:
  explicit DynamicValue(Storage s) : storage_(std::move(s)) {}
  Storage storage_;
};

std::string_view kind_name(DynamicValue::Kind k);

}  // namespace roslite::serde

#endif  // ROSLITE_SERDE_DYNAMIC_VALUE_H_

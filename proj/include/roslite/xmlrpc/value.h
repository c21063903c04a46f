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

#ifndef ROSLITE_XMLRPC_VALUE_H_
#define ROSLITE_XMLRPC_VALUE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "roslite/util/error.h"

namespace roslite::xmlrpc {

class TypeError : public Error {
 public:
  using Error::Error;
};

struct Binary {
  std::vector<std::uint8_t> bytes;
  bool operator==(const Binary&) const = default;
};

// One XML-RPC value. Record keeps insertion order; member names are unique.
class XrValue {
 public:
  using Seq = std::vector<XrValue>;
  using Record = std::vector<std::pair<std::string, XrValue>>;
  enum class Kind { kInt, kBool, kStr, kDouble, kSeq, kRecord, kBinary };

  XrValue() : v_(std::string()) {}
  XrValue(std::int32_t v) : v_(v) {}
  XrValue(bool v) : v_(v) {}
  XrValue(std::string v) : v_(std::move(v)) {}
  XrValue(std::string_view v) : v_(std::string(v)) {}
  XrValue(const char* v) : v_(std::string(v)) {}
  XrValue(double v) : v_(v) {}
  XrValue(Seq v) : v_(std::move(v)) {}
  XrValue(Record v);
  XrValue(Binary v) : v_(std::move(v)) {}

  static XrValue seq(std::initializer_list<XrValue> items) { return XrValue(Seq(items)); }
  static XrValue record(std::initializer_list<std::pair<std::string, XrValue>> members) {
    return XrValue(Record(members));
  }

  Kind kind() const { return static_cast<Kind>(v_.index()); }
  bool is_int() const { return kind() == Kind::kInt; }
  bool is_bool() const { return kind() == Kind::kBool; }
  bool is_str() const { return kind() == Kind::kStr; }
  bool is_double() const { return kind() == Kind::kDouble; }
  bool is_seq() const { return kind() == Kind::kSeq; }
  bool is_record() const { return kind() == Kind::kRecord; }
  bool is_binary() const { return kind() == Kind::kBinary; }

  // Each throws TypeError on a kind mismatch.
  std::int32_t as_int() const;
  bool as_bool() const;
  const std::string& as_str() const;
  double as_double() const;
  // Int or Double.
  double as_number() const;
  const Seq& as_seq() const;
  Seq& as_seq();
  const Record& as_record() const;
  Record& as_record();
  const Binary& as_binary() const;

  const XrValue* find(std::string_view key) const;
  // Inserts or replaces; value must be a Record.
  void set(std::string key, XrValue value);

  // Doubles compare by value, with NaN equal to NaN.
  bool operator==(const XrValue& other) const;

  std::string debug_string() const;
  static const char* kind_name(Kind k);

 private:
  std::variant<std::int32_t, bool, std::string, double, Seq, Record, Binary> v_;
};

using Params = XrValue::Seq;

}  // namespace roslite::xmlrpc

#endif  // ROSLITE_XMLRPC_VALUE_H_

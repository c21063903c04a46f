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

#ifndef ROSLITE_MSG_SCHEMA_H_
#define ROSLITE_MSG_SCHEMA_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "roslite/util/error.h"

namespace roslite::msg {

enum class Builtin : std::uint8_t {
  kBool,
  kInt8,
  kUInt8,
  kInt16,
  kUInt16,
  kInt32,
  kUInt32,
  kInt64,
  kUInt64,
  kFloat32,
  kFloat64,
  kString,
  kTime,
  kDuration,
};

// Accepts the deprecated aliases `byte` (int8) and `char` (uint8).
std::optional<Builtin> builtin_from_name(std::string_view name);
std::string_view builtin_name(Builtin b);
// Encoded size in bytes; 0 for string, whose size depends on the value.
std::size_t builtin_wire_size(Builtin b);
bool is_integral(Builtin b);

struct NamedType {
  std::string package;
  std::string name;

  std::string full_name() const { return package + "/" + name; }
  bool operator==(const NamedType&) const = default;
};

class TypeRef {
 public:
  // `spelling` is the name as written in the source; it differs from
  // builtin_name() only for the `byte`/`char` aliases and is what the
  // checksum text uses.
  static TypeRef make_builtin(Builtin b, std::string spelling = {});
  static TypeRef make_named(std::string package, std::string name);

  bool is_builtin() const { return std::holds_alternative<Builtin>(kind_); }
  Builtin builtin() const { return std::get<Builtin>(kind_); }
  const NamedType& named() const { return std::get<NamedType>(kind_); }
  const std::string& spelling() const { return spelling_; }

  bool operator==(const TypeRef&) const = default;

 private:
  std::variant<Builtin, NamedType> kind_;
  std::string spelling_;
};

enum class Arity : std::uint8_t { kScalar, kFixedArray, kVarArray };

struct FieldSpec {
  std::string name;
  TypeRef type;
  Arity arity = Arity::kScalar;
  std::uint32_t array_size = 0;  // only for kFixedArray

  bool is_array() const { return arity != Arity::kScalar; }
  // `type name`, `type[] name` or `type[n] name` with the type as written.
  std::string declaration() const;
};

using ConstantValue = std::variant<bool, std::int64_t, std::uint64_t, double, std::string>;

struct ConstantSpec {
  std::string name;
  TypeRef type;
  std::string value_text;
  ConstantValue value;
};

struct MsgSpec {
  std::string package;
  std::string name;
  std::vector<FieldSpec> fields;
  std::vector<ConstantSpec> constants;
  std::string source_text;

  std::string full_name() const { return package + "/" + name; }
  const FieldSpec* find_field(std::string_view field_name) const;
};

struct SrvSpec {
  std::string package;
  std::string name;
  MsgSpec request;
  MsgSpec response;

  std::string full_name() const { return package + "/" + name; }
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, std::string reason);
  int line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  int line_;
  std::string reason_;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class UnresolvedType : public Error {
 public:
  explicit UnresolvedType(std::string full_name);
  const std::string& full_name() const { return full_name_; }

 private:
  std::string full_name_;
};

class CyclicDependency : public Error {
 public:
  explicit CyclicDependency(std::vector<std::string> path);
  const std::vector<std::string>& path() const { return path_; }

 private:
  std::vector<std::string> path_;
};

// Parses one `.msg` body. Named types without a package resolve to
// `package`; the bare `Header` token resolves to std_msgs/Header.
MsgSpec parse_msg(std::string_view text, std::string_view package, std::string_view name);

// Parses a `.srv` body (request and response split by a `---` line). The
// halves are named `<name>Request` / `<name>Response`.
SrvSpec parse_srv(std::string_view text, std::string_view package, std::string_view name);

// Splits `pkg/Name` (or a bare `Name`, which takes `default_package`).
NamedType split_type_name(std::string_view full, std::string_view default_package = {});

}  // namespace roslite::msg

#endif  // ROSLITE_MSG_SCHEMA_H_

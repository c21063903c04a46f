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

#include "roslite/xmlrpc/value.h"

#include <cmath>
#include <set>

#include "roslite/util/digest.h"
#include "roslite/util/strings.h"

namespace roslite::xmlrpc {

XrValue::XrValue(Record v) {
  std::set<std::string_view> seen;
  for (const auto& [k, _] : v) {
    if (!seen.insert(k).second) throw TypeError("duplicate record member '" + k + "'");
  }
  v_ = std::move(v);
}

namespace {

template <typename T>
const T& get_or_throw(const auto& v, XrValue::Kind want, XrValue::Kind have) {
  if (want != have) {
    throw TypeError(std::string("expected ") + XrValue::kind_name(want) + ", found " + XrValue::kind_name(have));
  }
  return std::get<T>(v);
}

}  // namespace

std::int32_t XrValue::as_int() const { return get_or_throw<std::int32_t>(v_, Kind::kInt, kind()); }
bool XrValue::as_bool() const { return get_or_throw<bool>(v_, Kind::kBool, kind()); }
const std::string& XrValue::as_str() const { return get_or_throw<std::string>(v_, Kind::kStr, kind()); }
double XrValue::as_double() const { return get_or_throw<double>(v_, Kind::kDouble, kind()); }
const XrValue::Seq& XrValue::as_seq() const { return get_or_throw<Seq>(v_, Kind::kSeq, kind()); }
XrValue::Seq& XrValue::as_seq() { return const_cast<Seq&>(std::as_const(*this).as_seq()); }
const XrValue::Record& XrValue::as_record() const { return get_or_throw<Record>(v_, Kind::kRecord, kind()); }
XrValue::Record& XrValue::as_record() { return const_cast<Record&>(std::as_const(*this).as_record()); }
const Binary& XrValue::as_binary() const { return get_or_throw<Binary>(v_, Kind::kBinary, kind()); }

double XrValue::as_number() const {
  if (is_int()) return as_int();
  return as_double();
}

const XrValue* XrValue::find(std::string_view key) const {
  for (const auto& [k, v] : as_record()) {
    if (k == key) return &v;
  }
  return nullptr;
}

void XrValue::set(std::string key, XrValue value) {
  auto& rec = as_record();
  for (auto& [k, v] : rec) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  rec.emplace_back(std::move(key), std::move(value));
}

bool XrValue::operator==(const XrValue& other) const {
  if (kind() != other.kind()) return false;
  if (is_double()) {
    double a = as_double(), b = other.as_double();
    return a == b || (std::isnan(a) && std::isnan(b));
  }
  return v_ == other.v_;
}

const char* XrValue::kind_name(Kind k) {
  switch (k) {
    case Kind::kInt: return "int";
    case Kind::kBool: return "boolean";
    case Kind::kStr: return "string";
    case Kind::kDouble: return "double";
    case Kind::kSeq: return "array";
    case Kind::kRecord: return "struct";
    case Kind::kBinary: return "base64";
  }
  return "?";
}

std::string XrValue::debug_string() const {
  switch (kind()) {
    case Kind::kInt: return std::to_string(as_int());
    case Kind::kBool: return as_bool() ? "true" : "false";
    case Kind::kStr: {
      std::string out = "\"";
      for (char c : as_str()) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      return out + "\"";
    }
    case Kind::kDouble: return util::format_double(as_double());
    case Kind::kSeq: {
      std::string out = "[";
      for (std::size_t i = 0; i < as_seq().size(); ++i) {
        if (i) out += ", ";
        out += as_seq()[i].debug_string();
      }
      return out + "]";
    }
    case Kind::kRecord: {
      std::string out = "{";
      bool first = true;
      for (const auto& [k, v] : as_record()) {
        if (!first) out += ", ";
        first = false;
        out += k + ": " + v.debug_string();
      }
      return out + "}";
    }
    case Kind::kBinary: return "b64:" + util::base64_encode(std::span<const std::uint8_t>(as_binary().bytes));
  }
  return "";
}

}  // namespace roslite::xmlrpc

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

#include <cerrno>
#include <cmath>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <set>
#include <utility>

#include "roslite/msg/schema.h"
#include "roslite/util/strings.h"

namespace roslite::msg {

namespace {

using util::is_identifier;
using util::trim;

struct BuiltinEntry {
  std::string_view name;
  Builtin type;
};

constexpr BuiltinEntry kBuiltins[] = {
    {"bool", Builtin::kBool},       {"int8", Builtin::kInt8},         {"uint8", Builtin::kUInt8},
    {"int16", Builtin::kInt16},     {"uint16", Builtin::kUInt16},     {"int32", Builtin::kInt32},
    {"uint32", Builtin::kUInt32},   {"int64", Builtin::kInt64},       {"uint64", Builtin::kUInt64},
    {"float32", Builtin::kFloat32}, {"float64", Builtin::kFloat64},   {"string", Builtin::kString},
    {"time", Builtin::kTime},       {"duration", Builtin::kDuration}, {"byte", Builtin::kInt8},
    {"char", Builtin::kUInt8},
};

struct ParsedType {
  TypeRef type;
  Arity arity = Arity::kScalar;
  std::uint32_t size = 0;
};

ParsedType parse_type_token(std::string_view token, std::string_view package, int line) {
  ParsedType out;
  std::string_view base = token;
  if (auto open = token.find('['); open != std::string_view::npos) {
    if (token.back() != ']') throw SyntaxError(line, "malformed array suffix in '" + std::string(token) + "'");
    base = token.substr(0, open);
    std::string_view len = token.substr(open + 1, token.size() - open - 2);
    if (len.empty()) {
      out.arity = Arity::kVarArray;
    } else {
      std::uint32_t n = 0;
      auto res = std::from_chars(len.data(), len.data() + len.size(), n);
      if (res.ec != std::errc() || res.ptr != len.data() + len.size() || n == 0) {
        throw SyntaxError(line, "invalid array length '" + std::string(len) + "'");
      }
      out.arity = Arity::kFixedArray;
      out.size = n;
    }
  }
  if (base.empty()) throw SyntaxError(line, "missing type");
  if (auto b = builtin_from_name(base)) {
    out.type = TypeRef::make_builtin(*b, std::string(base));
    return out;
  }
  NamedType named;
  if (auto slash = base.find('/'); slash != std::string_view::npos) {
    named.package = std::string(base.substr(0, slash));
    named.name = std::string(base.substr(slash + 1));
  } else if (base == "Header") {
    named = {"std_msgs", "Header"};
  } else {
    named.package = std::string(package);
    named.name = std::string(base);
  }
  if (!is_identifier(named.package) || !is_identifier(named.name)) {
    throw SyntaxError(line, "invalid type name '" + std::string(base) + "'");
  }
  out.type = TypeRef::make_named(std::move(named.package), std::move(named.name));
  return out;
}

template <typename T>
ConstantValue parse_int_constant(std::string_view text, int line) {
  // Leading '+' is accepted the way Python's int() accepts it.
  std::string_view digits = text;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  if (digits.empty()) throw SyntaxError(line, "empty integer constant");
  if constexpr (std::is_signed_v<T>) {
    std::int64_t v = 0;
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (res.ec == std::errc::result_out_of_range) throw RangeError("constant out of range: " + std::string(text));
    if (res.ec != std::errc() || res.ptr != digits.data() + digits.size()) {
      throw SyntaxError(line, "invalid integer constant '" + std::string(text) + "'");
    }
    if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max()) {
      throw RangeError("constant out of range: " + std::string(text));
    }
    return v;
  } else {
    if (!digits.empty() && digits.front() == '-') {
      // "-0" is still zero; anything else is below range.
      std::uint64_t mag = 0;
      auto res = std::from_chars(digits.data() + 1, digits.data() + digits.size(), mag);
      if (res.ec == std::errc() && res.ptr == digits.data() + digits.size() && mag == 0) return std::uint64_t{0};
      if (res.ec == std::errc() || res.ec == std::errc::result_out_of_range) {
        throw RangeError("constant out of range: " + std::string(text));
      }
      throw SyntaxError(line, "invalid integer constant '" + std::string(text) + "'");
    }
    std::uint64_t v = 0;
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (res.ec == std::errc::result_out_of_range) throw RangeError("constant out of range: " + std::string(text));
    if (res.ec != std::errc() || res.ptr != digits.data() + digits.size()) {
      throw SyntaxError(line, "invalid integer constant '" + std::string(text) + "'");
    }
    if (v > std::numeric_limits<T>::max()) throw RangeError("constant out of range: " + std::string(text));
    return v;
  }
}

ConstantValue parse_constant_value(Builtin type, std::string_view text, int line) {
  switch (type) {
    case Builtin::kBool:
      if (text == "true" || text == "True" || text == "1") return true;
      if (text == "false" || text == "False" || text == "0") return false;
      throw SyntaxError(line, "invalid bool constant '" + std::string(text) + "'");
    case Builtin::kInt8:
      return parse_int_constant<std::int8_t>(text, line);
    case Builtin::kUInt8:
      return parse_int_constant<std::uint8_t>(text, line);
    case Builtin::kInt16:
      return parse_int_constant<std::int16_t>(text, line);
    case Builtin::kUInt16:
      return parse_int_constant<std::uint16_t>(text, line);
    case Builtin::kInt32:
      return parse_int_constant<std::int32_t>(text, line);
    case Builtin::kUInt32:
      return parse_int_constant<std::uint32_t>(text, line);
    case Builtin::kInt64:
      return parse_int_constant<std::int64_t>(text, line);
    case Builtin::kUInt64:
      return parse_int_constant<std::uint64_t>(text, line);
    case Builtin::kFloat32:
    case Builtin::kFloat64: {
      std::string buf(text);
      if (buf.empty()) throw SyntaxError(line, "empty float constant");
      char* end = nullptr;
      errno = 0;
      double v = std::strtod(buf.c_str(), &end);
      if (end != buf.c_str() + buf.size()) throw SyntaxError(line, "invalid float constant '" + buf + "'");
      if (type == Builtin::kFloat32 && std::isfinite(v) && std::abs(v) > std::numeric_limits<float>::max()) {
        throw RangeError("constant out of range: " + buf);
      }
      return v;
    }
    case Builtin::kString:
      return std::string(text);
    case Builtin::kTime:
    case Builtin::kDuration:
      break;
  }
  throw SyntaxError(line, "time/duration constants are not allowed");
}

}  // namespace

std::optional<Builtin> builtin_from_name(std::string_view name) {
  for (const auto& e : kBuiltins) {
    if (e.name == name) return e.type;
  }
  return std::nullopt;
}

std::string_view builtin_name(Builtin b) {
  for (const auto& e : kBuiltins) {
    if (e.type == b) return e.name;
  }
  return {};
}

std::size_t builtin_wire_size(Builtin b) {
  switch (b) {
    case Builtin::kBool:
    case Builtin::kInt8:
    case Builtin::kUInt8:
      return 1;
    case Builtin::kInt16:
    case Builtin::kUInt16:
      return 2;
    case Builtin::kInt32:
    case Builtin::kUInt32:
    case Builtin::kFloat32:
      return 4;
    case Builtin::kInt64:
    case Builtin::kUInt64:
    case Builtin::kFloat64:
    case Builtin::kTime:
    case Builtin::kDuration:
      return 8;
    case Builtin::kString:
      return 0;
  }
  return 0;
}

bool is_integral(Builtin b) {
  switch (b) {
    case Builtin::kInt8:
    case Builtin::kUInt8:
    case Builtin::kInt16:
    case Builtin::kUInt16:
    case Builtin::kInt32:
    case Builtin::kUInt32:
    case Builtin::kInt64:
    case Builtin::kUInt64:
      return true;
    default:
      return false;
  }
}

TypeRef TypeRef::make_builtin(Builtin b, std::string spelling) {
  TypeRef t;
  t.kind_ = b;
  t.spelling_ = spelling.empty() ? std::string(builtin_name(b)) : std::move(spelling);
  return t;
}

TypeRef TypeRef::make_named(std::string package, std::string name) {
  TypeRef t;
  t.spelling_ = package + "/" + name;
  t.kind_ = NamedType{std::move(package), std::move(name)};
  return t;
}

std::string FieldSpec::declaration() const {
  std::string out = type.spelling();
  if (arity == Arity::kVarArray) out += "[]";
  if (arity == Arity::kFixedArray) out += "[" + std::to_string(array_size) + "]";
  return out + " " + name;
}

const FieldSpec* MsgSpec::find_field(std::string_view field_name) const {
  for (const auto& f : fields) {
    if (f.name == field_name) return &f;
  }
  return nullptr;
}

SyntaxError::SyntaxError(int line, std::string reason)
    : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(std::move(reason)) {}

UnresolvedType::UnresolvedType(std::string full_name)
    : Error("unresolved type " + full_name), full_name_(std::move(full_name)) {}

namespace {
std::string join_path(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& p : path) out += (out.empty() ? "" : " -> ") + p;
  return out;
}
}  // namespace

CyclicDependency::CyclicDependency(std::vector<std::string> path)
    : Error("cyclic dependency: " + join_path(path)), path_(std::move(path)) {}

NamedType split_type_name(std::string_view full, std::string_view default_package) {
  if (auto slash = full.find('/'); slash != std::string_view::npos) {
    return {std::string(full.substr(0, slash)), std::string(full.substr(slash + 1))};
  }
  return {std::string(default_package), std::string(full)};
}

MsgSpec parse_msg(std::string_view text, std::string_view package, std::string_view name) {
  MsgSpec spec;
  spec.package = std::string(package);
  spec.name = std::string(name);
  spec.source_text = std::string(text);

  std::set<std::string, std::less<>> field_names;
  std::set<std::string, std::less<>> constant_names;
  int line_no = 0;
  for (std::string_view raw : util::split(text, '\n')) {
    ++line_no;
    std::string_view clean = raw;
    if (auto hash = clean.find('#'); hash != std::string_view::npos) clean = clean.substr(0, hash);
    clean = trim(clean);
    if (clean.empty()) continue;

    auto tokens = util::split_whitespace(clean);
    std::string_view type_token = tokens.front();

    if (clean.find('=') != std::string_view::npos) {
      auto type = builtin_from_name(type_token);
      if (!type) throw SyntaxError(line_no, "constant of non-builtin type '" + std::string(type_token) + "'");
      ConstantSpec c;
      c.type = TypeRef::make_builtin(*type, std::string(type_token));
      std::string_view name_part;
      std::string_view value_part;
      if (*type == Builtin::kString) {
        // String constants run to end of line: '#' is part of the value.
        std::string_view line = trim(raw);
        std::string_view after_type = line.substr(type_token.size());
        auto eq = after_type.find('=');
        name_part = trim(after_type.substr(0, eq));
        value_part = trim(after_type.substr(eq + 1));
      } else {
        std::string_view after_type = clean.substr(type_token.size());
        auto eq = after_type.find('=');
        name_part = trim(after_type.substr(0, eq));
        value_part = trim(after_type.substr(eq + 1));
      }
      if (!is_identifier(name_part)) throw SyntaxError(line_no, "invalid constant name '" + std::string(name_part) + "'");
      c.name = std::string(name_part);
      c.value_text = std::string(value_part);
      c.value = parse_constant_value(*type, value_part, line_no);
      if (!constant_names.insert(c.name).second) throw SyntaxError(line_no, "duplicate constant '" + c.name + "'");
      spec.constants.push_back(std::move(c));
      continue;
    }

    if (tokens.size() != 2) throw SyntaxError(line_no, "expected '<type> <name>'");
    auto parsed = parse_type_token(type_token, package, line_no);
    if (!is_identifier(tokens[1])) throw SyntaxError(line_no, "invalid field name '" + std::string(tokens[1]) + "'");
    FieldSpec f;
    f.name = std::string(tokens[1]);
    f.type = std::move(parsed.type);
    f.arity = parsed.arity;
    f.array_size = parsed.size;
    if (!field_names.insert(f.name).second) throw SyntaxError(line_no, "duplicate field '" + f.name + "'");
    spec.fields.push_back(std::move(f));
  }
  return spec;
}

SrvSpec parse_srv(std::string_view text, std::string_view package, std::string_view name) {
  size_t pos = 0;
  size_t sep_begin = std::string_view::npos;
  size_t sep_end = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    size_t end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).starts_with("---")) {
      sep_begin = pos;
      sep_end = nl == std::string_view::npos ? text.size() : nl + 1;
      break;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (sep_begin == std::string_view::npos) throw SyntaxError(0, "service definition lacks '---' separator");

  SrvSpec srv;
  srv.package = std::string(package);
  srv.name = std::string(name);
  srv.request = parse_msg(text.substr(0, sep_begin), package, std::string(name) + "Request");
  srv.response = parse_msg(text.substr(sep_end), package, std::string(name) + "Response");
  return srv;
}

}  // namespace roslite::msg

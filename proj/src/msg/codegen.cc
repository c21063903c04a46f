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

#include "roslite/msg/codegen.h"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "roslite/serde/codec.h"
#include "roslite/util/strings.h"

namespace roslite::msg {

namespace {

constexpr std::string_view kReservedWords[] = {
    "alignas", "alignof", "and", "asm", "auto", "bool", "break", "case", "catch", "char", "class", "const",
    "constexpr", "continue", "default", "delete", "do", "double", "else", "enum", "explicit", "export", "extern",
    "false", "float", "for", "friend", "goto", "if", "inline", "int", "long", "mutable", "namespace", "new",
    "noexcept", "not", "nullptr", "operator", "or", "private", "protected", "public", "register", "return",
    "short", "signed", "sizeof", "static", "struct", "switch", "template", "this", "throw", "true", "try",
    "typedef", "typeid", "typename", "union", "unsigned", "using", "virtual", "void", "volatile", "while", "xor",
    "concept", "requires", "co_await", "co_return", "co_yield", "char8_t", "consteval", "constinit",
    // generated members
    "serialize", "deserialize", "serialized_size", "from_bytes", "to_bytes",
};

std::string member_name(const std::string& name) {
  for (auto w : kReservedWords) {
    if (w == name) return name + "_";
  }
  return name;
}

std::string cpp_literal(std::string_view text) {
  std::string out = "\"";
  for (unsigned char c : text) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '"':
        out += "\\\"";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '?':
        // Keeps trigraph-like sequences inert.
        out += "\\?";
        break;
      default:
        if (c < 0x20 || c == 0x7F) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\%03o", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

// Splits a long text into one literal per source line.
std::string multiline_literal(std::string_view text, std::string_view indent) {
  if (text.empty()) return "\"\"";
  std::string out;
  size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    size_t end = nl == std::string_view::npos ? text.size() : nl + 1;
    if (!first) out += "\n" + std::string(indent);
    out += cpp_literal(text.substr(pos, end - pos));
    first = false;
    pos = end;
  }
  return out;
}

std::string scalar_cpp_type(Builtin b) {
  switch (b) {
    case Builtin::kBool:
      return "bool";
    case Builtin::kInt8:
      return "std::int8_t";
    case Builtin::kUInt8:
      return "std::uint8_t";
    case Builtin::kInt16:
      return "std::int16_t";
    case Builtin::kUInt16:
      return "std::uint16_t";
    case Builtin::kInt32:
      return "std::int32_t";
    case Builtin::kUInt32:
      return "std::uint32_t";
    case Builtin::kInt64:
      return "std::int64_t";
    case Builtin::kUInt64:
      return "std::uint64_t";
    case Builtin::kFloat32:
      return "float";
    case Builtin::kFloat64:
      return "double";
    case Builtin::kString:
      return "std::string";
    case Builtin::kTime:
      return "::roslite::serde::Time";
    case Builtin::kDuration:
      return "::roslite::serde::Duration";
  }
  return {};
}

bool packable(const FieldSpec& f) {
  if (!f.type.is_builtin()) return false;
  Builtin b = f.type.builtin();
  return b != Builtin::kBool && b != Builtin::kString && b != Builtin::kTime && b != Builtin::kDuration;
}

std::string element_type(const FieldSpec& f) {
  if (f.type.is_builtin()) return scalar_cpp_type(f.type.builtin());
  return "::" + f.type.named().package + "::" + f.type.named().name;
}

std::string field_type(const FieldSpec& f) {
  std::string elem = element_type(f);
  switch (f.arity) {
    case Arity::kScalar:
      return elem;
    case Arity::kVarArray:
      return "std::vector<" + elem + ">";
    case Arity::kFixedArray:
      return "std::array<" + elem + ", " + std::to_string(f.array_size) + ">";
  }
  return elem;
}

std::string constant_declaration(const ConstantSpec& c) {
  Builtin b = c.type.builtin();
  std::string name = member_name(c.name);
  std::string type = b == Builtin::kString ? "std::string_view" : scalar_cpp_type(b);
  std::string value;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) {
          value = v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          value = v == std::numeric_limits<std::int64_t>::min() ? "std::numeric_limits<std::int64_t>::min()"
                                                                : std::to_string(v);
          if (b == Builtin::kInt64 && v != std::numeric_limits<std::int64_t>::min()) value += "LL";
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
          value = std::to_string(v) + "ULL";
        } else if constexpr (std::is_same_v<T, double>) {
          if (std::isnan(v)) {
            value = "std::numeric_limits<" + type + ">::quiet_NaN()";
          } else if (std::isinf(v)) {
            value = std::string(v < 0 ? "-" : "") + "std::numeric_limits<" + type + ">::infinity()";
          } else {
            value = util::format_double(v);
            if (value.find_first_of(".eE") == std::string::npos) value += ".0";
            if (b == Builtin::kFloat32) value = "static_cast<float>(" + value + ")";
          }
        } else {
          value = cpp_literal(v);
        }
      },
      c.value);
  return "  static constexpr " + type + " " + name + " = " + value + ";\n";
}

class StructEmitter {
 public:
  StructEmitter(const MsgSpec& spec, const SchemaRegistry& registry) : spec_(spec), registry_(registry) {}

  void collect_includes(std::set<std::string>& includes) const {
    for (const auto& f : spec_.fields) {
      if (!f.type.is_builtin()) {
        includes.insert(generated_header_path(f.type.named().package, f.type.named().name).generic_string());
      }
    }
  }

  std::string emit() const {
    const std::string name = spec_.name;
    std::ostringstream o;
    o << "struct " << name << " {\n";
    o << "  static constexpr std::string_view kTypeName = " << cpp_literal(spec_.full_name()) << ";\n";
    o << "  static constexpr std::string_view kMd5Sum = " << cpp_literal(compute_md5(spec_, registry_)) << ";\n";
    o << "  static constexpr std::string_view kDefinition =\n      "
      << multiline_literal(dependency_text(spec_, registry_), "      ") << ";\n";
    if (!spec_.constants.empty()) o << "\n";
    for (const auto& c : spec_.constants) o << constant_declaration(c);
    if (!spec_.fields.empty()) o << "\n";
    for (const auto& f : spec_.fields) {
      o << "  " << field_type(f) << " " << member_name(f.name) << "{};\n";
    }
    o << "\n";
    o << "  std::size_t serialized_size() const {\n";
    o << "    std::size_t n = 0;\n";
    for (const auto& f : spec_.fields) o << size_statement(f);
    o << "    return n;\n  }\n\n";

    o << "  void serialize(::roslite::serde::WireWriter& out) const {\n";
    if (spec_.fields.empty()) o << "    (void)out;\n";
    for (const auto& f : spec_.fields) o << write_statement(f);
    o << "  }\n\n";

    o << "  static " << name << " deserialize(::roslite::serde::WireReader& in) {\n";
    if (spec_.fields.empty()) o << "    (void)in;\n";
    o << "    " << name << " msg;\n";
    for (const auto& f : spec_.fields) o << read_statement(f);
    o << "    return msg;\n  }\n\n";

    o << "  std::vector<std::uint8_t> to_bytes() const {\n"
      << "    ::roslite::serde::WireWriter out(serialized_size());\n"
      << "    serialize(out);\n"
      << "    return out.take();\n  }\n\n";
    o << "  static " << name << " from_bytes(std::span<const std::uint8_t> bytes) {\n"
      << "    ::roslite::serde::WireReader in(bytes);\n"
      << "    " << name << " msg = deserialize(in);\n"
      << "    in.expect_end();\n"
      << "    return msg;\n  }\n\n";
    o << "  bool operator==(const " << name << "&) const = default;\n";
    o << "};\n";
    return o.str();
  }

 private:
  std::string element_size_expr(const FieldSpec& f, const std::string& e) const {
    if (!f.type.is_builtin()) return e + ".serialized_size()";
    if (f.type.builtin() == Builtin::kString) return "4 + " + e + ".size()";
    return std::to_string(builtin_wire_size(f.type.builtin()));
  }

  std::string size_statement(const FieldSpec& f) const {
    std::string m = member_name(f.name);
    if (f.arity == Arity::kScalar) return "    n += " + element_size_expr(f, m) + ";\n";
    std::string prefix = f.arity == Arity::kVarArray ? "    n += 4;\n" : "";
    bool fixed_elem = f.type.is_builtin() && f.type.builtin() != Builtin::kString;
    if (fixed_elem) {
      return prefix + "    n += " + m + ".size() * " + std::to_string(builtin_wire_size(f.type.builtin())) + ";\n";
    }
    return prefix + "    for (const auto& e : " + m + ") n += " + element_size_expr(f, "e") + ";\n";
  }

  std::string element_write(const FieldSpec& f, const std::string& e) const {
    if (!f.type.is_builtin()) return e + ".serialize(out);";
    return "out.write(" + e + ");";
  }

  std::string write_statement(const FieldSpec& f) const {
    std::string m = member_name(f.name);
    if (f.arity == Arity::kScalar) return "    " + element_write(f, m) + "\n";
    std::string prefix = f.arity == Arity::kVarArray ? "    out.write_length(" + m + ".size());\n" : "";
    if (packable(f)) {
      return prefix + "    out.write_span(std::span<const " + element_type(f) + ">(" + m + ".data(), " + m +
             ".size()));\n";
    }
    if (f.type.is_builtin() && f.type.builtin() == Builtin::kBool) {
      return prefix + "    for (bool e : " + m + ") out.write(e);\n";
    }
    return prefix + "    for (const auto& e : " + m + ") " + element_write(f, "e") + "\n";
  }

  std::string element_read(const FieldSpec& f) const {
    if (!f.type.is_builtin()) return element_type(f) + "::deserialize(in)";
    switch (f.type.builtin()) {
      case Builtin::kString:
        return "in.read_string(" + cpp_literal(f.name) + ")";
      case Builtin::kTime:
        return "in.read_time()";
      case Builtin::kDuration:
        return "in.read_duration()";
      default:
        return "in.read<" + scalar_cpp_type(f.type.builtin()) + ">()";
    }
  }

  std::string read_statement(const FieldSpec& f) const {
    std::string m = "msg." + member_name(f.name);
    if (f.arity == Arity::kScalar) return "    " + m + " = " + element_read(f) + ";\n";
    std::string min_size = std::to_string(serde::min_element_size(f, registry_));
    if (f.arity == Arity::kFixedArray) {
      if (packable(f)) return "    in.read_span(std::span<" + element_type(f) + ">(" + m + ".data(), " + m + ".size()));\n";
      return "    for (auto& e : " + m + ") e = " + element_read(f) + ";\n";
    }
    std::string out = "    {\n      std::size_t count = in.read_length(" + min_size + ");\n";
    if (packable(f)) {
      out += "      " + m + ".resize(count);\n";
      out += "      in.read_span(std::span<" + element_type(f) + ">(" + m + ".data(), " + m + ".size()));\n";
    } else {
      if (!(f.type.is_builtin() && f.type.builtin() == Builtin::kBool)) out += "      " + m + ".reserve(count);\n";
      out += "      for (std::size_t i = 0; i < count; ++i) " + m + ".push_back(" + element_read(f) + ");\n";
    }
    return out + "    }\n";
  }

  const MsgSpec& spec_;
  const SchemaRegistry& registry_;
};

std::string guard_for(const std::string& package, const std::string& name) {
  std::string g = "ROSLITE_GENERATED_" + package + "_" + name + "_H_";
  for (auto& c : g) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return g;
}

std::string file_prologue(const std::string& package, const std::string& name, const std::set<std::string>& includes) {
  std::ostringstream o;
  o << "// Generated by `roslite msg gen` from " << package << "/" << name << ". Do not edit.\n";
  o << "#ifndef " << guard_for(package, name) << "\n#define " << guard_for(package, name) << "\n\n";
  o << "#include <array>\n#include <cstdint>\n#include <limits>\n#include <span>\n#include <string>\n"
       "#include <string_view>\n#include <vector>\n\n#include \"roslite/serde/wire.h\"\n";
  for (const auto& inc : includes) o << "#include \"" << inc << "\"\n";
  o << "\nnamespace " << package << " {\n\n";
  return o.str();
}

std::string file_epilogue(const std::string& package, const std::string& name) {
  return "}  // namespace " + package + "\n\n#endif  // " + guard_for(package, name) + "\n";
}

}  // namespace

std::filesystem::path generated_header_path(const std::string& package, const std::string& name) {
  return std::filesystem::path(package) / (name + ".h");
}

std::string emit_source(const MsgSpec& spec, const SchemaRegistry& registry) {
  StructEmitter emitter(spec, registry);
  std::set<std::string> includes;
  emitter.collect_includes(includes);
  includes.erase(generated_header_path(spec.package, spec.name).generic_string());
  return file_prologue(spec.package, spec.name, includes) + emitter.emit() + "\n" +
         file_epilogue(spec.package, spec.name);
}

std::string emit_source(const SrvSpec& spec, const SchemaRegistry& registry) {
  StructEmitter request(spec.request, registry);
  StructEmitter response(spec.response, registry);
  std::set<std::string> includes;
  request.collect_includes(includes);
  response.collect_includes(includes);
  std::ostringstream o;
  o << file_prologue(spec.package, spec.name, includes);
  o << request.emit() << "\n" << response.emit() << "\n";
  o << "struct " << spec.name << " {\n";
  o << "  using Request = " << spec.request.name << ";\n";
  o << "  using Response = " << spec.response.name << ";\n";
  o << "  static constexpr std::string_view kTypeName = " << cpp_literal(spec.full_name()) << ";\n";
  o << "  static constexpr std::string_view kMd5Sum = " << cpp_literal(compute_srv_md5(spec, registry)) << ";\n";
  o << "};\n\n";
  o << file_epilogue(spec.package, spec.name);
  return o.str();
}

std::size_t emit_all(const SchemaRegistry& registry, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::set<std::string> service_parts;
  for (const auto& name : registry.service_names()) {
    const auto& srv = registry.service_at(name);
    service_parts.insert(srv.request.full_name());
    service_parts.insert(srv.response.full_name());
  }
  std::size_t written = 0;
  auto write = [&](const std::string& package, const std::string& name, const std::string& text) {
    fs::path path = out_dir / generated_header_path(package, name);
    fs::create_directories(path.parent_path());
    // Unchanged files keep their timestamps so dependent builds stay incremental.
    {
      std::ifstream in(path, std::ios::binary);
      if (in) {
        std::ostringstream ss;
        ss << in.rdbuf();
        if (ss.str() == text) {
          ++written;
          return;
        }
      }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    ++written;
  };
  for (const auto& name : registry.message_names()) {
    if (service_parts.contains(name)) continue;
    const auto& spec = registry.at(name);
    write(spec.package, spec.name, emit_source(spec, registry));
  }
  for (const auto& name : registry.service_names()) {
    const auto& srv = registry.service_at(name);
    write(srv.package, srv.name, emit_source(srv, registry));
  }
  return written;
}

}  // namespace roslite::msg

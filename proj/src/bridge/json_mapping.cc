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

#include "roslite/bridge/json_mapping.h"

#include <charconv>
#include <cmath>
#include <limits>
#include <type_traits>

#include "roslite/util/digest.h"
#include "roslite/util/strings.h"

namespace roslite::bridge {

namespace {

using msg::Arity;
using msg::Builtin;
using msg::FieldSpec;
using msg::MsgSpec;
using msg::SchemaRegistry;
using serde::DynamicValue;
using serde::SchemaMismatch;

constexpr std::int64_t kMaxSafeInteger = std::int64_t{1} << 53;

template <typename T>
constexpr bool kPackable = std::is_arithmetic_v<T> && !std::is_same_v<T, bool>;

template <typename F>
decltype(auto) visit_builtin(Builtin b, F&& f) {
  switch (b) {
    case Builtin::kBool: return f(std::type_identity<bool>{});
    case Builtin::kInt8: return f(std::type_identity<std::int8_t>{});
    case Builtin::kUInt8: return f(std::type_identity<std::uint8_t>{});
    case Builtin::kInt16: return f(std::type_identity<std::int16_t>{});
    case Builtin::kUInt16: return f(std::type_identity<std::uint16_t>{});
    case Builtin::kInt32: return f(std::type_identity<std::int32_t>{});
    case Builtin::kUInt32: return f(std::type_identity<std::uint32_t>{});
    case Builtin::kInt64: return f(std::type_identity<std::int64_t>{});
    case Builtin::kUInt64: return f(std::type_identity<std::uint64_t>{});
    case Builtin::kFloat32: return f(std::type_identity<float>{});
    case Builtin::kFloat64: return f(std::type_identity<double>{});
    case Builtin::kString: return f(std::type_identity<std::string>{});
    case Builtin::kTime: return f(std::type_identity<serde::Time>{});
    case Builtin::kDuration: return f(std::type_identity<serde::Duration>{});
  }
  throw Error("unknown builtin type");
}

std::string join(const std::string& path, std::string_view name) {
  return path.empty() ? std::string(name) : path + "." + std::string(name);
}

std::string indexed(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

std::string element_name(const FieldSpec& f) {
  return f.type.is_builtin() ? std::string(msg::builtin_name(f.type.builtin())) : f.type.named().full_name();
}

std::string field_type_name(const FieldSpec& f) {
  std::string n = element_name(f);
  if (f.arity == Arity::kVarArray) n += "[]";
  if (f.arity == Arity::kFixedArray) n += "[" + std::to_string(f.array_size) + "]";
  return n;
}

std::string describe(const DynamicValue& v) { return std::string(serde::kind_name(v.kind())); }
std::string describe(const Json& j) { return std::string("json ") + j.type_name(); }

// ---- DynamicValue -> JSON ----

Json non_finite(double d) {
  if (std::isnan(d)) return "nan";
  return d > 0 ? "inf" : "-inf";
}

Json element_json(bool v) { return v; }
Json element_json(float v) {
  if (!std::isfinite(v)) return non_finite(v);
  // Shortest text that reads back as the same float, so 0.2f is 0.2 and
  // not 0.20000000298023224.
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  double d = v;
  std::from_chars(buf, r.ptr, d);
  return d;
}
Json element_json(double v) {
  if (!std::isfinite(v)) return non_finite(v);
  return v;
}
Json element_json(const std::string& v) { return v; }
Json element_json(const serde::Time& v) { return Json{{"sec", v.sec}, {"nsec", v.nsec}}; }
Json element_json(const serde::Duration& v) { return Json{{"sec", v.sec}, {"nsec", v.nsec}}; }
template <typename T>
  requires std::is_integral_v<T>
Json element_json(T v) {
  if constexpr (sizeof(T) == 8) {
    if constexpr (std::is_signed_v<T>) {
      if (v > kMaxSafeInteger || v < -kMaxSafeInteger) return std::to_string(v);
    } else {
      if (v > static_cast<std::uint64_t>(kMaxSafeInteger)) return std::to_string(v);
    }
  }
  return v;
}

Json record_json(const MsgSpec& spec, const DynamicValue& value, const SchemaRegistry& registry,
                 const std::string& path);

Json scalar_json(const FieldSpec& f, const DynamicValue& v, const SchemaRegistry& registry, const std::string& path) {
  if (!f.type.is_builtin()) return record_json(registry.at(f.type.named().full_name()), v, registry, path);
  return visit_builtin(f.type.builtin(), [&](auto tag) -> Json {
    using T = typename decltype(tag)::type;
    if (!v.is<T>()) throw SchemaMismatch(path, element_name(f), describe(v));
    return element_json(v.get<T>());
  });
}

Json bytes_json(const DynamicValue& v, const FieldSpec& f, const std::string& path) {
  if (v.is<DynamicValue::PackedArray>()) {
    const auto* bytes = std::get_if<std::vector<std::uint8_t>>(&v.get<DynamicValue::PackedArray>());
    if (!bytes) throw SchemaMismatch(path, field_type_name(f), describe(v));
    return util::base64_encode(*bytes);
  }
  const auto& seq = v.get<DynamicValue::Seq>();
  std::vector<std::uint8_t> bytes;
  bytes.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!seq[i].is<std::uint8_t>()) throw SchemaMismatch(indexed(path, i), "uint8", describe(seq[i]));
    bytes.push_back(seq[i].get<std::uint8_t>());
  }
  return util::base64_encode(bytes);
}

Json field_json(const FieldSpec& f, const DynamicValue& v, const SchemaRegistry& registry, const std::string& path) {
  if (f.arity == Arity::kScalar) return scalar_json(f, v, registry, path);
  if (!v.is_array()) throw SchemaMismatch(path, field_type_name(f), describe(v));
  std::size_t n = v.array_size();
  if (f.arity == Arity::kFixedArray && n != f.array_size) {
    throw SchemaMismatch(path, field_type_name(f), "array of length " + std::to_string(n));
  }
  if (f.type.is_builtin() && f.type.builtin() == Builtin::kUInt8) return bytes_json(v, f, path);

  Json out = Json::array();
  if (v.is<DynamicValue::PackedArray>()) {
    if (!f.type.is_builtin()) throw SchemaMismatch(path, field_type_name(f), describe(v));
    visit_builtin(f.type.builtin(), [&](auto tag) {
      using T = typename decltype(tag)::type;
      if constexpr (kPackable<T>) {
        if (const auto* vec = std::get_if<std::vector<T>>(&v.get<DynamicValue::PackedArray>())) {
          out.get_ref<Json::array_t&>().reserve(vec->size());
          for (T x : *vec) out.push_back(element_json(x));
          return;
        }
      }
      throw SchemaMismatch(path, field_type_name(f), describe(v));
    });
    return out;
  }
  const auto& seq = v.get<DynamicValue::Seq>();
  out.get_ref<Json::array_t&>().reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) out.push_back(scalar_json(f, seq[i], registry, indexed(path, i)));
  return out;
}

Json record_json(const MsgSpec& spec, const DynamicValue& value, const SchemaRegistry& registry,
                 const std::string& path) {
  if (!value.is_record()) throw SchemaMismatch(path, spec.full_name(), describe(value));
  const auto& rec = value.get<DynamicValue::Record>();
  Json out = Json::object();
  for (std::size_t i = 0; i < spec.fields.size(); ++i) {
    const FieldSpec& f = spec.fields[i];
    std::string child = join(path, f.name);
    if (i >= rec.size()) throw SchemaMismatch(child, field_type_name(f), "missing field");
    if (rec[i].first != f.name) throw SchemaMismatch(child, "field '" + f.name + "'", "field '" + rec[i].first + "'");
    out[f.name] = field_json(f, rec[i].second, registry, child);
  }
  if (rec.size() > spec.fields.size()) {
    throw SchemaMismatch(join(path, rec[spec.fields.size()].first), "no field", "unexpected field");
  }
  return out;
}

// ---- JSON -> DynamicValue ----

template <typename T>
T integer_from(const Json& j, const std::string& path, std::string_view type_name) {
  auto fail = [&](const std::string& found) -> T { throw SchemaMismatch(path, std::string(type_name), found); };
  if (j.is_number_unsigned()) {
    auto u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) return fail("out of range " + j.dump());
    return static_cast<T>(u);
  }
  if (j.is_number_integer()) {
    auto s = j.get<std::int64_t>();
    if constexpr (std::is_unsigned_v<T>) {
      if (s < 0) return fail("out of range " + j.dump());
      if (static_cast<std::uint64_t>(s) > std::numeric_limits<T>::max()) return fail("out of range " + j.dump());
    } else {
      if (s < std::numeric_limits<T>::min() || s > std::numeric_limits<T>::max()) return fail("out of range " + j.dump());
    }
    return static_cast<T>(s);
  }
  if (j.is_string()) {
    const auto& text = j.get_ref<const std::string&>();
    T out{};
    auto r = std::from_chars(text.data(), text.data() + text.size(), out);
    if (text.empty() || r.ec != std::errc() || r.ptr != text.data() + text.size()) {
      return fail("string '" + text + "'");
    }
    return out;
  }
  return fail(describe(j));
}

template <typename T>
T float_from(const Json& j, const std::string& path, std::string_view type_name) {
  if (j.is_number()) return static_cast<T>(j.get<double>());
  if (j.is_string()) {
    std::string text = util::to_lower(j.get<std::string>());
    if (text == "nan") return std::numeric_limits<T>::quiet_NaN();
    if (text == "inf" || text == "+inf") return std::numeric_limits<T>::infinity();
    if (text == "-inf") return -std::numeric_limits<T>::infinity();
    throw SchemaMismatch(path, std::string(type_name), "string '" + j.get<std::string>() + "'");
  }
  throw SchemaMismatch(path, std::string(type_name), describe(j));
}

template <typename T>
T stamp_from(const Json& j, const std::string& path, std::string_view type_name) {
  if (!j.is_object()) throw SchemaMismatch(path, std::string(type_name), describe(j));
  T out;
  for (const auto& [key, val] : j.items()) {
    std::string child = join(path, key);
    if (key == "sec") {
      out.sec = integer_from<decltype(out.sec)>(val, child, std::is_same_v<T, serde::Time> ? "uint32" : "int32");
    } else if (key == "nsec") {
      out.nsec = integer_from<decltype(out.nsec)>(val, child, std::is_same_v<T, serde::Time> ? "uint32" : "int32");
    } else {
      throw SchemaMismatch(child, "no field", "unknown field '" + key + "'");
    }
  }
  return out;
}

template <typename T>
T element_from(const Json& j, const std::string& path) {
  constexpr auto type_name = [] {
    if constexpr (std::is_same_v<T, serde::Time>) return std::string_view("time");
    else if constexpr (std::is_same_v<T, serde::Duration>) return std::string_view("duration");
    else return std::string_view();
  }();
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) throw SchemaMismatch(path, "bool", describe(j));
    return j.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!j.is_string()) throw SchemaMismatch(path, "string", describe(j));
    return j.get<std::string>();
  } else if constexpr (std::is_same_v<T, float>) {
    return float_from<float>(j, path, "float32");
  } else if constexpr (std::is_same_v<T, double>) {
    return float_from<double>(j, path, "float64");
  } else if constexpr (std::is_integral_v<T>) {
    std::string name = (std::is_signed_v<T> ? "int" : "uint") + std::to_string(sizeof(T) * 8);
    return integer_from<T>(j, path, name);
  } else {
    return stamp_from<T>(j, path, type_name);
  }
}

DynamicValue record_from(const MsgSpec& spec, const Json& j, const SchemaRegistry& registry, const std::string& path);

DynamicValue scalar_from(const FieldSpec& f, const Json& j, const SchemaRegistry& registry, const std::string& path) {
  if (!f.type.is_builtin()) return record_from(registry.at(f.type.named().full_name()), j, registry, path);
  return visit_builtin(f.type.builtin(), [&](auto tag) -> DynamicValue {
    using T = typename decltype(tag)::type;
    return DynamicValue(element_from<T>(j, path));
  });
}

DynamicValue array_from(const FieldSpec& f, const Json& j, const SchemaRegistry& registry, const std::string& path) {
  bool is_bytes = f.type.is_builtin() && f.type.builtin() == Builtin::kUInt8;
  DynamicValue out;
  std::size_t n = 0;
  if (is_bytes && j.is_string()) {
    auto bytes = util::base64_decode(j.get_ref<const std::string&>());
    if (!bytes) throw SchemaMismatch(path, "base64 " + field_type_name(f), "malformed base64");
    n = bytes->size();
    out = DynamicValue(DynamicValue::PackedArray(std::move(*bytes)));
  } else if (!j.is_array()) {
    throw SchemaMismatch(path, field_type_name(f), describe(j));
  } else if (!f.type.is_builtin()) {
    n = j.size();
    DynamicValue::Seq seq;
    seq.reserve(n);
    for (std::size_t i = 0; i < n; ++i) seq.push_back(scalar_from(f, j[i], registry, indexed(path, i)));
    out = DynamicValue::seq(std::move(seq));
  } else {
    n = j.size();
    out = visit_builtin(f.type.builtin(), [&](auto tag) -> DynamicValue {
      using T = typename decltype(tag)::type;
      if constexpr (kPackable<T>) {
        std::vector<T> vec;
        vec.reserve(n);
        for (std::size_t i = 0; i < n; ++i) vec.push_back(element_from<T>(j[i], indexed(path, i)));
        return DynamicValue(DynamicValue::PackedArray(std::move(vec)));
      } else {
        DynamicValue::Seq seq;
        seq.reserve(n);
        for (std::size_t i = 0; i < n; ++i) seq.emplace_back(element_from<T>(j[i], indexed(path, i)));
        return DynamicValue::seq(std::move(seq));
      }
    });
  }
  if (f.arity == Arity::kFixedArray && n != f.array_size) {
    throw SchemaMismatch(path, field_type_name(f), "array of length " + std::to_string(n));
  }
  return out;
}

DynamicValue record_from(const MsgSpec& spec, const Json& j, const SchemaRegistry& registry, const std::string& path) {
  if (!j.is_object()) throw SchemaMismatch(path, spec.full_name(), describe(j));
  for (const auto& item : j.items()) {
    if (!spec.find_field(item.key())) {
      throw SchemaMismatch(join(path, item.key()), "no field", "unknown field '" + item.key() + "'");
    }
  }
  std::optional<DynamicValue> defaults;
  DynamicValue::Record rec;
  rec.reserve(spec.fields.size());
  for (std::size_t i = 0; i < spec.fields.size(); ++i) {
    const FieldSpec& f = spec.fields[i];
    auto it = j.find(f.name);
    if (it == j.end()) {
      if (!defaults) defaults = serde::default_value(spec, registry);
      rec.emplace_back(f.name, defaults->get<DynamicValue::Record>()[i].second);
      continue;
    }
    std::string child = join(path, f.name);
    rec.emplace_back(f.name, f.is_array() ? array_from(f, *it, registry, child) : scalar_from(f, *it, registry, child));
  }
  return DynamicValue::record(std::move(rec));
}

}  // namespace

Json to_json(const MsgSpec& spec, const DynamicValue& value, const SchemaRegistry& registry) {
  return record_json(spec, value, registry, "");
}

DynamicValue from_json(const MsgSpec& spec, const Json& json, const SchemaRegistry& registry) {
  return record_from(spec, json, registry, "");
}

std::string dump(const Json& json) { return json.dump(-1, ' ', false, Json::error_handler_t::replace); }

EncodingOverhead measure_encoding_overhead(const MsgSpec& spec, const DynamicValue& value,
                                           const SchemaRegistry& registry) {
  EncodingOverhead out;
  out.binary_bytes = serde::serialized_size(spec, value, registry);
  out.json_bytes = dump(to_json(spec, value, registry)).size();
  // An empty message has no binary bytes at all.
  out.ratio = out.binary_bytes ? static_cast<double>(out.json_bytes) / static_cast<double>(out.binary_bytes)
                               : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace roslite::bridge

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

#include "roslite/serde/codec.h"

namespace roslite::serde {

using msg::Arity;
using msg::Builtin;
using msg::FieldSpec;
using msg::MsgSpec;
using msg::SchemaRegistry;

SchemaMismatch::SchemaMismatch(std::string field_path, std::string expected, std::string found)
    : Error("schema mismatch at '" + field_path + "': expected " + expected + ", found " + found),
      field_path_(std::move(field_path)),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

namespace {

// Lazily rendered field path (`pose.position.x`, `ranges[3]`).
struct PathNode {
  const PathNode* parent = nullptr;
  std::string_view name;
  std::size_t index = 0;
  bool is_index = false;

  std::string str() const {
    std::string prefix = parent ? parent->str() : std::string();
    if (is_index) return prefix + "[" + std::to_string(index) + "]";
    if (name.empty()) return prefix;
    return prefix.empty() ? std::string(name) : prefix + "." + std::string(name);
  }
};

template <typename F>
decltype(auto) visit_builtin(Builtin b, F&& f) {
  switch (b) {
    case Builtin::kBool:
      return f(std::type_identity<bool>{});
    case Builtin::kInt8:
      return f(std::type_identity<std::int8_t>{});
    case Builtin::kUInt8:
      return f(std::type_identity<std::uint8_t>{});
    case Builtin::kInt16:
      return f(std::type_identity<std::int16_t>{});
    case Builtin::kUInt16:
      return f(std::type_identity<std::uint16_t>{});
    case Builtin::kInt32:
      return f(std::type_identity<std::int32_t>{});
    case Builtin::kUInt32:
      return f(std::type_identity<std::uint32_t>{});
    case Builtin::kInt64:
      return f(std::type_identity<std::int64_t>{});
    case Builtin::kUInt64:
      return f(std::type_identity<std::uint64_t>{});
    case Builtin::kFloat32:
      return f(std::type_identity<float>{});
    case Builtin::kFloat64:
      return f(std::type_identity<double>{});
    case Builtin::kString:
      return f(std::type_identity<std::string>{});
    case Builtin::kTime:
      return f(std::type_identity<Time>{});
    case Builtin::kDuration:
      break;
  }
  return f(std::type_identity<Duration>{});
}

template <typename T>
constexpr bool kPackable = std::is_arithmetic_v<T> && !std::is_same_v<T, bool>;

std::string describe(const DynamicValue& v) {
  if (v.is<DynamicValue::PackedArray>()) {
    return std::visit(
        [](const auto& vec) {
          using E = typename std::decay_t<decltype(vec)>::value_type;
          DynamicValue probe{E{}};
          return std::string(kind_name(probe.kind())) + "[]";
        },
        v.get<DynamicValue::PackedArray>());
  }
  return std::string(kind_name(v.kind()));
}

std::string expected_name(const FieldSpec& f, bool element) {
  std::string base = f.type.is_builtin() ? std::string(msg::builtin_name(f.type.builtin())) : f.type.named().full_name();
  if (!element && f.is_array()) base += "[]";
  return base;
}

class SizeCounter {
 public:
  template <typename T>
  void write(const T& v) {
    if constexpr (std::is_same_v<T, std::string>) {
      n_ += 4 + v.size();
    } else {
      n_ += sizeof(T);
    }
  }
  void write_length(std::size_t) { n_ += 4; }
  template <typename T>
  void write_span(std::span<const T> values) {
    n_ += values.size_bytes();
  }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
};

template <typename Out>
void write_record(Out& out, const MsgSpec& spec, const DynamicValue& value, const SchemaRegistry& registry,
                  const PathNode& path);

template <typename Out>
void write_element(Out& out, const FieldSpec& f, const DynamicValue& v, const SchemaRegistry& registry,
                   const PathNode& path) {
  if (!f.type.is_builtin()) {
    write_record(out, registry.at(f.type.named().full_name()), v, registry, path);
    return;
  }
  visit_builtin(f.type.builtin(), [&](auto tag) {
    using T = typename decltype(tag)::type;
    if (!v.is<T>()) throw SchemaMismatch(path.str(), expected_name(f, true), describe(v));
    out.write(v.get<T>());
  });
}

template <typename Out>
void write_field(Out& out, const FieldSpec& f, const DynamicValue& v, const SchemaRegistry& registry,
                 const PathNode& path) {
  if (f.arity == Arity::kScalar) {
    write_element(out, f, v, registry, path);
    return;
  }
  if (!v.is_array()) throw SchemaMismatch(path.str(), expected_name(f, false), describe(v));
  std::size_t n = v.array_size();
  if (f.arity == Arity::kFixedArray && n != f.array_size) {
    throw SchemaMismatch(path.str(), expected_name(f, true) + "[" + std::to_string(f.array_size) + "]",
                         "array of length " + std::to_string(n));
  }
  if (f.arity == Arity::kVarArray) out.write_length(n);

  if (v.is<DynamicValue::PackedArray>()) {
    if (!f.type.is_builtin()) throw SchemaMismatch(path.str(), expected_name(f, false), describe(v));
    visit_builtin(f.type.builtin(), [&](auto tag) {
      using T = typename decltype(tag)::type;
      if constexpr (kPackable<T>) {
        const auto& packed = v.get<DynamicValue::PackedArray>();
        if (const auto* vec = std::get_if<std::vector<T>>(&packed)) {
          out.write_span(std::span<const T>(*vec));
          return;
        }
      }
      throw SchemaMismatch(path.str(), expected_name(f, false), describe(v));
    });
    return;
  }
  const auto& seq = v.get<DynamicValue::Seq>();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    PathNode child{&path, {}, i, true};
    write_element(out, f, seq[i], registry, child);
  }
}

template <typename Out>
void write_record(Out& out, const MsgSpec& spec, const DynamicValue& value, const SchemaRegistry& registry,
                  const PathNode& path) {
  if (!value.is_record()) throw SchemaMismatch(path.str(), spec.full_name(), describe(value));
  const auto& rec = value.get<DynamicValue::Record>();
  if (rec.size() != spec.fields.size()) {
    // Name the first missing or unexpected field for a usable error.
    for (std::size_t i = 0; i < spec.fields.size(); ++i) {
      if (i >= rec.size() || rec[i].first != spec.fields[i].name) {
        PathNode child{&path, spec.fields[i].name};
        throw SchemaMismatch(child.str(), expected_name(spec.fields[i], false),
                             i < rec.size() ? "field '" + rec[i].first + "'" : std::string("missing field"));
      }
    }
    PathNode extra{&path, rec[spec.fields.size()].first};
    throw SchemaMismatch(extra.str(), "no field", "unexpected field");
  }
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const FieldSpec& f = spec.fields[i];
    PathNode child{&path, f.name};
    if (rec[i].first != f.name) throw SchemaMismatch(child.str(), "field '" + f.name + "'", "field '" + rec[i].first + "'");
    write_field(out, f, rec[i].second, registry, child);
  }
}

DynamicValue read_record(WireReader& in, const MsgSpec& spec, const SchemaRegistry& registry, const PathNode& path);

DynamicValue read_element(WireReader& in, const FieldSpec& f, const SchemaRegistry& registry, const PathNode& path) {
  if (!f.type.is_builtin()) return read_record(in, registry.at(f.type.named().full_name()), registry, path);
  return visit_builtin(f.type.builtin(), [&](auto tag) -> DynamicValue {
    using T = typename decltype(tag)::type;
    if constexpr (std::is_same_v<T, std::string>) {
      // Only the failing path is rendered.
      try {
        return in.read_string({});
      } catch (const InvalidUtf8&) {
        throw InvalidUtf8(path.str());
      }
    } else if constexpr (std::is_same_v<T, Time>) {
      return in.read_time();
    } else if constexpr (std::is_same_v<T, Duration>) {
      return in.read_duration();
    } else {
      return in.read<T>();
    }
  });
}

DynamicValue read_field(WireReader& in, const FieldSpec& f, const SchemaRegistry& registry, const PathNode& path) {
  if (f.arity == Arity::kScalar) return read_element(in, f, registry, path);
  std::size_t elem_min = min_element_size(f, registry);
  std::size_t n;
  if (f.arity == Arity::kFixedArray) {
    n = f.array_size;
    if (static_cast<std::uint64_t>(n) * elem_min > in.remaining()) throw Truncated(in.offset());
  } else {
    n = in.read_length(elem_min);
  }
  if (f.type.is_builtin()) {
    DynamicValue packed;
    bool done = visit_builtin(f.type.builtin(), [&](auto tag) {
      using T = typename decltype(tag)::type;
      if constexpr (kPackable<T>) {
        std::vector<T> vec(n);
        in.read_span(std::span<T>(vec));
        packed = DynamicValue(DynamicValue::PackedArray(std::move(vec)));
        return true;
      } else {
        return false;
      }
    });
    if (done) return packed;
  }
  DynamicValue::Seq seq;
  seq.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    PathNode child{&path, {}, i, true};
    seq.push_back(read_element(in, f, registry, child));
  }
  return DynamicValue::seq(std::move(seq));
}

DynamicValue read_record(WireReader& in, const MsgSpec& spec, const SchemaRegistry& registry, const PathNode& path) {
  DynamicValue::Record rec;
  rec.reserve(spec.fields.size());
  for (const auto& f : spec.fields) {
    PathNode child{&path, f.name};
    rec.emplace_back(f.name, read_field(in, f, registry, child));
  }
  return DynamicValue::record(std::move(rec));
}

std::size_t min_record_size(const MsgSpec& spec, const SchemaRegistry& registry, int depth);

std::size_t min_field_size(const FieldSpec& f, const SchemaRegistry& registry, int depth) {
  if (f.arity == Arity::kVarArray) return 4;
  std::size_t elem;
  if (f.type.is_builtin()) {
    elem = f.type.builtin() == Builtin::kString ? 4 : msg::builtin_wire_size(f.type.builtin());
  } else {
    elem = min_record_size(registry.at(f.type.named().full_name()), registry, depth + 1);
  }
  return f.arity == Arity::kFixedArray ? elem * f.array_size : elem;
}

std::size_t min_record_size(const MsgSpec& spec, const SchemaRegistry& registry, int depth) {
  if (depth > 64) throw msg::CyclicDependency({spec.full_name()});
  std::size_t total = 0;
  for (const auto& f : spec.fields) total += min_field_size(f, registry, depth);
  return total;
}

}  // namespace

std::size_t min_element_size(const FieldSpec& field, const SchemaRegistry& registry) {
  if (field.type.is_builtin()) {
    return field.type.builtin() == Builtin::kString ? 4 : msg::builtin_wire_size(field.type.builtin());
  }
  return min_record_size(registry.at(field.type.named().full_name()), registry, 0);
}

std::size_t serialized_size(const MsgSpec& spec, const DynamicValue& value, const SchemaRegistry& registry) {
  SizeCounter counter;
  write_record(counter, spec, value, registry, PathNode{});
  return counter.size();
}

void validate(const MsgSpec& spec, const DynamicValue& value, const SchemaRegistry& registry) {
  serialized_size(spec, value, registry);
}

void serialize_into(WireWriter& out, const MsgSpec& spec, const DynamicValue& value, const SchemaRegistry& registry) {
  write_record(out, spec, value, registry, PathNode{});
}

std::vector<std::uint8_t> serialize(const MsgSpec& spec, const DynamicValue& value, const SchemaRegistry& registry) {
  WireWriter out(serialized_size(spec, value, registry));
  serialize_into(out, spec, value, registry);
  return out.take();
}

DynamicValue deserialize_from(WireReader& in, const MsgSpec& spec, const SchemaRegistry& registry) {
  return read_record(in, spec, registry, PathNode{});
}

DynamicValue deserialize(const MsgSpec& spec, std::span<const std::uint8_t> bytes, const SchemaRegistry& registry) {
  WireReader in(bytes);
  DynamicValue v = deserialize_from(in, spec, registry);
  in.expect_end();
  return v;
}

DynamicValue default_scalar(Builtin type) {
  return visit_builtin(type, [](auto tag) { return DynamicValue(typename decltype(tag)::type{}); });
}

DynamicValue default_value(const MsgSpec& spec, const SchemaRegistry& registry) {
  DynamicValue::Record rec;
  for (const auto& f : spec.fields) {
    auto element = [&]() {
      return f.type.is_builtin() ? default_scalar(f.type.builtin())
                                 : default_value(registry.at(f.type.named().full_name()), registry);
    };
    if (f.arity == Arity::kScalar) {
      rec.emplace_back(f.name, element());
      continue;
    }
    std::size_t n = f.arity == Arity::kFixedArray ? f.array_size : 0;
    DynamicValue arr;
    bool packed = f.type.is_builtin() && visit_builtin(f.type.builtin(), [&](auto tag) {
                    using T = typename decltype(tag)::type;
                    if constexpr (kPackable<T>) {
                      arr = DynamicValue(DynamicValue::PackedArray(std::vector<T>(n)));
                      return true;
                    } else {
                      return false;
                    }
                  });
    if (!packed) arr = DynamicValue::seq(DynamicValue::Seq(n, element()));
    rec.emplace_back(f.name, std::move(arr));
  }
  return DynamicValue::record(std::move(rec));
}

}  // namespace roslite::serde

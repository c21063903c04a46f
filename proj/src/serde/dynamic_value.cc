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

#include "roslite/serde/dynamic_value.h"

#include <bit>
#include <sstream>

namespace roslite::serde {

namespace {

template <typename T>
bool scalar_equal(const T& a, const T& b) {
  if constexpr (std::is_same_v<T, float>) {
    return std::bit_cast<std::uint32_t>(a) == std::bit_cast<std::uint32_t>(b);
  } else if constexpr (std::is_same_v<T, double>) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
  } else {
    return a == b;
  }
}

template <typename T>
bool packed_equal(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!scalar_equal(a[i], b[i])) return false;
  }
  return true;
}

bool packed_vs_seq(const DynamicValue::PackedArray& packed, const DynamicValue::Seq& seq) {
  return std::visit(
      [&](const auto& vec) {
        using T = typename std::decay_t<decltype(vec)>::value_type;
        if (vec.size() != seq.size()) return false;
        for (size_t i = 0; i < vec.size(); ++i) {
          if (!seq[i].is<T>() || !scalar_equal(vec[i], seq[i].get<T>())) return false;
        }
        return true;
      },
      packed);
}

}  // namespace

const DynamicValue* DynamicValue::find(std::string_view name) const {
  if (!is_record()) return nullptr;
  for (const auto& [k, v] : get<Record>()) {
    if (k == name) return &v;
  }
  return nullptr;
}

DynamicValue* DynamicValue::find(std::string_view name) {
  return const_cast<DynamicValue*>(std::as_const(*this).find(name));
}

const DynamicValue& DynamicValue::at(std::string_view name) const {
  if (const auto* v = find(name)) return *v;
  throw Error("no field '" + std::string(name) + "'");
}

DynamicValue& DynamicValue::at(std::string_view name) {
  return const_cast<DynamicValue&>(std::as_const(*this).at(name));
}

DynamicValue& DynamicValue::set(std::string_view name, DynamicValue value) {
  if (!is_record()) storage_ = Record{};
  if (auto* v = find(name)) {
    *v = std::move(value);
    return *v;
  }
  auto& rec = get<Record>();
  rec.emplace_back(std::string(name), std::move(value));
  return rec.back().second;
}

std::size_t DynamicValue::array_size() const {
  if (is<Seq>()) return get<Seq>().size();
  if (is<PackedArray>()) return std::visit([](const auto& v) { return v.size(); }, get<PackedArray>());
  throw Error("value is not an array");
}

DynamicValue DynamicValue::array_element(std::size_t i) const {
  if (is<Seq>()) return get<Seq>().at(i);
  if (is<PackedArray>()) {
    return std::visit([&](const auto& v) { return DynamicValue(v.at(i)); }, get<PackedArray>());
  }
  throw Error("value is not an array");
}

double DynamicValue::as_double() const {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_arithmetic_v<T>) {
          return static_cast<double>(v);
        } else {
          throw Error("value is not numeric");
        }
      },
      storage_);
}

bool DynamicValue::operator==(const DynamicValue& other) const {
  if (is<PackedArray>() && other.is<Seq>()) return packed_vs_seq(get<PackedArray>(), other.get<Seq>());
  if (is<Seq>() && other.is<PackedArray>()) return packed_vs_seq(other.get<PackedArray>(), get<Seq>());
  if (storage_.index() != other.storage_.index()) return false;
  return std::visit(
      [&](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        const auto& b = std::get<T>(other.storage_);
        if constexpr (std::is_same_v<T, PackedArray>) {
          if (a.index() != b.index()) return false;
          return std::visit(
              [&](const auto& va) {
                using V = std::decay_t<decltype(va)>;
                return packed_equal(va, std::get<V>(b));
              },
              a);
        } else if constexpr (std::is_same_v<T, Seq> || std::is_same_v<T, Record>) {
          return a == b;
        } else {
          return scalar_equal(a, b);
        }
      },
      storage_);
}

std::string_view kind_name(DynamicValue::Kind k) {
  static constexpr std::string_view kNames[] = {"bool", "int8",   "uint8",  "int16",    "uint16", "int32",
                                                "uint32", "int64", "uint64", "float32", "float64", "string",
                                                "time",   "duration", "sequence", "record", "packed array"};
  return kNames[static_cast<size_t>(k)];
}

namespace {

void debug_into(std::ostringstream& out, const DynamicValue& v) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          out << (x ? "true" : "false");
        } else if constexpr (std::is_same_v<T, std::int8_t> || std::is_same_v<T, std::uint8_t>) {
          out << static_cast<int>(x);
        } else if constexpr (std::is_arithmetic_v<T>) {
          out << x;
        } else if constexpr (std::is_same_v<T, std::string>) {
          out << '"' << x << '"';
        } else if constexpr (std::is_same_v<T, Time> || std::is_same_v<T, Duration>) {
          out << "{" << x.sec << ", " << x.nsec << "}";
        } else if constexpr (std::is_same_v<T, DynamicValue::Seq>) {
          out << "[";
          for (size_t i = 0; i < x.size(); ++i) {
            if (i) out << ", ";
            debug_into(out, x[i]);
          }
          out << "]";
        } else if constexpr (std::is_same_v<T, DynamicValue::Record>) {
          out << "{";
          for (size_t i = 0; i < x.size(); ++i) {
            if (i) out << ", ";
            out << x[i].first << ": ";
            debug_into(out, x[i].second);
          }
          out << "}";
        } else {
          out << "[";
          std::visit(
              [&](const auto& vec) {
                for (size_t i = 0; i < vec.size(); ++i) {
                  if (i) out << ", ";
                  using E = typename std::decay_t<decltype(vec)>::value_type;
                  if constexpr (sizeof(E) == 1) {
                    out << static_cast<int>(vec[i]);
                  } else {
                    out << vec[i];
                  }
                }
              },
              x);
          out << "]";
        }
      },
      v.storage());
}

}  // namespace

std::string DynamicValue::debug_string() const {
  std::ostringstream out;
  debug_into(out, *this);
  return out.str();
}

}  // namespace roslite::serde

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

#include "support/random_value.h"

#include <bit>
#include <limits>

namespace roslite::testing {

using msg::Arity;
using msg::Builtin;
using serde::DynamicValue;

namespace {

template <typename T>
T random_int(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> small(-3, 3);
  switch (rng() % 4) {
    case 0:
      return std::numeric_limits<T>::min();
    case 1:
      return std::numeric_limits<T>::max();
    case 2:
      return static_cast<T>(small(rng));
    default:
      return static_cast<T>(rng());
  }
}

template <typename T>
T random_float(std::mt19937_64& rng, bool wild) {
  if (wild && rng() % 5 == 0) {
    if constexpr (sizeof(T) == 4) {
      return std::bit_cast<float>(static_cast<std::uint32_t>(rng()));
    } else {
      return std::bit_cast<double>(static_cast<std::uint64_t>(rng()));
    }
  }
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  return static_cast<T>(d(rng));
}

DynamicValue random_scalar(Builtin b, std::mt19937_64& rng, const RandomValueOptions& o) {
  switch (b) {
    case Builtin::kBool:
      return DynamicValue(static_cast<bool>(rng() & 1));
    case Builtin::kInt8:
      return DynamicValue(random_int<std::int8_t>(rng));
    case Builtin::kUInt8:
      return DynamicValue(random_int<std::uint8_t>(rng));
    case Builtin::kInt16:
      return DynamicValue(random_int<std::int16_t>(rng));
    case Builtin::kUInt16:
      return DynamicValue(random_int<std::uint16_t>(rng));
    case Builtin::kInt32:
      return DynamicValue(random_int<std::int32_t>(rng));
    case Builtin::kUInt32:
      return DynamicValue(random_int<std::uint32_t>(rng));
    case Builtin::kInt64:
      return DynamicValue(random_int<std::int64_t>(rng));
    case Builtin::kUInt64:
      return DynamicValue(random_int<std::uint64_t>(rng));
    case Builtin::kFloat32:
      return DynamicValue(random_float<float>(rng, o.wild_floats));
    case Builtin::kFloat64:
      return DynamicValue(random_float<double>(rng, o.wild_floats));
    case Builtin::kString:
      return DynamicValue(random_utf8(rng, o.max_string));
    case Builtin::kTime:
      return DynamicValue(serde::Time{static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng())});
    case Builtin::kDuration:
      return DynamicValue(serde::Duration{static_cast<std::int32_t>(rng()), static_cast<std::int32_t>(rng())});
  }
  return {};
}

template <typename T>
DynamicValue packed_of(const DynamicValue::Seq& seq) {
  std::vector<T> out;
  out.reserve(seq.size());
  for (const auto& v : seq) out.push_back(v.get<T>());
  return DynamicValue(DynamicValue::PackedArray(std::move(out)));
}

DynamicValue pack(Builtin b, const DynamicValue::Seq& seq) {
  switch (b) {
    case Builtin::kInt8:
      return packed_of<std::int8_t>(seq);
    case Builtin::kUInt8:
      return packed_of<std::uint8_t>(seq);
    case Builtin::kInt16:
      return packed_of<std::int16_t>(seq);
    case Builtin::kUInt16:
      return packed_of<std::uint16_t>(seq);
    case Builtin::kInt32:
      return packed_of<std::int32_t>(seq);
    case Builtin::kUInt32:
      return packed_of<std::uint32_t>(seq);
    case Builtin::kInt64:
      return packed_of<std::int64_t>(seq);
    case Builtin::kUInt64:
      return packed_of<std::uint64_t>(seq);
    case Builtin::kFloat32:
      return packed_of<float>(seq);
    case Builtin::kFloat64:
      return packed_of<double>(seq);
    default:
      return DynamicValue::seq(seq);
  }
}

}  // namespace

std::string random_utf8(std::mt19937_64& rng, std::size_t max_len) {
  static const char* kPieces[] = {"a", "Z", "0", " ", "_", "\n", "\xc3\xa9", "\xe2\x82\xac", "\xf0\x9f\x98\x80", "#",
                                  "="};
  std::size_t n = max_len == 0 ? 0 : rng() % (max_len + 1);
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += kPieces[rng() % std::size(kPieces)];
  return s;
}

DynamicValue random_value(const msg::MsgSpec& spec, const msg::SchemaRegistry& registry, std::mt19937_64& rng,
                          const RandomValueOptions& o) {
  DynamicValue::Record rec;
  for (const auto& f : spec.fields) {
    auto element = [&]() {
      if (f.type.is_builtin()) return random_scalar(f.type.builtin(), rng, o);
      return random_value(registry.at(f.type.named().full_name()), registry, rng, o);
    };
    if (f.arity == Arity::kScalar) {
      rec.emplace_back(f.name, element());
      continue;
    }
    std::size_t n = f.arity == Arity::kFixedArray ? f.array_size : rng() % (o.max_array + 1);
    DynamicValue::Seq seq;
    for (std::size_t i = 0; i < n; ++i) seq.push_back(element());
    bool as_seq = !f.type.is_builtin() || (o.mix_array_layouts && rng() % 3 == 0);
    rec.emplace_back(f.name, as_seq ? DynamicValue::seq(std::move(seq)) : pack(f.type.builtin(), seq));
  }
  return DynamicValue::record(std::move(rec));
}

}  // namespace roslite::testing

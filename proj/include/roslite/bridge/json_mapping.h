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

#ifndef ROSLITE_BRIDGE_JSON_MAPPING_H_
#define ROSLITE_BRIDGE_JSON_MAPPING_H_

#include <cstddef>
#include <string>

#include "json.hpp"
#include "roslite/msg/registry.h"
#include "roslite/serde/codec.h"

// Schema-driven mapping between DynamicValue and JSON:
//   - integers as numbers; 64-bit values beyond +-2^53 as decimal strings
//   - float32/float64 as numbers, non-finite as "nan", "inf", "-inf"
//   - uint8 arrays (fixed or variable) as base64 strings
//   - time/duration as {"sec", "nsec"}
//   - records as objects in schema field order
namespace roslite::bridge {

using Json = nlohmann::ordered_json;

// Throws serde::SchemaMismatch when `value` does not conform to `spec`.
Json to_json(const msg::MsgSpec& spec, const serde::DynamicValue& value, const msg::SchemaRegistry& registry);

// Inverse of to_json. Missing fields take their zero/empty value; unknown
// fields and type mismatches throw serde::SchemaMismatch naming the path.
// uint8 arrays also accept a JSON array of numbers.
serde::DynamicValue from_json(const msg::MsgSpec& spec, const Json& json, const msg::SchemaRegistry& registry);

// Compact text. Strings that are not valid UTF-8 get U+FFFD substitutions.
std::string dump(const Json& json);

struct EncodingOverhead {
  std::size_t binary_bytes = 0;
  std::size_t json_bytes = 0;
  double ratio = 0.0;  // json_bytes / binary_bytes; infinity for an empty message
};

// Sizes of the same value on the TCPROS wire and as compact JSON text.
EncodingOverhead measure_encoding_overhead(const msg::MsgSpec& spec, const serde::DynamicValue& value,
                                           const msg::SchemaRegistry& registry);

}  // namespace roslite::bridge

#endif  // ROSLITE_BRIDGE_JSON_MAPPING_H_

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

#ifndef ROSLITE_SERDE_CODEC_H_
#define ROSLITE_SERDE_CODEC_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "roslite/msg/registry.h"
#include "roslite/msg/schema.h"
#include "roslite/serde/dynamic_value.h"
#include "roslite/serde/wire.h"

// Schema-driven ROS 1 codec for DynamicValue trees.
namespace roslite::serde {

class SchemaMismatch : public Error {
 public:
  SchemaMismatch(std::string field_path, std::string expected, std::string found);
  const std::string& field_path() const { return field_path_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::string field_path_;
  std::string expected_;
  std::string found_;
};

std::size_t serialized_size(const msg::MsgSpec& spec, const DynamicValue& value, const msg::SchemaRegistry& registry);

std::vector<std::uint8_t> serialize(const msg::MsgSpec& spec, const DynamicValue& value,
                                    const msg::SchemaRegistry& registry);
void serialize_into(WireWriter& out, const msg::MsgSpec& spec, const DynamicValue& value,
                    const msg::SchemaRegistry& registry);

// `bytes` must hold exactly one message body.
DynamicValue deserialize(const msg::MsgSpec& spec, std::span<const std::uint8_t> bytes,
                         const msg::SchemaRegistry& registry);
DynamicValue deserialize_from(WireReader& in, const msg::MsgSpec& spec, const msg::SchemaRegistry& registry);

// Zero/empty value of every field; fixed arrays filled to their length.
DynamicValue default_value(const msg::MsgSpec& spec, const msg::SchemaRegistry& registry);
DynamicValue default_scalar(msg::Builtin type);

// Lower bound on the encoded size of one element of `field` (used to
// validate declared array lengths before allocation).
std::size_t min_element_size(const msg::FieldSpec& field, const msg::SchemaRegistry& registry);

// Throws SchemaMismatch when `value` does not conform to `spec`.
void validate(const msg::MsgSpec& spec, const DynamicValue& value, const msg::SchemaRegistry& registry);

}  // namespace roslite::serde

#endif  // ROSLITE_SERDE_CODEC_H_

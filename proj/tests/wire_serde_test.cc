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

#include <gtest/gtest.h>

#include <random>

#include "roslite/msg/registry.h"
#include "roslite/serde/codec.h"
#include "roslite/util/strings.h"
#include "support/random_value.h"

namespace roslite::serde {
namespace {

using msg::builtin_corpus;
using Bytes = std::vector<std::uint8_t>;

Bytes from_hex(std::string_view hex) {
  Bytes out;
  for (size_t i = 0; i + 1 < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(std::stoi(std::string(hex.substr(i, 2)), nullptr, 16)));
  }
  return out;
}

DynamicValue vec3(double x, double y, double z) {
  return DynamicValue::record({{"x", x}, {"y", y}, {"z", z}});
}

TEST(Serialize, Int32) {
  const auto& reg = builtin_corpus();
  const auto& spec = reg.at("std_msgs/Int32");
  DynamicValue v = DynamicValue::record({{"data", std::int32_t{7}}});
  EXPECT_EQ(serialized_size(spec, v, reg), 4u);
  EXPECT_EQ(serialize(spec, v, reg), (Bytes{0x07, 0x00, 0x00, 0x00}));
  EXPECT_EQ(deserialize(spec, Bytes{0x07, 0, 0, 0}, reg), v);
}

TEST(Serialize, Strings) {
  const auto& reg = builtin_corpus();
  const auto& spec = reg.at("std_msgs/String");
  EXPECT_EQ(serialized_size(spec, DynamicValue::record({{"data", ""}}), reg), 4u);
  EXPECT_EQ(serialize(spec, DynamicValue::record({{"data", "ab"}}), reg), (Bytes{2, 0, 0, 0, 0x61, 0x62}));
}

// Frozen from tests/oracles/golden_wire.py (rosbags ROS1 serializer).
TEST(Serialize, TwistMatchesReferenceEncoding) {
  const auto& reg = builtin_corpus();
  const auto& spec = reg.at("geometry_msgs/Twist");
  DynamicValue v = DynamicValue::record({{"linear", vec3(1.5, -2.0, 0.25)}, {"angular", vec3(0.0, 0.5, -3.0)}});
  EXPECT_EQ(util::hex_encode(serialize(spec, v, reg)),
            "000000000000f83f00000000000000c0000000000000d03f0000000000000000000000000000e03f00000000000008c0");
}

TEST(Serialize, TransformStampedMatchesReferenceEncoding) {
  const auto& reg = builtin_corpus();
  const auto& spec = reg.at("geometry_msgs/TransformStamped");
  DynamicValue header = DynamicValue::record(
      {{"seq", std::uint32_t{7}}, {"stamp", Time{1600000000, 250}}, {"frame_id", "map"}});
  DynamicValue v = DynamicValue::record(
      {{"header", header},
       {"child_frame_id", "base_link"},
       {"transform", DynamicValue::record({{"translation", vec3(1, 2, 3)},
                                           {"rotation", DynamicValue::record({{"x", 0.0}, {"y", 0.0}, {"z", 0.0}, {"w", 1.0}})}})}});
  auto bytes = serialize(spec, v, reg);
  EXPECT_EQ(util::hex_encode(bytes),
            "0700000000105e5ffa000000030000006d617009000000626173655f6c696e6b000000000000f03f0000000000000040000000"
            "0000000840000000000000000000000000000000000000000000000000000000000000f03f");
  EXPECT_EQ(deserialize(spec, bytes, reg), v);
}

// Independent size oracle: sum over the LaserScan schema by hand.
TEST(SerializedSize, LaserScan360) {
  const auto& reg = builtin_corpus();
  const auto& spec = reg.at("sensor_msgs/LaserScan");
  DynamicValue v = default_value(spec, reg);
  v.at("ranges") = DynamicValue(DynamicValue::PackedArray(std::vector<float>(360)));
  const std::size_t header = 4 + 8 + 4;  // seq, stamp, empty frame_id
  const std::size_t scalars = 7 * 4;
  const std::size_t arrays = (4 + 360 * 4) + 4;
  EXPECT_EQ(serialized_size(spec, v, reg), header + scalars + arrays);
  EXPECT_EQ(serialized_size(spec, v, reg), 1492u);  // rosbags serializer, same value
}

TEST(Serialize, FixedArrayHasNoPrefix) {
  const auto& reg = builtin_corpus();
  const auto& spec = reg.at("geometry_msgs/PoseWithCovariance");
  DynamicValue v = default_value(spec, reg);
  EXPECT_EQ(serialized_size(spec, v, reg), 7 * 8 + 36 * 8u);
  v.at("covariance") = DynamicValue(DynamicValue::PackedArray(std::vector<double>(35)));
  EXPECT_THROW(serialize(spec, v, reg), SchemaMismatch);
}

TEST(Serialize, SchemaMismatchNamesField) {
  const auto& reg = builtin_corpus();
  const auto& spec = reg.at("geometry_msgs/Twist");
  DynamicValue v = DynamicValue::record({{"linear", vec3(0, 0, 0)}, {"angular", vec3(0, 0, 0)}});
  v.at("angular").at("z") = std::int32_t{1};
  try {
    serialize(spec, v, reg);
    FAIL();
  } catch (const SchemaMismatch& e) {
    EXPECT_EQ(e.field_path(), "angular.z");
    EXPECT_EQ(e.expected(), "float64");
    EXPECT_EQ(e.found(), "int32");
  }
  DynamicValue missing = DynamicValue::record({{"linear", vec3(0, 0, 0)}});
  EXPECT_THROW(serialize(spec, missing, reg), SchemaMismatch);
}

TEST(Serialize, SeqAndPackedLayoutsEncodeIdentically) {
  const auto& reg = builtin_corpus();
  const auto& spec = reg.at("sensor_msgs/JointState");
  DynamicValue a = default_value(spec, reg);
  a.at("position") = DynamicValue(DynamicValue::PackedArray(std::vector<double>{1.0, 2.0}));
  DynamicValue b = a;
  b.at("position") = DynamicValue::seq({1.0, 2.0});
  EXPECT_EQ(serialize(spec, a, reg), serialize(spec, b, reg));
  EXPECT_EQ(a, b);
}

TEST(Deserialize, Errors) {
  const auto& reg = builtin_corpus();
  const auto& i32 = reg.at("std_msgs/Int32");
  EXPECT_THROW(deserialize(i32, Bytes{1, 2, 3}, reg), Truncated);
  EXPECT_THROW(deserialize(i32, Bytes{1, 2, 3, 4, 5}, reg), TrailingBytes);
  const auto& str = reg.at("std_msgs/String");
  EXPECT_THROW(deserialize(str, Bytes{0xff, 0xff, 0xff, 0x7f, 'a'}, reg), LengthOverrun);
  try {
    deserialize(str, Bytes{2, 0, 0, 0, 0xc3, 0x28}, reg);
    FAIL();
  } catch (const InvalidUtf8& e) {
    EXPECT_EQ(e.field_path(), "data");
  }
  const auto& tf = reg.at("tf2_msgs/TFMessage");
  // Claims 1000 transforms with no bytes behind them: rejected before allocation.
  EXPECT_THROW(deserialize(tf, Bytes{0xe8, 0x03, 0, 0}, reg), LengthOverrun);
}

TEST(Deserialize, TimePassThrough) {
  const auto& reg = builtin_corpus();
  const auto& spec = reg.at("std_msgs/Time");
  DynamicValue v = DynamicValue::record({{"data", Time{5, 2'000'000'000u}}});
  EXPECT_EQ(deserialize(spec, serialize(spec, v, reg), reg), v);
}

TEST(Deserialize, EmptyMessageArraysAreCapped) {
  auto reg = msg::SchemaRegistry::Builder()
                 .add_builtin_corpus()
                 .add(msg::parse_msg("std_msgs/Empty[] items", "p", "Many"))
                 .build();
  const auto& spec = reg.at("p/Many");
  EXPECT_EQ(deserialize(spec, Bytes{3, 0, 0, 0}, reg).at("items").array_size(), 3u);
  EXPECT_THROW(deserialize(spec, Bytes{0xff, 0xff, 0xff, 0xff}, reg), LengthOverrun);
}

// Round trip and size law over randomized values of every corpus type.
TEST(Property, RoundTripAndSizeLaw) {
  const auto& reg = builtin_corpus();
  std::mt19937_64 rng(7);
  auto names = reg.message_names();
  for (int iter = 0; iter < 3000; ++iter) {
    const auto& spec = reg.at(names[iter % names.size()]);
    DynamicValue v = testing::random_value(spec, reg, rng);
    auto bytes = serialize(spec, v, reg);
    ASSERT_EQ(bytes.size(), serialized_size(spec, v, reg)) << spec.full_name();
    ASSERT_EQ(deserialize(spec, bytes, reg), v) << spec.full_name() << " " << v.debug_string();
  }
}

// Fuzz: random and mutated bytes never crash the decoder.
TEST(Fuzz, DeserializeImuNeverCrashes) {
  const auto& reg = builtin_corpus();
  const auto& imu = reg.at("sensor_msgs/Imu");
  std::mt19937_64 rng(99);
  Bytes valid = serialize(imu, testing::random_value(imu, reg, rng), reg);
  int ok = 0;
  for (int iter = 0; iter < 50000; ++iter) {
    Bytes input;
    if (iter % 2 == 0) {
      input.resize(rng() % 512);
      for (auto& b : input) b = static_cast<std::uint8_t>(rng());
    } else {
      input = valid;
      for (int k = 0; k < 4; ++k) input[rng() % input.size()] = static_cast<std::uint8_t>(rng());
      input.resize(rng() % (input.size() + 8), 0);
    }
    try {
      deserialize(imu, input, reg);
      ++ok;
    } catch (const DecodeError&) {
    }
  }
  EXPECT_GE(ok, 0);
}

}  // namespace
}  // namespace roslite::serde

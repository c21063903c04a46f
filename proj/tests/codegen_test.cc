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

#include "roslite/msg/codegen.h"
#include "roslite/msg/registry.h"
#include "roslite/serde/codec.h"
#include "support/random_value.h"

// Headers generated from the corpus at build time.
#include "corpus_includes.inc"

namespace roslite::msg {
namespace {

using serde::DynamicValue;

TEST(EmitSource, Md5ConstantMatchesComputedHash) {
  const auto& reg = builtin_corpus();
  std::string src = emit_source(reg.at("std_msgs/Int32"), reg);
  EXPECT_NE(src.find("kMd5Sum = \"da5909fbe378aeaf85e547e830cc1bb7\""), std::string::npos);
  EXPECT_EQ(std_msgs::Int32::kMd5Sum, compute_md5("std_msgs/Int32", reg));
  EXPECT_EQ(std_msgs::Int32::kTypeName, "std_msgs/Int32");
}

TEST(EmitSource, Deterministic) {
  const auto& reg = builtin_corpus();
  for (const auto& name : reg.message_names()) {
    EXPECT_EQ(emit_source(reg.at(name), reg), emit_source(reg.at(name), reg));
  }
}

TEST(EmitSource, DefinitionConstantIsDependencyText) {
  const auto& reg = builtin_corpus();
  EXPECT_EQ(geometry_msgs::TwistStamped::kDefinition, dependency_text(reg.at("geometry_msgs/TwistStamped"), reg));
  EXPECT_EQ(std_msgs::Header::kDefinition, reg.at("std_msgs/Header").source_text);
}

TEST(EmitSource, ConstantsExposed) {
  EXPECT_EQ(sensor_msgs::JoyFeedback::TYPE_LED, 0);
  EXPECT_EQ(sensor_msgs::JoyFeedback::TYPE_BUZZER, 2);
  auto reg = SchemaRegistry::Builder()
                 .add(parse_msg("string NAME = a \"quoted\" # text\nfloat64 PI=3.14159\nint64 MIN=-9223372036854775808\n"
                                "int32 v",
                                "p", "K"))
                 .build();
  std::string src = emit_source(reg.at("p/K"), reg);
  EXPECT_NE(src.find("NAME = \"a \\\"quoted\\\" # text\""), std::string::npos) << src;
  EXPECT_NE(src.find("PI = 3.14159"), std::string::npos);
  EXPECT_NE(src.find("std::numeric_limits<std::int64_t>::min()"), std::string::npos);
}

TEST(EmitSource, ServiceMd5) {
  EXPECT_EQ(std_srvs::Trigger::kMd5Sum, "937c9679a518e3a18d831e57125ea522");
  EXPECT_EQ(roscpp_tutorials::TwoInts::kMd5Sum, "6a2e34150c00229791cc89ff309fff21");
  roscpp_tutorials::TwoInts::Request req;
  req.a = 1;
  req.b = 2;
  EXPECT_EQ(req.to_bytes().size(), 16u);
}

TEST(EmitSource, FixedArrayStorageAndNoPrefix) {
  geometry_msgs::PoseWithCovariance p;
  static_assert(std::tuple_size_v<decltype(p.covariance)> == 36);
  EXPECT_EQ(p.serialized_size(), 7 * 8 + 36 * 8u);
  p.covariance[35] = 1.0;
  auto bytes = p.to_bytes();
  EXPECT_EQ(bytes.size(), p.serialized_size());
  const auto& reg = builtin_corpus();
  auto dyn = serde::deserialize(reg.at("geometry_msgs/PoseWithCovariance"), bytes, reg);
  EXPECT_EQ(dyn.at("covariance").array_element(35), DynamicValue(1.0));
}

// Generated/dynamic equivalence: bytes produced by the dynamic codec decode
// into the generated struct and re-encode to the identical bytes.
template <typename T>
void check_equivalence(std::mt19937_64& rng) {
  const auto& reg = builtin_corpus();
  const auto& spec = reg.at(T::kTypeName);
  for (int i = 0; i < 40; ++i) {
    DynamicValue v = testing::random_value(spec, reg, rng);
    auto dynamic_bytes = serde::serialize(spec, v, reg);
    T typed = T::from_bytes(dynamic_bytes);
    ASSERT_EQ(typed.serialized_size(), dynamic_bytes.size()) << T::kTypeName;
    ASSERT_EQ(typed.to_bytes(), dynamic_bytes) << T::kTypeName;
    ASSERT_EQ(serde::deserialize(spec, typed.to_bytes(), reg), v) << T::kTypeName;
  }
  EXPECT_EQ(T::kMd5Sum, compute_md5(spec, reg));
}

TEST(EmitSource, GeneratedMatchesDynamicForEveryCorpusType) {
  std::mt19937_64 rng(2024);
  int types = 0;
#define ROSLITE_CORPUS_TYPE(pkg, name) \
  check_equivalence<::pkg::name>(rng); \
  ++types;
#include "corpus_types.inc"
#undef ROSLITE_CORPUS_TYPE
  EXPECT_EQ(static_cast<std::size_t>(types), builtin_corpus().message_names().size());
}

}  // namespace
}  // namespace roslite::msg

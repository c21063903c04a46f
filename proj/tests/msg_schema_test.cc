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

#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "roslite/msg/registry.h"
#include "roslite/msg/schema.h"
#include "roslite/util/digest.h"

namespace roslite::msg {
namespace {

std::map<std::string, std::string> load_golden() {
  std::ifstream in(std::string(ROSLITE_TEST_DATA_DIR) + "/golden_md5.txt");
  std::map<std::string, std::string> out;
  std::string name, md5;
  while (in >> name >> md5) out[name] = md5;
  return out;
}

TEST(ParseMsg, SingleField) {
  MsgSpec spec = parse_msg("int32 data", "std_msgs", "Int32");
  ASSERT_EQ(spec.fields.size(), 1u);
  EXPECT_EQ(spec.fields[0].name, "data");
  EXPECT_TRUE(spec.fields[0].type.is_builtin());
  EXPECT_EQ(spec.fields[0].type.builtin(), Builtin::kInt32);
  EXPECT_EQ(spec.fields[0].arity, Arity::kScalar);
  EXPECT_EQ(spec.full_name(), "std_msgs/Int32");
}

TEST(ParseMsg, VarArray) {
  MsgSpec spec = parse_msg("uint8[] data", "std_msgs", "UInt8Array");
  ASSERT_EQ(spec.fields.size(), 1u);
  EXPECT_EQ(spec.fields[0].arity, Arity::kVarArray);
  EXPECT_EQ(spec.fields[0].type.builtin(), Builtin::kUInt8);
}

TEST(ParseMsg, FixedArray) {
  MsgSpec spec = parse_msg("float64[36] covariance", "geometry_msgs", "X");
  EXPECT_EQ(spec.fields[0].arity, Arity::kFixedArray);
  EXPECT_EQ(spec.fields[0].array_size, 36u);
  EXPECT_EQ(spec.fields[0].declaration(), "float64[36] covariance");
}

TEST(ParseMsg, NumericConstantWithComment) {
  MsgSpec spec = parse_msg("int32 X=-123 # comment", "pkg", "C");
  EXPECT_TRUE(spec.fields.empty());
  ASSERT_EQ(spec.constants.size(), 1u);
  EXPECT_EQ(spec.constants[0].name, "X");
  EXPECT_EQ(spec.constants[0].value_text, "-123");
  EXPECT_EQ(std::get<std::int64_t>(spec.constants[0].value), -123);
}

TEST(ParseMsg, StringConstantKeepsHashAndInnerWhitespace) {
  MsgSpec spec = parse_msg("string GREETING =  hello  # world  ", "pkg", "C");
  ASSERT_EQ(spec.constants.size(), 1u);
  EXPECT_EQ(spec.constants[0].value_text, "hello  # world");
  EXPECT_EQ(std::get<std::string>(spec.constants[0].value), "hello  # world");
}

TEST(ParseMsg, SpacedConstant) {
  MsgSpec spec = parse_msg("uint8 TYPE_LED    = 0\nuint8 type", "sensor_msgs", "JoyFeedback");
  ASSERT_EQ(spec.constants.size(), 1u);
  EXPECT_EQ(spec.constants[0].name, "TYPE_LED");
  EXPECT_EQ(spec.constants[0].value_text, "0");
  EXPECT_EQ(spec.fields.size(), 1u);
}

TEST(ParseMsg, ByteAndCharAliases) {
  MsgSpec spec = parse_msg("byte a\nchar b", "pkg", "M");
  EXPECT_EQ(spec.fields[0].type.builtin(), Builtin::kInt8);
  EXPECT_EQ(spec.fields[0].type.spelling(), "byte");
  EXPECT_EQ(spec.fields[1].type.builtin(), Builtin::kUInt8);
  EXPECT_EQ(spec.fields[1].type.spelling(), "char");
}

TEST(ParseMsg, HeaderAndPackageResolution) {
  MsgSpec spec = parse_msg("Header header\nPose pose\nstd_msgs/Header h2\nother/Thing t", "geometry_msgs", "X");
  EXPECT_EQ(spec.fields[0].type.named().full_name(), "std_msgs/Header");
  EXPECT_EQ(spec.fields[1].type.named().full_name(), "geometry_msgs/Pose");
  EXPECT_EQ(spec.fields[2].type, spec.fields[0].type);
  EXPECT_EQ(spec.fields[3].type.named().full_name(), "other/Thing");
}

TEST(ParseMsg, SourceTextPreserved) {
  std::string text = "# leading comment\n\nint32 a  # trailing\n\n";
  EXPECT_EQ(parse_msg(text, "p", "M").source_text, text);
}

TEST(ParseMsg, SyntaxErrorsCarryLine) {
  try {
    parse_msg("int32 a\nint32\n", "p", "M");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(parse_msg("int32 a b", "p", "M"), SyntaxError);
  EXPECT_THROW(parse_msg("int32[0] a", "p", "M"), SyntaxError);
  EXPECT_THROW(parse_msg("int32[x] a", "p", "M"), SyntaxError);
  EXPECT_THROW(parse_msg("int32 1a", "p", "M"), SyntaxError);
  EXPECT_THROW(parse_msg("int32 a\nfloat64 a", "p", "M"), SyntaxError);
  EXPECT_THROW(parse_msg("time T=1", "p", "M"), SyntaxError);
  EXPECT_THROW(parse_msg("Pose P=1", "p", "M"), SyntaxError);
  EXPECT_THROW(parse_msg("bad-pkg/Type x", "p", "M"), SyntaxError);
  EXPECT_THROW(parse_msg("int32 X=abc", "p", "M"), SyntaxError);
}

TEST(ParseMsg, RangeErrors) {
  EXPECT_THROW(parse_msg("uint8 X=256", "p", "M"), RangeError);
  EXPECT_THROW(parse_msg("int8 X=-129", "p", "M"), RangeError);
  EXPECT_THROW(parse_msg("uint32 X=-1", "p", "M"), RangeError);
  EXPECT_THROW(parse_msg("int64 X=9223372036854775808", "p", "M"), RangeError);
  EXPECT_NO_THROW(parse_msg("int64 X=-9223372036854775808", "p", "M"));
  EXPECT_NO_THROW(parse_msg("uint64 X=18446744073709551615", "p", "M"));
  EXPECT_NO_THROW(parse_msg("uint8 X=-0", "p", "M"));
}

TEST(ParseSrv, SplitsRequestAndResponse) {
  SrvSpec srv = parse_srv("int64 a\nint64 b\n---\nint64 sum\n", "roscpp_tutorials", "TwoInts");
  EXPECT_EQ(srv.request.fields.size(), 2u);
  EXPECT_EQ(srv.response.fields.size(), 1u);
  EXPECT_EQ(srv.request.full_name(), "roscpp_tutorials/TwoIntsRequest");
  EXPECT_THROW(parse_srv("int64 a", "p", "S"), SyntaxError);
}

TEST(Md5, Int32HashesItsFieldLine) {
  SchemaRegistry empty;
  MsgSpec spec = parse_msg("int32 data", "std_msgs", "Int32");
  EXPECT_EQ(md5_text(spec, empty), "int32 data");
  EXPECT_EQ(compute_md5(spec, empty), util::md5_hex(std::string_view("int32 data")));
}

TEST(Md5, EmptyService) {
  SrvSpec srv = parse_srv("---\n", "std_srvs", "Empty");
  EXPECT_EQ(compute_srv_md5(srv, SchemaRegistry()), "d41d8cd98f00b204e9800998ecf8427e");
}

TEST(Md5, ConstantsPrecedeFields) {
  MsgSpec spec = parse_msg("uint8 a\nuint8 K = 3 # c\nstring S=x y", "p", "M");
  EXPECT_EQ(md5_text(spec, SchemaRegistry()), "uint8 K=3\nstring S=x y\nuint8 a");
}

TEST(Md5, NamedArraysDropSuffix) {
  auto reg = SchemaRegistry::Builder().add_builtin_corpus().build();
  MsgSpec spec = parse_msg("geometry_msgs/Vector3[] v\nfloat32[3] f", "p", "M");
  EXPECT_EQ(md5_text(spec, reg), "4a842b65f413084dc2b10fb484ea7f17 v\nfloat32[3] f");
}

TEST(Md5, GoldenCorpusFromFiles) {
  auto golden = load_golden();
  ASSERT_GE(golden.size(), 15u);
  auto reg = SchemaRegistry::Builder().add_root(ROSLITE_CORPUS_DIR).build();
  for (const auto& [name, md5] : golden) {
    if (const auto* srv = reg.find_service(name)) {
      EXPECT_EQ(compute_srv_md5(*srv, reg), md5) << name;
    } else {
      EXPECT_EQ(compute_md5(name, reg), md5) << name;
    }
  }
}

TEST(Md5, GoldenCorpusEmbedded) {
  auto golden = load_golden();
  const auto& reg = builtin_corpus();
  for (const auto& [name, md5] : golden) {
    if (const auto* srv = reg.find_service(name)) {
      EXPECT_EQ(compute_srv_md5(*srv, reg), md5) << name;
    } else {
      ASSERT_NE(reg.find(name), nullptr) << name;
      EXPECT_EQ(compute_md5(reg.at(name), reg), md5) << name;
    }
  }
}

TEST(Md5, UnresolvedAndCyclic) {
  auto reg = SchemaRegistry::Builder()
                 .add(parse_msg("B b", "p", "A"))
                 .add(parse_msg("A a", "p", "B"))
                 .add(parse_msg("Missing m", "p", "C"))
                 .build();
  EXPECT_THROW(compute_md5("p/A", reg), CyclicDependency);
  try {
    compute_md5("p/C", reg);
    FAIL();
  } catch (const UnresolvedType& e) {
    EXPECT_EQ(e.full_name(), "p/Missing");
  }
  EXPECT_THROW(dependency_text(reg.at("p/A"), reg), CyclicDependency);
}

TEST(DependencyText, NoDependenciesIsSourceText) {
  const auto& reg = builtin_corpus();
  const auto& spec = reg.at("std_msgs/String");
  EXPECT_EQ(dependency_text(spec, reg), spec.source_text);
}

TEST(DependencyText, TwistStampedBlocks) {
  const auto& reg = builtin_corpus();
  const auto& spec = reg.at("geometry_msgs/TwistStamped");
  EXPECT_EQ(dependency_order(spec, reg),
            (std::vector<std::string>{"std_msgs/Header", "geometry_msgs/Twist", "geometry_msgs/Vector3"}));
  std::string text = dependency_text(spec, reg);
  auto count = [&](std::string_view needle) {
    size_t n = 0;
    for (size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
  };
  EXPECT_EQ(count("MSG: std_msgs/Header\n"), 1u);
  EXPECT_EQ(count("MSG: geometry_msgs/Twist\n"), 1u);
  EXPECT_EQ(count("MSG: geometry_msgs/Vector3\n"), 1u);
  EXPECT_EQ(count(std::string(80, '=') + "\n"), 3u);
  EXPECT_TRUE(text.starts_with(spec.source_text));
}

TEST(DependencyText, OdometryDepthFirstOrder) {
  const auto& reg = builtin_corpus();
  EXPECT_EQ(dependency_order(reg.at("nav_msgs/Odometry"), reg),
            (std::vector<std::string>{"std_msgs/Header", "geometry_msgs/PoseWithCovariance", "geometry_msgs/Pose",
                                      "geometry_msgs/Point", "geometry_msgs/Quaternion",
                                      "geometry_msgs/TwistWithCovariance", "geometry_msgs/Twist",
                                      "geometry_msgs/Vector3"}));
}

TEST(DependencyText, RepeatedTypeEmittedOnce) {
  auto reg = SchemaRegistry::Builder().add_builtin_corpus().add(parse_msg("Header a\nHeader b", "p", "Two")).build();
  auto order = dependency_order(reg.at("p/Two"), reg);
  EXPECT_EQ(order, std::vector<std::string>{"std_msgs/Header"});
}

TEST(DefinitionBundle, RoundTripsEveryCorpusType) {
  const auto& reg = builtin_corpus();
  for (const auto& name : reg.message_names()) {
    const auto& spec = reg.at(name);
    auto bundle = parse_definition_bundle(dependency_text(spec, reg), name);
    EXPECT_EQ(bundle.size(), dependency_order(spec, reg).size() + 1) << name;
    EXPECT_EQ(compute_md5(name, bundle), compute_md5(spec, reg)) << name;
  }
}

TEST(DefinitionBundle, SingleBlockGivesTwoEntries) {
  std::string text = "Header header\n" + std::string(80, '=') + "\nMSG: std_msgs/Header\nuint32 seq\ntime stamp\nstring frame_id";
  auto bundle = parse_definition_bundle(text, "p/Stamped");
  EXPECT_EQ(bundle.size(), 2u);
  EXPECT_EQ(compute_md5("std_msgs/Header", bundle), "2176decaecbce78abc3b96ef049fabed");
}

TEST(DefinitionBundle, RejectsBlockWithoutMsgLine) {
  std::string text = "int32 a\n" + std::string(80, '=') + "\nint32 b";
  EXPECT_THROW(parse_definition_bundle(text, "p/X"), SyntaxError);
}

// The parser must either produce a spec or a typed error for any input.
TEST(ParseMsg, TotalOnRandomBytes) {
  std::mt19937_64 rng(42);
  const std::string alphabet = "int32uint8float64string[]=#/ \n\tHeaderabcXYZ0123456789-_.\x01\xff";
  for (int iter = 0; iter < 20000; ++iter) {
    std::string text;
    std::size_t len = rng() % 200;
    for (std::size_t i = 0; i < len; ++i) {
      text += (rng() % 8 == 0) ? static_cast<char>(rng()) : alphabet[rng() % alphabet.size()];
    }
    try {
      parse_msg(text, "p", "M");
    } catch (const SyntaxError&) {
    } catch (const RangeError&) {
    }
  }
}

}  // namespace
}  // namespace roslite::msg

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

#include <Eigen/Geometry>
#include <cmath>
#include <fstream>
#include "json.hpp"
#include <random>
#include <sstream>
#include <thread>

#include "roslite/node/master.h"
#include "roslite/serde/codec.h"
#include "roslite/tf/frame_tree.h"
#include "roslite/tf/listener.h"
#include "roslite/tf/urdf.h"

namespace roslite::tf {
namespace {

using namespace std::chrono_literals;
using Mat4 = Eigen::Matrix4d;
using serde::DynamicValue;

constexpr double kTol = 1e-9;

Mat4 to_eigen(const Transform& t) {
  Mat4 m = Mat4::Identity();
  Eigen::Quaterniond q(t.rotation.w, t.rotation.x, t.rotation.y, t.rotation.z);
  m.block<3, 3>(0, 0) = q.normalized().toRotationMatrix();
  m.block<3, 1>(0, 3) = Eigen::Vector3d(t.translation.x, t.translation.y, t.translation.z);
  return m;
}

Mat4 rpy_eigen(double r, double p, double y, const Eigen::Vector3d& xyz) {
  Mat4 m = Mat4::Identity();
  m.block<3, 3>(0, 0) = (Eigen::AngleAxisd(y, Eigen::Vector3d::UnitZ()) * Eigen::AngleAxisd(p, Eigen::Vector3d::UnitY()) *
                         Eigen::AngleAxisd(r, Eigen::Vector3d::UnitX()))
                            .toRotationMatrix();
  m.block<3, 1>(0, 3) = xyz;
  return m;
}

double max_diff(const Mat4& a, const Mat4& b) { return (a - b).cwiseAbs().maxCoeff(); }

Transform random_transform(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2), ang(-M_PI, M_PI);
  return Transform{{u(rng), u(rng), u(rng)}, Quat::from_rpy(ang(rng), ang(rng), ang(rng))};
}

TEST(TransformMath, QuarterTurnsLockRpyConvention) {
  Vec3 v = Quat::from_rpy(0, 0, M_PI / 2).rotate({1, 0, 0});
  EXPECT_NEAR(v.x, 0, kTol);
  EXPECT_NEAR(v.y, 1, kTol);
  v = Quat::from_rpy(M_PI / 2, 0, 0).rotate({0, 1, 0});
  EXPECT_NEAR(v.z, 1, kTol);
  v = Quat::from_rpy(0, M_PI / 2, 0).rotate({0, 0, 1});
  EXPECT_NEAR(v.x, 1, kTol);
  // Roll then yaw about fixed axes: x-axis ends up along +y.
  v = Quat::from_rpy(M_PI / 2, 0, M_PI / 2).rotate({0, 1, 0});
  EXPECT_NEAR(v.z, 1, kTol);
}

TEST(TransformMath, RpyMatchesEigenExtrinsicXyz) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  for (int i = 0; i < 1000; ++i) {
    double r = ang(rng), p = ang(rng), y = ang(rng);
    Transform t{{0.1, -0.2, 0.3}, Quat::from_rpy(r, p, y)};
    ASSERT_LT(max_diff(to_eigen(t), rpy_eigen(r, p, y, {0.1, -0.2, 0.3})), kTol);
  }
}

TEST(TransformMath, QuaternionNormHeldOverLongChains) {
  std::mt19937_64 rng(11);
  Transform acc = Transform::identity();
  for (int i = 0; i < 100000; ++i) {
    acc = acc * random_transform(rng);
    ASSERT_NEAR(acc.rotation.norm(), 1.0, kTol);
  }
  Transform t = random_transform(rng);
  Mat4 round = to_eigen(t * t.inverse());
  EXPECT_LT(max_diff(round, Mat4::Identity()), kTol);
}

TEST(FrameTreeTest, BuildReparentAndCycles) {
  FrameTree tree;
  tree.set("base", "map", Transform{{1, 0, 0}, {}});
  tree.set("laser", "base", Transform{{0, 0, 0.5}, {}});
  EXPECT_EQ(tree.size(), 3u);
  tree.set("laser", "map", Transform{{0, 3, 0}, {}});
  EXPECT_EQ(tree.entry("laser")->parent, "map");
  EXPECT_THROW(tree.set("map", "base", Transform{}), CycleRejected);
  EXPECT_THROW(tree.set("map", "map", Transform{}), CycleRejected);
  EXPECT_EQ(tree.cycles_rejected(), 2u);
  EXPECT_FALSE(tree.entry("map").has_value());
  // tf2 style frame ids with a leading slash name the same frame.
  EXPECT_TRUE(tree.has_frame("/base"));
}

TEST(FrameTreeTest, LookupExamples) {
  FrameTree tree;
  tree.set("B", "A", Transform{{1, 0, 0}, {}});
  tree.set("C", "B", Transform{{0, 2, 0}, {}});
  Transform t = tree.lookup("A", "C");
  EXPECT_NEAR(t.translation.x, 1, kTol);
  EXPECT_NEAR(t.translation.y, 2, kTol);
  EXPECT_NEAR(t.translation.z, 0, kTol);
  EXPECT_EQ(tree.lookup("A", "A"), Transform::identity());
  Transform back = tree.lookup("C", "A");
  EXPECT_NEAR(back.translation.x, -1, kTol);
  tree.set("Y", "X", Transform{});
  EXPECT_THROW(tree.lookup("A", "Y"), FramesDisconnected);
  EXPECT_THROW(tree.lookup("A", "nowhere"), UnknownFrame);
}

TEST(FrameTreeTest, RandomTreesMatchMatrixOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    FrameTree tree;
    std::vector<Mat4> world(10);
    world[0] = Mat4::Identity();
    for (int i = 1; i < 10; ++i) {
      int parent = std::uniform_int_distribution<int>(0, i - 1)(rng);
      Transform t = random_transform(rng);
      tree.set("f" + std::to_string(i), "f" + std::to_string(parent), t);
      world[i] = world[parent] * to_eigen(t);
    }
    int a = std::uniform_int_distribution<int>(0, 9)(rng);
    int b = std::uniform_int_distribution<int>(0, 9)(rng);
    std::string fa = "f" + std::to_string(a), fb = "f" + std::to_string(b);
    Transform ab = tree.lookup(fa, fb);
    ASSERT_LT(max_diff(to_eigen(ab), world[a].inverse() * world[b]), kTol) << trial;
    ASSERT_LT(max_diff(to_eigen(ab * tree.lookup(fb, fa)), Mat4::Identity()), kTol);
  }
}

TEST(FrameTreeTest, AcyclicAfterArbitraryIngest) {
  std::mt19937_64 rng(5);
  FrameTree tree;
  std::uniform_int_distribution<int> pick(0, 14);
  for (int i = 0; i < 20000; ++i) {
    std::string c = "n" + std::to_string(pick(rng)), p = "n" + std::to_string(pick(rng));
    try {
      tree.set(c, p, Transform{});
    } catch (const CycleRejected&) {
    }
  }
  EXPECT_GT(tree.cycles_rejected(), 0u);
  for (const auto& f : tree.frames()) {
    std::string cur = f;
    int steps = 0;
    while (auto e = tree.entry(cur)) {
      cur = e->parent;
      ASSERT_LT(++steps, 20) << "cycle through " << f;
    }
  }
}

DynamicValue stamped(const std::string& parent, const std::string& child, Vec3 t, Quat q) {
  return DynamicValue::record(
      {{"header", DynamicValue::record({{"seq", std::uint32_t{0}}, {"stamp", serde::Time{1, 2}}, {"frame_id", parent}})},
       {"child_frame_id", child},
       {"transform",
        DynamicValue::record({{"translation", DynamicValue::record({{"x", t.x}, {"y", t.y}, {"z", t.z}})},
                              {"rotation", DynamicValue::record({{"x", q.x}, {"y", q.y}, {"z", q.z}, {"w", q.w}})}})}});
}

TEST(FrameTreeTest, IngestTfMessage) {
  const auto& reg = msg::builtin_corpus();
  const msg::MsgSpec& spec = reg.at("tf2_msgs/TFMessage");
  DynamicValue m = DynamicValue::record(
      {{"transforms", DynamicValue::seq({stamped("map", "base", {1, 0, 0}, {0, 0, 0, 2}),
                                         stamped("base", "map", {0, 0, 0}, {0, 0, 0, 1})})}});
  // Round trip through the wire to use the decoder's value shapes.
  DynamicValue decoded = serde::deserialize(spec, serde::serialize(spec, m, reg), reg);
  FrameTree tree;
  IngestResult r = tree.ingest(decoded, true);
  EXPECT_EQ(r.accepted, 1u);
  EXPECT_EQ(r.rejected, 1u);
  auto e = tree.entry("base");
  ASSERT_TRUE(e.has_value());
  EXPECT_TRUE(e->is_static);
  EXPECT_NEAR(e->transform.rotation.norm(), 1.0, kTol);
  EXPECT_EQ(e->stamp, (serde::Time{1, 2}));
  EXPECT_THROW(tree.ingest(DynamicValue::record({{"nope", 1.0}}), false), serde::SchemaMismatch);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Urdf, MinimalAndSimpleJoint) {
  RobotModel one = parse_urdf(R"(<robot name="r"><link name="only"/></robot>)");
  EXPECT_EQ(one.links.size(), 1u);
  EXPECT_TRUE(one.joints.empty());
  EXPECT_EQ(one.root, "only");

  RobotModel two = parse_urdf(R"(<?xml version="1.0"?>
<robot name="arm">
  <link name="base"><visual><geometry><box size="1 2 3"/></geometry>
    <material name="red"><color rgba="1 0 0 1"/></material></visual></link>
  <link name="tip"><visual><origin xyz="0 0 0.5"/><geometry><cylinder radius="0.1" length="1"/></geometry>
    <material name="red"/></visual></link>
  <joint name="j" type="revolute"><parent link="base"/><child link="tip"/>
    <origin xyz="0 0 1" rpy="0 0 0"/><axis xyz="0 0 2"/><limit lower="-1" upper="1" effort="1" velocity="1"/></joint>
</robot>)");
  EXPECT_EQ(two.root, "base");
  const Joint& j = two.joints.at("j");
  EXPECT_EQ(j.kind, JointKind::kRevolute);
  EXPECT_NEAR(j.axis.z, 1.0, kTol);
  EXPECT_EQ(j.limits->second, 1.0);
  EXPECT_EQ(j.origin.translation.z, 1.0);
  ASSERT_EQ(two.links.at("tip").visuals.size(), 1u);
  EXPECT_EQ(two.links.at("tip").visuals[0].color, (Rgba{1, 0, 0, 1}));
  EXPECT_TRUE(std::holds_alternative<Box>(two.links.at("base").visuals[0].geometry));
}

TEST(Urdf, DefaultsAndWarnings) {
  RobotModel m = parse_urdf(R"(<robot name="r"><link name="a"/><link name="b"/><link name="c"/>
    <joint name="p" type="planar"><parent link="a"/><child link="b"/></joint>
    <joint name="q" type="continuous"><parent link="b"/><child link="c"/></joint></robot>)");
  EXPECT_EQ(m.joints.at("p").kind, JointKind::kFixed);
  EXPECT_EQ(m.warnings.size(), 1u);
  EXPECT_EQ(m.joints.at("q").axis, (Vec3{1, 0, 0}));
  EXPECT_EQ(m.joints.at("q").origin, Transform::identity());
  EXPECT_EQ(m.movable_joints(), std::vector<std::string>{"q"});
}

TEST(Urdf, Errors) {
  EXPECT_THROW(parse_urdf("<robot><link name='a'>"), XmlSyntaxError);
  EXPECT_THROW(parse_urdf("<robot name='r'><link name='a'/><link name='b'/></robot>"), MultipleRoots);
  EXPECT_THROW(parse_urdf(R"(<robot><link name="a"/><link name="b"/><link name="c"/>
    <joint name="1" type="fixed"><parent link="a"/><child link="c"/></joint>
    <joint name="2" type="fixed"><parent link="b"/><child link="c"/></joint></robot>)"),
               JointGraphNotTree);
  EXPECT_THROW(parse_urdf(R"(<robot><link name="r"/><link name="a"/><link name="b"/>
    <joint name="1" type="fixed"><parent link="a"/><child link="b"/></joint>
    <joint name="2" type="fixed"><parent link="b"/><child link="a"/></joint></robot>)"),
               JointGraphNotTree);
  EXPECT_THROW(parse_urdf(R"(<robot><link name="a"/>
    <joint name="1" type="fixed"><parent link="a"/><child link="zz"/></joint></robot>)"),
               JointGraphNotTree);
  EXPECT_THROW(parse_urdf("<robot><link name='a'><visual><origin xyz='1 2'/><geometry><sphere radius='1'/></geometry>"
                          "</visual></link></robot>"),
               UrdfError);
}

TEST(Urdf, ReferenceRobotsMatchReferenceParser) {
  for (std::string name : {"panda", "r2d2", "kuka_iiwa"}) {
    SCOPED_TRACE(name);
    std::string dir = std::string(ROSLITE_TEST_DATA_DIR) + "/urdf/";
    RobotModel m = parse_urdf(read_file(dir + name + ".urdf"));
    auto golden = nlohmann::json::parse(read_file(dir + name + ".golden.json"));
    EXPECT_EQ(m.name, golden["name"]);
    EXPECT_EQ(m.root, golden["root"]);
    EXPECT_EQ(m.links.size(), golden["link_count"].get<std::size_t>());
    EXPECT_EQ(m.joints.size(), golden["joint_count"].get<std::size_t>());
    for (const auto& gj : golden["joints"]) {
      const Joint& j = m.joints.at(gj["name"]);
      EXPECT_EQ(joint_kind_name(j.kind), gj["type"].get<std::string>());
      EXPECT_EQ(j.parent, gj["parent"]);
      EXPECT_EQ(j.child, gj["child"]);
      if (gj.contains("lower")) {
        ASSERT_TRUE(j.limits.has_value());
        EXPECT_EQ(j.limits->first, gj["lower"].get<double>());
        EXPECT_EQ(j.limits->second, gj["upper"].get<double>());
      }
    }
    for (const auto& c : golden["fk"]) {
      JointConfiguration config = c["config"].get<JointConfiguration>();
      FkStats stats;
      auto poses = forward_kinematics(m, config, &stats);
      EXPECT_EQ(stats.clamped, 0u);
      for (const auto& [link, flat] : c["poses"].items()) {
        auto v = flat.get<std::vector<double>>();
        Mat4 expect = Eigen::Map<const Eigen::Matrix<double, 4, 4, Eigen::RowMajor>>(v.data());
        ASSERT_LT(max_diff(to_eigen(poses.at(link)), expect), kTol) << link;
      }
    }
  }
}

TEST(Kinematics, ZeroConfigAndQuarterTurn) {
  RobotModel m = parse_urdf(R"(<robot><link name="base"/><link name="arm"/><link name="tip"/>
    <joint name="shoulder" type="revolute"><parent link="base"/><child link="arm"/><axis xyz="0 0 1"/>
      <limit lower="-3" upper="3"/></joint>
    <joint name="offset" type="fixed"><parent link="arm"/><child link="tip"/><origin xyz="1 0 0"/></joint></robot>)");
  auto zero = forward_kinematics(m, {});
  EXPECT_NEAR(zero.at("tip").translation.x, 1, kTol);
  auto turned = forward_kinematics(m, {{"shoulder", M_PI / 2}});
  EXPECT_NEAR(turned.at("tip").translation.x, 0, kTol);
  EXPECT_NEAR(turned.at("tip").translation.y, 1, kTol);
  EXPECT_EQ(turned.at("base"), Transform::identity());
  FkStats stats;
  auto clamped = forward_kinematics(m, {{"shoulder", 10.0}, {"ghost", 1.0}}, &stats);
  EXPECT_EQ(stats.clamped, 1u);
  EXPECT_EQ(stats.unknown_joints, 1u);
  EXPECT_NEAR(clamped.at("tip").translation.x, std::cos(3.0), kTol);
}

// Random URDF text with <= 10 joints, evaluated by an Eigen composition.
TEST(Kinematics, RandomModelsMatchMatrixOracle) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5), ang(-M_PI, M_PI);
  const char* kinds[] = {"fixed", "revolute", "continuous", "prismatic"};
  for (int trial = 0; trial < 1000; ++trial) {
    int joints = std::uniform_int_distribution<int>(1, 10)(rng);
    std::ostringstream doc;
    doc.precision(17);
    doc << "<robot name='r'><link name='l0'/>";
    std::vector<int> parent(joints + 1);
    std::vector<Mat4> origin(joints + 1);
    std::vector<Eigen::Vector3d> axis(joints + 1);
    std::vector<std::string> kind(joints + 1);
    std::vector<double> value(joints + 1);
    for (int i = 1; i <= joints; ++i) {
      parent[i] = std::uniform_int_distribution<int>(0, i - 1)(rng);
      kind[i] = kinds[std::uniform_int_distribution<int>(0, 3)(rng)];
      double x = u(rng), y = u(rng), z = u(rng), r = ang(rng), p = ang(rng), w = ang(rng);
      Eigen::Vector3d a(u(rng), u(rng), u(rng));
      if (a.norm() < 1e-3) a = Eigen::Vector3d::UnitZ();
      axis[i] = a.normalized();
      origin[i] = rpy_eigen(r, p, w, {x, y, z});
      value[i] = ang(rng);
      doc << "<link name='l" << i << "'/><joint name='j" << i << "' type='" << kind[i] << "'><parent link='l"
          << parent[i] << "'/><child link='l" << i << "'/><origin xyz='" << x << " " << y << " " << z << "' rpy='"
          << r << " " << p << " " << w << "'/><axis xyz='" << a.x() << " " << a.y() << " " << a.z() << "'/>";
      if (kind[i] == "revolute" || kind[i] == "prismatic") doc << "<limit lower='-4' upper='4'/>";
      doc << "</joint>";
    }
    doc << "</robot>";
    RobotModel m = parse_urdf(doc.str());
    JointConfiguration config;
    for (int i = 1; i <= joints; ++i) config["j" + std::to_string(i)] = value[i];
    auto poses = forward_kinematics(m, config);
    std::vector<Mat4> world(joints + 1);
    world[0] = Mat4::Identity();
    for (int i = 1; i <= joints; ++i) {
      Mat4 motion = Mat4::Identity();
      if (kind[i] == "revolute" || kind[i] == "continuous") {
        motion.block<3, 3>(0, 0) = Eigen::AngleAxisd(value[i], axis[i]).toRotationMatrix();
      } else if (kind[i] == "prismatic") {
        motion.block<3, 1>(0, 3) = value[i] * axis[i];
      }
      world[i] = world[parent[i]] * origin[i] * motion;
      ASSERT_LT(max_diff(to_eigen(poses.at("l" + std::to_string(i))), world[i]), kTol) << trial << " link " << i;
    }
  }
}

TEST(Kinematics, JointStateApply) {
  RobotModel m = parse_urdf(R"(<robot><link name="a"/><link name="b"/>
    <joint name="j1" type="continuous"><parent link="a"/><child link="b"/></joint></robot>)");
  DynamicValue js = DynamicValue::record(
      {{"name", DynamicValue::seq({"j1", "extra"})}, {"position", std::vector<double>{0.5, 1.0, 7.0}}});
  FkStats stats;
  EXPECT_EQ(joint_state_apply(m, js, &stats), (JointConfiguration{{"j1", 0.5}}));
  EXPECT_EQ(stats.unknown_joints, 1u);
  DynamicValue empty = DynamicValue::record({{"name", DynamicValue::seq()}, {"position", std::vector<double>{}}});
  EXPECT_TRUE(joint_state_apply(m, empty).empty());
  EXPECT_THROW(joint_state_apply(m, DynamicValue::record({{"data", "x"}})), serde::SchemaMismatch);
  EXPECT_THROW(joint_state_apply(m, DynamicValue(1.0)), serde::SchemaMismatch);
}

template <typename Pred>
bool eventually(Pred pred) {
  for (int i = 0; i < 500 && !pred(); ++i) std::this_thread::sleep_for(10ms);
  return pred();
}

TEST(Listener, TfAndRobotTrackerOverTheGraph) {
  node::Master master;
  master.start("127.0.0.1", 0, "127.0.0.1");
  node::NodeConfig c;
  c.master_uri = master.uri();
  c.advertised_host = "127.0.0.1";
  c.bind_address = "127.0.0.1";
  c.name = "/robot_publisher";
  auto pub_node = node::Node::start(c);
  c.name = "/viewer";
  auto viewer = node::Node::start(c);

  auto tf_static = pub_node->advertise("/tf_static", "tf2_msgs/TFMessage", true);
  tf_static->publish(DynamicValue::record({{"transforms", DynamicValue::seq({stamped("map", "base", {1, 2, 3}, {})})}}));
  TfListener listener(viewer);
  ASSERT_TRUE(eventually([&] { return listener.tree()->has_frame("base"); }));
  EXPECT_NEAR(listener.tree()->lookup("map", "base").translation.y, 2, kTol);

  pub_node->param_set("/robot_description", xmlrpc::XrValue(R"(<robot name="r"><link name="a"/><link name="b"/>
    <joint name="j1" type="prismatic"><parent link="a"/><child link="b"/><axis xyz="0 1 0"/>
    <limit lower="0" upper="2"/></joint></robot>)"));
  RobotTracker tracker(viewer);
  auto js = pub_node->advertise("/joint_states", "sensor_msgs/JointState");
  ASSERT_TRUE(eventually([&] { return js->num_subscribers() == 1; }));
  DynamicValue msg = serde::default_value(msg::builtin_corpus().at("sensor_msgs/JointState"), msg::builtin_corpus());
  msg.set("name", DynamicValue::seq({"j1"}));
  msg.set("position", std::vector<double>{1.25});
  js->publish(msg);
  ASSERT_TRUE(eventually([&] { return tracker.joint_messages() == 1; }));
  EXPECT_NEAR(tracker.link_poses().at("b").translation.y, 1.25, kTol);
  viewer->shutdown();
  pub_node->shutdown();
}

}  // namespace
}  // namespace roslite::tf

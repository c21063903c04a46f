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

#ifndef ROSLITE_TF_URDF_H_
#define ROSLITE_TF_URDF_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "roslite/serde/dynamic_value.h"
#include "roslite/tf/transform.h"
#include "roslite/util/xml.h"

namespace roslite::tf {

using xml::XmlSyntaxError;

class UrdfError : public Error {
 public:
  using Error::Error;
};

class MultipleRoots : public UrdfError {
 public:
  using UrdfError::UrdfError;
};

class JointGraphNotTree : public UrdfError {
 public:
  using UrdfError::UrdfError;
};

struct Box {
  Vec3 size;
};
struct Cylinder {
  double radius = 0;
  double length = 0;
};
struct Sphere {
  double radius = 0;
};
struct Mesh {
  std::string uri;  // unresolved, e.g. package://pkg/meshes/a.stl
  Vec3 scale{1, 1, 1};
};
using Geometry = std::variant<Box, Cylinder, Sphere, Mesh>;

struct Rgba {
  float r = 1, g = 1, b = 1, a = 1;
  bool operator==(const Rgba&) const = default;
};

struct Visual {
  Geometry geometry;
  Transform origin;
  std::optional<Rgba> color;
  std::string material;
};

struct Link {
  std::string name;
  std::vector<Visual> visuals;
};

enum class JointKind { kFixed, kRevolute, kContinuous, kPrismatic };
std::string_view joint_kind_name(JointKind kind);

struct Joint {
  std::string name;
  JointKind kind = JointKind::kFixed;
  std::string parent;
  std::string child;
  Transform origin;
  Vec3 axis{1, 0, 0};
  std::optional<std::pair<double, double>> limits;  // lower, upper
  bool movable() const { return kind != JointKind::kFixed; }
};

struct RobotModel {
  std::string name;
  std::string root;
  std::map<std::string, Link> links;
  std::map<std::string, Joint> joints;
  // Joint names in parent-before-child order from the root.
  std::vector<std::string> joint_order;
  // Non-fatal parse notes: unsupported joint kinds, unknown materials.
  std::vector<std::string> warnings;

  const Joint* joint_for_child(const std::string& link) const;
  std::vector<std::string> movable_joints() const;
};

// Throws XmlSyntaxError, UrdfError (MultipleRoots, JointGraphNotTree).
RobotModel parse_urdf(std::string_view xml);

using JointConfiguration = std::map<std::string, double>;

struct FkStats {
  std::size_t clamped = 0;
  std::size_t unknown_joints = 0;
};

// Root-relative pose of every link. Unknown joint names are ignored and
// counted; revolute and prismatic values are clamped to their limits.
std::map<std::string, Transform> forward_kinematics(const RobotModel& model, const JointConfiguration& config,
                                                    FkStats* stats = nullptr);

// Motion of one joint at `value` (no origin).
Transform joint_motion(const Joint& joint, double value);

// Pairs name[i] with position[i] from a sensor_msgs/JointState value.
// Throws serde::SchemaMismatch for other shapes.
JointConfiguration joint_state_apply(const RobotModel& model, const serde::DynamicValue& joint_state,
                                     FkStats* stats = nullptr);

}  // namespace roslite::tf

#endif  // ROSLITE_TF_URDF_H_

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

#ifndef ROSLITE_TF_TRANSFORM_H_
#define ROSLITE_TF_TRANSFORM_H_

#include <array>
#include <string>

namespace roslite::tf {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const { return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x}; }
  double norm() const;
  Vec3 normalized() const;
  bool operator==(const Vec3&) const = default;
};

// Hamilton quaternion, (x, y, z, w) order as in geometry_msgs.
struct Quat {
  double x = 0, y = 0, z = 0, w = 1;

  static Quat identity() { return {}; }
  // Rotation of `angle` radians about `axis` (normalized internally).
  static Quat from_axis_angle(const Vec3& axis, double angle);
  // Fixed-axis roll/pitch/yaw: R = Rz(yaw) * Ry(pitch) * Rx(roll).
  static Quat from_rpy(double roll, double pitch, double yaw);

  Quat operator*(const Quat& o) const;
  Quat conjugate() const { return {-x, -y, -z, w}; }
  Vec3 rotate(const Vec3& v) const;
  double norm() const;
  // Unit quaternion; a zero quaternion becomes identity.
  Quat normalized() const;
  // Row-major 3x3.
  std::array<double, 9> matrix() const;
  bool operator==(const Quat&) const = default;
};

// Rigid transform: p_parent = rotation * p_child + translation.
struct Transform {
  Vec3 translation;
  Quat rotation;

  static Transform identity() { return {}; }
  // this * other, renormalized.
  Transform operator*(const Transform& other) const;
  Transform inverse() const;
  Vec3 apply(const Vec3& p) const { return rotation.rotate(p) + translation; }
  // Row-major 4x4 homogeneous matrix.
  std::array<double, 16> matrix() const;
  std::string debug_string() const;
  bool operator==(const Transform&) const = default;
};

}  // namespace roslite::tf

#endif  // ROSLITE_TF_TRANSFORM_H_

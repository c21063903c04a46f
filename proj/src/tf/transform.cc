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

#include "roslite/tf/transform.h"

#include <cmath>
#include <sstream>

namespace roslite::tf {

double Vec3::norm() const { return std::sqrt(dot(*this)); }

Vec3 Vec3::normalized() const {
  double n = norm();
  if (n == 0) return {1, 0, 0};
  return *this * (1.0 / n);
}

Quat Quat::from_axis_angle(const Vec3& axis, double angle) {
  Vec3 a = axis.normalized();
  double s = std::sin(angle / 2);
  return Quat{a.x * s, a.y * s, a.z * s, std::cos(angle / 2)};
}

Quat Quat::from_rpy(double roll, double pitch, double yaw) {
  double cr = std::cos(roll / 2), sr = std::sin(roll / 2);
  double cp = std::cos(pitch / 2), sp = std::sin(pitch / 2);
  double cy = std::cos(yaw / 2), sy = std::sin(yaw / 2);
  return Quat{sr * cp * cy - cr * sp * sy, cr * sp * cy + sr * cp * sy, cr * cp * sy - sr * sp * cy,
              cr * cp * cy + sr * sp * sy}
      .normalized();
}

Quat Quat::operator*(const Quat& o) const {
  return Quat{w * o.x + x * o.w + y * o.z - z * o.y, w * o.y - x * o.z + y * o.w + z * o.x,
              w * o.z + x * o.y - y * o.x + z * o.w, w * o.w - x * o.x - y * o.y - z * o.z};
}

Vec3 Quat::rotate(const Vec3& v) const {
  // v' = v + 2w(q x v) + 2 q x (q x v)
  Vec3 q{x, y, z};
  Vec3 t = q.cross(v) * 2.0;
  return v + t * w + q.cross(t);
}

double Quat::norm() const { return std::sqrt(x * x + y * y + z * z + w * w); }

Quat Quat::normalized() const {
  double n = norm();
  if (n == 0 || !std::isfinite(n)) return identity();
  return Quat{x / n, y / n, z / n, w / n};
}

std::array<double, 9> Quat::matrix() const {
  return {1 - 2 * (y * y + z * z), 2 * (x * y - z * w),     2 * (x * z + y * w),
          2 * (x * y + z * w),     1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
          2 * (x * z - y * w),     2 * (y * z + x * w),     1 - 2 * (x * x + y * y)};
}

Transform Transform::operator*(const Transform& other) const {
  return Transform{apply(other.translation), (rotation * other.rotation).normalized()};
}

Transform Transform::inverse() const {
  Quat inv = rotation.conjugate();
  return Transform{inv.rotate(translation) * -1.0, inv};
}

std::array<double, 16> Transform::matrix() const {
  auto r = rotation.matrix();
  return {r[0], r[1], r[2], translation.x, r[3], r[4], r[5], translation.y,
          r[6], r[7], r[8], translation.z, 0,    0,    0,    1};
}

std::string Transform::debug_string() const {
  std::ostringstream out;
  out.precision(17);
  out << "t=(" << translation.x << ", " << translation.y << ", " << translation.z << ") q=(" << rotation.x << ", "
      << rotation.y << ", " << rotation.z << ", " << rotation.w << ")";
  return out.str();
}

}  // namespace roslite::tf

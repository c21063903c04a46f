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

#include "roslite/tf/urdf.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <set>

#include "roslite/serde/codec.h"
#include "roslite/util/strings.h"

namespace roslite::tf {

std::string_view joint_kind_name(JointKind kind) {
  switch (kind) {
    case JointKind::kFixed:
      return "fixed";
    case JointKind::kRevolute:
      return "revolute";
    case JointKind::kContinuous:
      return "continuous";
    case JointKind::kPrismatic:
      return "prismatic";
  }
  return "?";
}

const Joint* RobotModel::joint_for_child(const std::string& link) const {
  for (const auto& [_, j] : joints) {
    if (j.child == link) return &j;
  }
  return nullptr;
}

std::vector<std::string> RobotModel::movable_joints() const {
  std::vector<std::string> out;
  for (const auto& name : joint_order) {
    if (joints.at(name).movable()) out.push_back(name);
  }
  return out;
}

namespace {

using util::split_whitespace;
using util::trim;

double parse_number(std::string_view s, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw UrdfError("bad number '" + std::string(s) + "' in " + std::string(what));
  }
  return v;
}

std::vector<double> parse_numbers(std::string_view s, std::size_t count, std::string_view what) {
  std::vector<double> out;
  for (auto part : split_whitespace(s)) out.push_back(parse_number(part, what));
  if (out.size() != count) {
    throw UrdfError(std::string(what) + " needs " + std::to_string(count) + " numbers, got '" + std::string(s) + "'");
  }
  return out;
}

Vec3 parse_vec3(std::string_view s, std::string_view what) {
  auto v = parse_numbers(s, 3, what);
  return {v[0], v[1], v[2]};
}

Transform parse_origin(const xml::Element* origin) {
  Transform t;
  if (!origin) return t;
  if (const auto* xyz = origin->attr("xyz")) t.translation = parse_vec3(*xyz, "origin xyz");
  if (const auto* rpy = origin->attr("rpy")) {
    Vec3 a = parse_vec3(*rpy, "origin rpy");
    t.rotation = Quat::from_rpy(a.x, a.y, a.z);
  }
  return t;
}

const std::string& required_attr(const xml::Element& e, std::string_view key) {
  const std::string* v = e.attr(key);
  if (!v) throw UrdfError("<" + e.name + "> is missing attribute '" + std::string(key) + "'");
  return *v;
}

std::optional<Rgba> parse_color(const xml::Element& material) {
  const xml::Element* color = material.child("color");
  if (!color) return std::nullopt;
  auto v = parse_numbers(required_attr(*color, "rgba"), 4, "color rgba");
  return Rgba{static_cast<float>(v[0]), static_cast<float>(v[1]), static_cast<float>(v[2]), static_cast<float>(v[3])};
}

std::optional<Geometry> parse_geometry(const xml::Element& geometry) {
  for (const auto& g : geometry.children) {
    if (g.name == "box") return Box{parse_vec3(required_attr(g, "size"), "box size")};
    if (g.name == "cylinder") {
      return Cylinder{parse_number(required_attr(g, "radius"), "cylinder radius"),
                      parse_number(required_attr(g, "length"), "cylinder length")};
    }
    if (g.name == "sphere") return Sphere{parse_number(required_attr(g, "radius"), "sphere radius")};
    if (g.name == "mesh") {
      Mesh m{required_attr(g, "filename"), {1, 1, 1}};
      if (const auto* s = g.attr("scale")) {
        auto parts = split_whitespace(*s);
        // A single number is a uniform scale.
        if (parts.size() == 1) {
          double k = parse_number(parts[0], "mesh scale");
          m.scale = {k, k, k};
        } else {
          m.scale = parse_vec3(*s, "mesh scale");
        }
      }
      return m;
    }
  }
  return std::nullopt;
}

}  // namespace

RobotModel parse_urdf(std::string_view text) {
  xml::Element root = xml::parse(text);
  if (root.name != "robot") throw UrdfError("root element is <" + root.name + ">, expected <robot>");
  RobotModel model;
  if (const auto* n = root.attr("name")) model.name = *n;

  // Named materials: top-level ones first, then inline definitions (first wins).
  std::map<std::string, Rgba> materials;
  for (const xml::Element* m : root.children_named("material")) {
    if (const auto* name = m->attr("name")) {
      if (auto c = parse_color(*m)) materials.emplace(*name, *c);
    }
  }
  for (const xml::Element* l : root.children_named("link")) {
    for (const xml::Element* v : l->children_named("visual")) {
      if (const xml::Element* m = v->child("material")) {
        if (const auto* name = m->attr("name")) {
          if (auto c = parse_color(*m)) materials.emplace(*name, *c);
        }
      }
    }
  }

  for (const xml::Element* l : root.children_named("link")) {
    Link link{required_attr(*l, "name"), {}};
    for (const xml::Element* v : l->children_named("visual")) {
      const xml::Element* g = v->child("geometry");
      std::optional<Geometry> geom = g ? parse_geometry(*g) : std::nullopt;
      if (!geom) {
        model.warnings.push_back("link " + link.name + ": visual without supported geometry skipped");
        continue;
      }
      Visual visual{*geom, parse_origin(v->child("origin")), std::nullopt, ""};
      if (const xml::Element* m = v->child("material")) {
        visual.color = parse_color(*m);
        if (const auto* name = m->attr("name")) {
          visual.material = *name;
          if (!visual.color) {
            if (auto it = materials.find(*name); it != materials.end()) {
              visual.color = it->second;
            } else {
              model.warnings.push_back("link " + link.name + ": unknown material '" + *name + "'");
            }
          }
        }
      }
      link.visuals.push_back(std::move(visual));
    }
    if (!model.links.emplace(link.name, link).second) throw UrdfError("duplicate link '" + link.name + "'");
  }
  if (model.links.empty()) throw UrdfError("robot has no links");

  std::map<std::string, std::string> parent_joint;  // child link -> joint
  for (const xml::Element* j : root.children_named("joint")) {
    Joint joint;
    joint.name = required_attr(*j, "name");
    const std::string& type = required_attr(*j, "type");
    if (type == "fixed") {
      joint.kind = JointKind::kFixed;
    } else if (type == "revolute") {
      joint.kind = JointKind::kRevolute;
    } else if (type == "continuous") {
      joint.kind = JointKind::kContinuous;
    } else if (type == "prismatic") {
      joint.kind = JointKind::kPrismatic;
    } else if (type == "planar" || type == "floating") {
      joint.kind = JointKind::kFixed;
      model.warnings.push_back("joint " + joint.name + ": type '" + type + "' treated as fixed");
    } else {
      throw UrdfError("joint " + joint.name + ": unknown type '" + type + "'");
    }
    const xml::Element* parent = j->child("parent");
    const xml::Element* child = j->child("child");
    if (!parent || !child) throw UrdfError("joint " + joint.name + " needs <parent> and <child>");
    joint.parent = required_attr(*parent, "link");
    joint.child = required_attr(*child, "link");
    joint.origin = parse_origin(j->child("origin"));
    if (const xml::Element* axis = j->child("axis")) {
      if (const auto* xyz = axis->attr("xyz")) {
        Vec3 a = parse_vec3(*xyz, "axis xyz");
        // Fixed joints in the wild often carry a zero axis; it is unused there.
        if (a.norm() == 0) {
          if (joint.movable()) throw UrdfError("joint " + joint.name + ": zero axis");
        } else {
          joint.axis = a.normalized();
        }
      }
    }
    if (const xml::Element* limit = j->child("limit");
        limit && (joint.kind == JointKind::kRevolute || joint.kind == JointKind::kPrismatic)) {
      double lower = 0, upper = 0;
      if (const auto* lo = limit->attr("lower")) lower = parse_number(*lo, "limit lower");
      if (const auto* hi = limit->attr("upper")) upper = parse_number(*hi, "limit upper");
      joint.limits = std::make_pair(lower, upper);
    }
    if (!model.links.count(joint.parent) || !model.links.count(joint.child)) {
      throw JointGraphNotTree("joint " + joint.name + " references an unknown link");
    }
    if (joint.parent == joint.child) throw JointGraphNotTree("joint " + joint.name + " connects a link to itself");
    if (!parent_joint.emplace(joint.child, joint.name).second) {
      throw JointGraphNotTree("link " + joint.child + " has more than one parent joint");
    }
    if (!model.joints.emplace(joint.name, joint).second) throw UrdfError("duplicate joint '" + joint.name + "'");
  }

  std::vector<std::string> roots;
  for (const auto& [name, _] : model.links) {
    if (!parent_joint.count(name)) roots.push_back(name);
  }
  if (roots.empty()) throw JointGraphNotTree("no root link: the joint graph has a cycle");
  if (roots.size() > 1) {
    std::string list;
    for (const auto& r : roots) list += (list.empty() ? "" : ", ") + r;
    throw MultipleRoots("multiple root links: " + list);
  }
  model.root = roots.front();

  std::map<std::string, std::vector<std::string>> children;  // link -> joints
  for (const xml::Element* j : root.children_named("joint")) {
    const Joint& joint = model.joints.at(*j->attr("name"));
    children[joint.parent].push_back(joint.name);
  }
  std::set<std::string> reached{model.root};
  std::deque<std::string> frontier{model.root};
  while (!frontier.empty()) {
    std::string link = frontier.front();
    frontier.pop_front();
    for (const auto& jn : children[link]) {
      const Joint& joint = model.joints.at(jn);
      model.joint_order.push_back(jn);
      if (reached.insert(joint.child).second) frontier.push_back(joint.child);
    }
  }
  if (reached.size() != model.links.size()) throw JointGraphNotTree("links unreachable from root: joint cycle");
  return model;
}

Transform joint_motion(const Joint& joint, double value) {
  switch (joint.kind) {
    case JointKind::kRevolute:
    case JointKind::kContinuous:
      return Transform{{}, Quat::from_axis_angle(joint.axis, value)};
    case JointKind::kPrismatic:
      return Transform{joint.axis * value, Quat::identity()};
    case JointKind::kFixed:
      break;
  }
  return Transform::identity();
}

std::map<std::string, Transform> forward_kinematics(const RobotModel& model, const JointConfiguration& config,
                                                    FkStats* stats) {
  FkStats local;
  for (const auto& [name, _] : config) {
    if (!model.joints.count(name)) ++local.unknown_joints;
  }
  std::map<std::string, Transform> poses;
  poses[model.root] = Transform::identity();
  for (const auto& jn : model.joint_order) {
    const Joint& joint = model.joints.at(jn);
    double value = 0;
    if (auto it = config.find(jn); it != config.end()) value = it->second;
    if (joint.limits && joint.kind != JointKind::kContinuous) {
      double clamped = std::clamp(value, joint.limits->first, std::max(joint.limits->first, joint.limits->second));
      if (clamped != value) ++local.clamped;
      value = clamped;
    }
    poses[joint.child] = poses.at(joint.parent) * joint.origin * joint_motion(joint, value);
  }
  if (stats) {
    stats->clamped += local.clamped;
    stats->unknown_joints += local.unknown_joints;
  }
  return poses;
}

JointConfiguration joint_state_apply(const RobotModel& model, const serde::DynamicValue& joint_state,
                                     FkStats* stats) {
  if (!joint_state.is_record()) {
    throw serde::SchemaMismatch("JointState", "record", std::string(serde::kind_name(joint_state.kind())));
  }
  const serde::DynamicValue* names = joint_state.find("name");
  const serde::DynamicValue* positions = joint_state.find("position");
  if (!names || !names->is_array()) throw serde::SchemaMismatch("JointState.name", "string[]", "missing");
  if (!positions || !positions->is_array()) throw serde::SchemaMismatch("JointState.position", "float64[]", "missing");
  JointConfiguration config;
  std::size_t n = std::min(names->array_size(), positions->array_size());
  for (std::size_t i = 0; i < n; ++i) {
    serde::DynamicValue name = names->array_element(i);
    if (!name.is<std::string>()) throw serde::SchemaMismatch("JointState.name", "string", "other");
    double value;
    try {
      value = positions->array_element(i).as_double();
    } catch (const std::exception&) {
      throw serde::SchemaMismatch("JointState.position", "number", "other");
    }
    if (!model.joints.count(name.get<std::string>())) {
      if (stats) ++stats->unknown_joints;
      continue;
    }
    config[name.get<std::string>()] = value;
  }
  return config;
}

}  // namespace roslite::tf

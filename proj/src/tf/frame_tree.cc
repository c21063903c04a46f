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

#include "roslite/tf/frame_tree.h"

#include <algorithm>
#include <mutex>

#include "roslite/serde/codec.h"

namespace roslite::tf {

std::string canonical_frame(std::string_view frame) {
  while (!frame.empty() && frame.front() == '/') frame.remove_prefix(1);
  return std::string(frame);
}

void FrameTree::set(const std::string& child_in, const std::string& parent_in, const Transform& transform,
                    serde::Time stamp, bool is_static) {
  std::string child = canonical_frame(child_in);
  std::string parent = canonical_frame(parent_in);
  if (child.empty() || parent.empty()) throw TfError("empty frame id");
  std::unique_lock lock(mu_);
  // The new edge closes a cycle when `child` is already an ancestor of `parent`.
  for (std::string cur = parent;;) {
    if (cur == child) {
      cycles_rejected_.fetch_add(1);
      throw CycleRejected(child, parent);
    }
    auto it = edges_.find(cur);
    if (it == edges_.end()) break;
    cur = it->second.parent;
  }
  Transform t = transform;
  t.rotation = t.rotation.normalized();
  edges_[child] = FrameEntry{parent, t, stamp, is_static};
}

namespace {

double number(const serde::DynamicValue& v, std::string_view path) {
  try {
    return v.as_double();
  } catch (const std::exception&) {
    throw serde::SchemaMismatch(std::string(path), "number", std::string(serde::kind_name(v.kind())));
  }
}

const serde::DynamicValue& field(const serde::DynamicValue& v, std::string_view name, std::string_view path) {
  const serde::DynamicValue* f = v.is_record() ? v.find(name) : nullptr;
  if (!f) throw serde::SchemaMismatch(std::string(path) + "." + std::string(name), "field", "missing");
  return *f;
}

Vec3 vec3(const serde::DynamicValue& v, std::string_view path) {
  return {number(field(v, "x", path), path), number(field(v, "y", path), path), number(field(v, "z", path), path)};
}

}  // namespace

IngestResult FrameTree::ingest(const serde::DynamicValue& tf_message, bool is_static) {
  const serde::DynamicValue& list = field(tf_message, "transforms", "TFMessage");
  if (!list.is_array()) throw serde::SchemaMismatch("transforms", "array", std::string(serde::kind_name(list.kind())));
  IngestResult result;
  for (std::size_t i = 0; i < list.array_size(); ++i) {
    serde::DynamicValue ts = list.array_element(i);
    std::string path = "transforms[" + std::to_string(i) + "]";
    const serde::DynamicValue& header = field(ts, "header", path);
    const serde::DynamicValue& frame_id = field(header, "frame_id", path + ".header");
    const serde::DynamicValue& child_id = field(ts, "child_frame_id", path);
    if (!frame_id.is<std::string>() || !child_id.is<std::string>()) {
      throw serde::SchemaMismatch(path, "string frame ids", "other");
    }
    serde::Time stamp;
    if (const auto* s = header.find("stamp"); s && s->is<serde::Time>()) stamp = s->get<serde::Time>();
    const serde::DynamicValue& tr = field(ts, "transform", path);
    Vec3 t = vec3(field(tr, "translation", path), path + ".translation");
    const serde::DynamicValue& r = field(tr, "rotation", path);
    std::string rpath = path + ".rotation";
    Quat q{number(field(r, "x", rpath), rpath), number(field(r, "y", rpath), rpath),
           number(field(r, "z", rpath), rpath), number(field(r, "w", rpath), rpath)};
    try {
      set(child_id.get<std::string>(), frame_id.get<std::string>(), Transform{t, q}, stamp, is_static);
      ++result.accepted;
    } catch (const TfError&) {
      ++result.rejected;
    }
  }
  return result;
}

bool FrameTree::known_locked(const std::string& frame) const {
  if (edges_.count(frame)) return true;
  return std::any_of(edges_.begin(), edges_.end(), [&](const auto& e) { return e.second.parent == frame; });
}

Transform FrameTree::to_root_locked(const std::string& frame, std::string* root,
                                    std::vector<std::string>* chain) const {
  Transform acc = Transform::identity();
  std::string cur = frame;
  chain->push_back(cur);
  for (auto it = edges_.find(cur); it != edges_.end(); it = edges_.find(cur)) {
    acc = it->second.transform * acc;
    cur = it->second.parent;
    chain->push_back(cur);
  }
  *root = cur;
  return acc;
}

Transform FrameTree::lookup(const std::string& target_in, const std::string& source_in) const {
  std::string target = canonical_frame(target_in);
  std::string source = canonical_frame(source_in);
  std::shared_lock lock(mu_);
  if (!known_locked(target)) throw UnknownFrame(target);
  if (!known_locked(source)) throw UnknownFrame(source);
  if (target == source) return Transform::identity();
  std::string root_t, root_s;
  std::vector<std::string> chain_t, chain_s;
  to_root_locked(target, &root_t, &chain_t);
  to_root_locked(source, &root_s, &chain_s);
  if (root_t != root_s) throw FramesDisconnected(target, source);
  // Trim the shared tail so both sides stop at the lowest common ancestor.
  while (chain_t.size() > 1 && chain_s.size() > 1 && chain_t[chain_t.size() - 2] == chain_s[chain_s.size() - 2]) {
    chain_t.pop_back();
    chain_s.pop_back();
  }
  auto compose_up = [&](const std::vector<std::string>& chain) {
    Transform acc = Transform::identity();
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) acc = edges_.at(chain[i]).transform * acc;
    return acc;
  };
  return compose_up(chain_t).inverse() * compose_up(chain_s);
}

bool FrameTree::can_transform(const std::string& target, const std::string& source) const {
  try {
    lookup(target, source);
    return true;
  } catch (const TfError&) {
    return false;
  }
}

bool FrameTree::has_frame(const std::string& frame) const {
  std::shared_lock lock(mu_);
  return known_locked(canonical_frame(frame));
}

std::optional<FrameEntry> FrameTree::entry(const std::string& child) const {
  std::shared_lock lock(mu_);
  auto it = edges_.find(canonical_frame(child));
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> FrameTree::frames() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [child, e] : edges_) {
    out.push_back(child);
    out.push_back(e.parent);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t FrameTree::size() const { return frames().size(); }

void FrameTree::clear() {
  std::unique_lock lock(mu_);
  edges_.clear();
}

}  // namespace roslite::tf

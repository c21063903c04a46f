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

#ifndef ROSLITE_TF_FRAME_TREE_H_
#define ROSLITE_TF_FRAME_TREE_H_

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "roslite/serde/dynamic_value.h"
#include "roslite/tf/transform.h"
#include "roslite/util/error.h"

namespace roslite::tf {

class TfError : public Error {
 public:
  using Error::Error;
};

class CycleRejected : public TfError {
 public:
  CycleRejected(const std::string& child, const std::string& parent)
      : TfError("edge " + parent + " -> " + child + " would create a cycle"), child_(child), parent_(parent) {}
  const std::string& child() const { return child_; }
  const std::string& parent() const { return parent_; }

 private:
  std::string child_, parent_;
};

class UnknownFrame : public TfError {
 public:
  explicit UnknownFrame(const std::string& frame) : TfError("unknown frame '" + frame + "'") {}
};

class FramesDisconnected : public TfError {
 public:
  FramesDisconnected(const std::string& a, const std::string& b)
      : TfError("frames '" + a + "' and '" + b + "' are not connected") {}
};

struct FrameEntry {
  std::string parent;
  Transform transform;  // child pose in the parent frame
  serde::Time stamp;
  bool is_static = false;
};

struct IngestResult {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

// Latest-value transform tree keyed by child frame. One writer, many
// readers; every lookup sees a consistent state.
class FrameTree {
 public:
  // Upserts child -> parent. Throws CycleRejected (tree unchanged).
  void set(const std::string& child, const std::string& parent, const Transform& transform,
           serde::Time stamp = {}, bool is_static = false);
  // Applies a tf2_msgs/TFMessage value. Cyclic entries are dropped and
  // counted; shape errors throw serde::SchemaMismatch.
  IngestResult ingest(const serde::DynamicValue& tf_message, bool is_static);

  // Maps points in `source` to `target` coordinates.
  Transform lookup(const std::string& target, const std::string& source) const;
  bool can_transform(const std::string& target, const std::string& source) const;

  bool has_frame(const std::string& frame) const;
  std::optional<FrameEntry> entry(const std::string& child) const;
  std::vector<std::string> frames() const;
  std::size_t size() const;
  std::uint64_t cycles_rejected() const { return cycles_rejected_.load(); }
  void clear();

 private:
  // Root-relative pose of `frame` and its root. Caller holds the lock.
  Transform to_root_locked(const std::string& frame, std::string* root, std::vector<std::string>* chain) const;
  bool known_locked(const std::string& frame) const;

  mutable std::shared_mutex mu_;
  std::map<std::string, FrameEntry> edges_;
  std::atomic<std::uint64_t> cycles_rejected_{0};
};

// tf2 ignores a leading slash in frame ids.
std::string canonical_frame(std::string_view frame);

}  // namespace roslite::tf

#endif  // ROSLITE_TF_FRAME_TREE_H_

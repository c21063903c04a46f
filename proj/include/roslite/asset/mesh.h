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

#ifndef ROSLITE_ASSET_MESH_H_
#define ROSLITE_ASSET_MESH_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roslite/serde/dynamic_value.h"
#include "roslite/util/error.h"

namespace roslite::asset {

class MeshError : public Error {
 public:
  using Error::Error;
};

// `position` is a byte offset (STL) or a 1-based line number (OBJ).
class MalformedFile : public MeshError {
 public:
  MalformedFile(std::size_t position, const std::string& reason)
      : MeshError("malformed mesh at " + std::to_string(position) + ": " + reason), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class EmptyMesh : public MeshError {
 public:
  EmptyMesh() : MeshError("mesh has no triangles") {}
};

struct NormalizedMesh {
  std::vector<float> vertices;  // xyz triples
  std::vector<float> normals;   // xyz triples, unit
  std::vector<std::uint32_t> triangles;
  std::array<float, 4> diffuse_color{1, 1, 1, 1};

  std::size_t vertex_count() const { return vertices.size() / 3; }
  std::size_t triangle_count() const { return triangles.size() / 3; }
  double surface_area() const;
  bool operator==(const NormalizedMesh&) const = default;
};

struct MeshStats {
  std::size_t degenerate_dropped = 0;
};

// Binary or ASCII, auto-detected. Throws MalformedFile, EmptyMesh.
NormalizedMesh parse_stl(std::span<const std::uint8_t> bytes, MeshStats* stats = nullptr);
// v / vn / f with fan triangulation and negative indices.
NormalizedMesh parse_obj(std::string_view text, MeshStats* stats = nullptr);

// Checks the invariants: index range, unit normals, matching array sizes.
// Returns an empty string when valid.
std::string validate(const NormalizedMesh& mesh);

// asset_msgs/NormalizedMesh conversion.
serde::DynamicValue to_dynamic(const NormalizedMesh& mesh);
NormalizedMesh from_dynamic(const serde::DynamicValue& value);

}  // namespace roslite::asset

#endif  // ROSLITE_ASSET_MESH_H_

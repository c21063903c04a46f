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

#include "roslite/asset/mesh.h"

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "roslite/serde/codec.h"
#include "roslite/util/strings.h"

namespace roslite::asset {

namespace {

struct V3 {
  double x, y, z;
  V3 operator-(const V3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  V3 operator+(const V3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  V3 cross(const V3& o) const { return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x}; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

constexpr double kDegenerate = 1e-12;  // |cross| below this is a zero-area face

// Normal of the triangle, unnormalized (length = 2 * area).
V3 face_cross(const V3& a, const V3& b, const V3& c) { return (b - a).cross(c - a); }

void push3(std::vector<float>& out, const V3& v) {
  out.push_back(static_cast<float>(v.x));
  out.push_back(static_cast<float>(v.y));
  out.push_back(static_cast<float>(v.z));
}

V3 unit(const V3& v) {
  double n = v.norm();
  return {v.x / n, v.y / n, v.z / n};
}

// Positions go through float32 first so degeneracy is judged on what is emitted.
V3 as_float(double x, double y, double z) {
  return {static_cast<float>(x), static_cast<float>(y), static_cast<float>(z)};
}

double read_f32(const std::uint8_t* p) {
  float f;
  std::memcpy(&f, p, 4);
  return f;
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

// Flat-shaded triangle soup: three vertices per kept face.
class SoupBuilder {
 public:
  void add(const V3& a, const V3& b, const V3& c) {
    V3 n = face_cross(a, b, c);
    double len = n.norm();
    if (!(len >= kDegenerate) || !std::isfinite(len)) {
      ++dropped_;
      return;
    }
    V3 u = unit(n);
    for (const V3* p : {&a, &b, &c}) {
      mesh_.triangles.push_back(static_cast<std::uint32_t>(mesh_.vertex_count()));
      push3(mesh_.vertices, *p);
      push3(mesh_.normals, u);
    }
  }
  NormalizedMesh finish(MeshStats* stats) {
    if (stats) stats->degenerate_dropped += dropped_;
    if (mesh_.triangles.empty()) throw EmptyMesh();
    return std::move(mesh_);
  }

 private:
  NormalizedMesh mesh_;
  std::size_t dropped_ = 0;
};

bool parse_double(std::string_view s, double* out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(*out);
}

NormalizedMesh parse_stl_binary(std::span<const std::uint8_t> bytes, std::uint32_t count, MeshStats* stats) {
  SoupBuilder b;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint8_t* rec = bytes.data() + 84 + 50 * static_cast<std::size_t>(i);
    V3 v[3];
    for (int k = 0; k < 3; ++k) {
      const std::uint8_t* p = rec + 12 + 12 * k;
      v[k] = {read_f32(p), read_f32(p + 4), read_f32(p + 8)};
      if (!std::isfinite(v[k].x) || !std::isfinite(v[k].y) || !std::isfinite(v[k].z)) {
        throw MalformedFile(84 + 50 * static_cast<std::size_t>(i), "non-finite vertex");
      }
    }
    b.add(v[0], v[1], v[2]);
  }
  return b.finish(stats);
}

NormalizedMesh parse_stl_ascii(std::string_view text, MeshStats* stats) {
  SoupBuilder b;
  std::vector<V3> loop;
  bool in_loop = false;
  std::size_t pos = 0;
  bool saw_solid = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::size_t line_start = pos;
    auto tokens = util::split_whitespace(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (tokens.empty()) continue;
    std::string_view kw = tokens[0];
    auto fail = [&](const std::string& why) { throw MalformedFile(line_start, why); };
    if (kw == "solid") {
      saw_solid = true;
    } else if (kw == "endsolid") {
    } else if (kw == "facet") {
      if (tokens.size() != 5 || tokens[1] != "normal") fail("expected 'facet normal nx ny nz'");
      double d;
      for (int k = 2; k < 5; ++k) {
        if (!parse_double(tokens[k], &d)) fail("bad facet normal");
      }
    } else if (kw == "outer") {
      if (in_loop) fail("nested loop");
      in_loop = true;
      loop.clear();
    } else if (kw == "vertex") {
      if (!in_loop) fail("vertex outside loop");
      double c[3];
      if (tokens.size() != 4) fail("expected 'vertex x y z'");
      for (int k = 0; k < 3; ++k) {
        if (!parse_double(tokens[k + 1], &c[k])) fail("bad vertex coordinate");
      }
      loop.push_back(as_float(c[0], c[1], c[2]));
    } else if (kw == "endloop") {
      if (!in_loop) fail("endloop without loop");
      if (loop.size() < 3) fail("loop with fewer than 3 vertices");
      for (std::size_t k = 1; k + 1 < loop.size(); ++k) b.add(loop[0], loop[k], loop[k + 1]);
      in_loop = false;
    } else if (kw == "endfacet") {
      if (in_loop) fail("endfacet inside loop");
    } else {
      fail("unexpected token '" + std::string(kw.substr(0, 32)) + "'");
    }
  }
  if (!saw_solid) throw MalformedFile(0, "missing 'solid'");
  if (in_loop) throw MalformedFile(text.size(), "unterminated loop");
  return b.finish(stats);
}

bool looks_like_text(std::span<const std::uint8_t> bytes) {
  std::size_t n = std::min<std::size_t>(bytes.size(), 512);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t c = bytes[i];
    if (c == 0 || (c < 0x09) || (c > 0x0d && c < 0x20)) return false;
  }
  return true;
}

}  // namespace

NormalizedMesh parse_stl(std::span<const std::uint8_t> bytes, MeshStats* stats) {
  if (bytes.size() >= 84) {
    std::uint64_t count = read_u32(bytes.data() + 80);
    if (84 + 50 * count == bytes.size()) return parse_stl_binary(bytes, static_cast<std::uint32_t>(count), stats);
  }
  std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  std::string_view head = util::trim(text.substr(0, 256));
  if (head.substr(0, 5) == "solid" && looks_like_text(bytes)) return parse_stl_ascii(text, stats);
  if (bytes.size() < 84) throw MalformedFile(bytes.size(), "too short for binary STL");
  std::uint64_t count = read_u32(bytes.data() + 80);
  // Some exporters pad binary files; trailing bytes are ignored.
  if (count > 0 && 84 + 50 * count < bytes.size()) {
    return parse_stl_binary(bytes, static_cast<std::uint32_t>(count), stats);
  }
  throw MalformedFile(80, "triangle count " + std::to_string(count) + " does not match file size " +
                              std::to_string(bytes.size()));
}

NormalizedMesh parse_obj(std::string_view text, MeshStats* stats) {
  struct Corner {
    long v;
    long n;  // 0 when absent
  };
  struct Face {
    std::vector<Corner> corners;
    std::size_t line;
    std::size_t v_count, n_count;  // counts when the face was read, for negative indices
  };
  std::vector<V3> positions;
  std::vector<V3> normals;
  std::vector<Face> faces;

  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = util::split_whitespace(line);
    if (tokens.empty()) continue;
    std::string_view kw = tokens[0];
    auto fail = [&](const std::string& why) { throw MalformedFile(line_no, why); };
    if (kw == "v" || kw == "vn") {
      if (tokens.size() < 4) fail(std::string(kw) + " needs 3 coordinates");
      double c[3];
      for (int k = 0; k < 3; ++k) {
        if (!parse_double(tokens[k + 1], &c[k])) fail("bad number '" + std::string(tokens[k + 1].substr(0, 32)) + "'");
      }
      (kw == "v" ? positions : normals).push_back(as_float(c[0], c[1], c[2]));
    } else if (kw == "f") {
      if (tokens.size() < 4) fail("face needs at least 3 vertices");
      Face f{{}, line_no, positions.size(), normals.size()};
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        auto parts = util::split(tokens[k], '/');
        if (parts.empty() || parts.size() > 3) fail("bad face vertex '" + std::string(tokens[k].substr(0, 32)) + "'");
        auto index = [&](std::string_view s) -> long {
          long v = 0;
          auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
          if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) fail("bad index '" + std::string(s) + "'");
          return v;
        };
        Corner c{index(parts[0]), 0};
        if (parts.size() == 3 && !parts[2].empty()) c.n = index(parts[2]);
        f.corners.push_back(c);
      }
      faces.push_back(std::move(f));
    }
    // vt, o, g, s, usemtl, mtllib, l, p: not needed for a shaded mesh.
  }

  auto resolve = [](long idx, std::size_t count_then, std::size_t count_total, std::size_t line) -> std::size_t {
    long r = idx > 0 ? idx - 1 : static_cast<long>(count_then) + idx;
    if (r < 0 || static_cast<std::size_t>(r) >= count_total) {
      throw MalformedFile(line, "index " + std::to_string(idx) + " out of range");
    }
    return static_cast<std::size_t>(r);
  };

  NormalizedMesh mesh;
  std::size_t dropped = 0;
  struct Key {
    std::size_t v, n;  // n = SIZE_MAX when smooth
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return k.v * 1000003u ^ k.n; }
  };
  std::unordered_map<Key, std::uint32_t, KeyHash> index_of;
  std::vector<V3> smooth(positions.size(), V3{0, 0, 0});
  std::vector<V3> fallback;            // per output vertex: normal of the first face using it
  std::vector<std::size_t> smooth_of;  // per output vertex: position index, or SIZE_MAX
  std::vector<V3> explicit_normal;

  for (const Face& f : faces) {
    std::vector<std::pair<std::size_t, std::size_t>> ref;
    for (const Corner& c : f.corners) {
      std::size_t v = resolve(c.v, f.v_count, positions.size(), f.line);
      std::size_t n = SIZE_MAX;
      if (c.n != 0) {
        n = resolve(c.n, f.n_count, normals.size(), f.line);
        double len = normals[n].norm();
        if (!(len > 0) || !std::isfinite(len)) n = SIZE_MAX;
      }
      ref.emplace_back(v, n);
    }
    for (std::size_t k = 1; k + 1 < ref.size(); ++k) {
      std::array tri{&ref[0], &ref[k], &ref[k + 1]};
      V3 cr = face_cross(positions[tri[0]->first], positions[tri[1]->first], positions[tri[2]->first]);
      double len = cr.norm();
      if (!(len >= kDegenerate) || !std::isfinite(len)) {
        ++dropped;
        continue;
      }
      for (int c = 0; c < 3; ++c) {
        auto [v, n] = *tri[c];
        smooth[v] = smooth[v] + cr;
        Key key{v, n};
        auto [it, fresh] = index_of.emplace(key, static_cast<std::uint32_t>(smooth_of.size()));
        if (fresh) {
          smooth_of.push_back(n == SIZE_MAX ? v : SIZE_MAX);
          fallback.push_back(unit(cr));
          explicit_normal.push_back(n == SIZE_MAX ? V3{0, 0, 0} : unit(normals[n]));
          push3(mesh.vertices, positions[v]);
        }
        mesh.triangles.push_back(it->second);
      }
    }
  }
  if (stats) stats->degenerate_dropped += dropped;
  if (mesh.triangles.empty()) throw EmptyMesh();
  for (std::size_t i = 0; i < smooth_of.size(); ++i) {
    V3 n = explicit_normal[i];
    if (smooth_of[i] != SIZE_MAX) {
      V3 s = smooth[smooth_of[i]];
      double len = s.norm();
      // Opposite faces sharing a vertex can cancel out.
      n = len > kDegenerate && std::isfinite(len) ? unit(s) : fallback[i];
    }
    push3(mesh.normals, n);
  }
  return mesh;
}

double NormalizedMesh::surface_area() const {
  double total = 0;
  for (std::size_t t = 0; t + 2 < triangles.size(); t += 3) {
    auto at = [&](std::uint32_t i) { return V3{vertices[3 * i], vertices[3 * i + 1], vertices[3 * i + 2]}; };
    total += face_cross(at(triangles[t]), at(triangles[t + 1]), at(triangles[t + 2])).norm() / 2;
  }
  return total;
}

std::string validate(const NormalizedMesh& mesh) {
  if (mesh.vertices.size() % 3) return "vertex array not a multiple of 3";
  if (mesh.normals.size() != mesh.vertices.size()) return "normal count differs from vertex count";
  if (mesh.triangles.size() % 3) return "index array not a multiple of 3";
  for (std::uint32_t i : mesh.triangles) {
    if (i >= mesh.vertex_count()) return "index " + std::to_string(i) + " out of range";
  }
  for (std::size_t i = 0; i < mesh.normals.size(); i += 3) {
    double n = V3{mesh.normals[i], mesh.normals[i + 1], mesh.normals[i + 2]}.norm();
    if (!(std::abs(n - 1.0) <= 1e-4)) return "normal " + std::to_string(i / 3) + " has length " + std::to_string(n);
  }
  return "";
}

serde::DynamicValue to_dynamic(const NormalizedMesh& mesh) {
  const auto& c = mesh.diffuse_color;
  return serde::DynamicValue::record(
      {{"vertices", mesh.vertices},
       {"normals", mesh.normals},
       {"triangles", mesh.triangles},
       {"diffuse_color", serde::DynamicValue::record({{"r", c[0]}, {"g", c[1]}, {"b", c[2]}, {"a", c[3]}})}});
}

namespace {

template <typename T>
std::vector<T> array_of(const serde::DynamicValue& v) {
  if (v.is<serde::DynamicValue::PackedArray>()) {
    const auto& packed = v.get<serde::DynamicValue::PackedArray>();
    if (const auto* direct = std::get_if<std::vector<T>>(&packed)) return *direct;
  }
  std::vector<T> out;
  for (std::size_t i = 0; i < v.array_size(); ++i) out.push_back(static_cast<T>(v.array_element(i).as_double()));
  return out;
}

}  // namespace

NormalizedMesh from_dynamic(const serde::DynamicValue& value) {
  NormalizedMesh mesh;
  mesh.vertices = array_of<float>(value.at("vertices"));
  mesh.normals = array_of<float>(value.at("normals"));
  mesh.triangles = array_of<std::uint32_t>(value.at("triangles"));
  const auto& c = value.at("diffuse_color");
  mesh.diffuse_color = {static_cast<float>(c.at("r").as_double()), static_cast<float>(c.at("g").as_double()),
                        static_cast<float>(c.at("b").as_double()), static_cast<float>(c.at("a").as_double())};
  return mesh;
}

}  // namespace roslite::asset

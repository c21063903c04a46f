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

#include "roslite/asset/resolver.h"

#include <cstdlib>

#include "roslite/util/strings.h"

namespace roslite::asset {

namespace fs = std::filesystem;

namespace {

bool inside(const fs::path& path, const fs::path& root) {
  auto p = path.begin();
  for (auto r = root.begin(); r != root.end(); ++r, ++p) {
    if (r->empty()) continue;  // trailing separator
    if (p == path.end() || *p != *r) return false;
  }
  return true;
}

fs::path canonical_root(const fs::path& root) {
  std::error_code ec;
  fs::path c = fs::weakly_canonical(fs::absolute(root), ec);
  return ec ? root.lexically_normal() : c;
}

// Lexical containment first (catches ".."), then again after following links.
fs::path confine(const fs::path& candidate, const fs::path& root, const std::string& uri) {
  fs::path croot = canonical_root(root);
  fs::path lexical = candidate.lexically_normal();
  if (!inside(lexical, root.lexically_normal()) && !inside(lexical, croot)) {
    throw PathEscapesRoot(uri + " escapes asset root " + root.string());
  }
  std::error_code ec;
  fs::path real = fs::weakly_canonical(lexical, ec);
  if (!ec && !inside(real, croot)) throw PathEscapesRoot(uri + " resolves outside " + root.string());
  return ec ? lexical : real;
}

bool is_file(const fs::path& p) {
  std::error_code ec;
  return fs::is_regular_file(p, ec);
}

}  // namespace

fs::path resolve_uri(const std::string& uri, const std::vector<fs::path>& roots) {
  constexpr std::string_view kPackage = "package://";
  constexpr std::string_view kFile = "file://";
  std::string_view u(uri);
  if (u.substr(0, kPackage.size()) == kPackage) {
    std::string_view rest = u.substr(kPackage.size());
    std::size_t slash = rest.find('/');
    if (slash == 0 || slash == std::string_view::npos || slash + 1 >= rest.size()) {
      throw NotFound(uri + ": expected package://<package>/<path>");
    }
    fs::path rel = fs::path(std::string(rest)).lexically_normal();
    if (rel.is_absolute() || (!rel.empty() && *rel.begin() == "..")) throw PathEscapesRoot(uri + " escapes asset roots");
    for (const auto& root : roots) {
      fs::path path = confine(root / rel, root, uri);
      if (is_file(path)) return path;
    }
    throw NotFound(uri + " not found in " + std::to_string(roots.size()) + " package root(s)");
  }
  if (u.substr(0, kFile.size()) == kFile) {
    std::string_view rest = u.substr(kFile.size());
    // file://localhost/abs is the same as file:///abs.
    if (rest.substr(0, 9) == "localhost") rest.remove_prefix(9);
    fs::path path(std::string{rest});
    if (!path.is_absolute()) throw NotFound(uri + ": file URI must be absolute");
    bool escaped = false;
    for (const auto& root : roots) {
      try {
        fs::path confined = confine(path, root, uri);
        if (is_file(confined)) return confined;
        throw NotFound(uri + " not found");
      } catch (const PathEscapesRoot&) {
        escaped = true;
      }
    }
    if (escaped || roots.empty()) throw PathEscapesRoot(uri + " is outside every allowed root");
    throw NotFound(uri + " not found");
  }
  std::size_t colon = uri.find(':');
  throw UnknownScheme("unsupported URI scheme '" + (colon == std::string::npos ? uri : uri.substr(0, colon)) + "'");
}

std::vector<fs::path> package_roots_from_env() {
  std::vector<fs::path> out;
  const char* env = std::getenv("ROS_PACKAGE_PATH");
  if (!env) return out;
  for (auto part : util::split(env, ':')) {
    if (part.empty()) continue;
    std::error_code ec;
    if (fs::is_directory(fs::path(std::string(part)), ec)) out.emplace_back(std::string(part));
  }
  return out;
}

}  // namespace roslite::asset

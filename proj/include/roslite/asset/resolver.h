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

#ifndef ROSLITE_ASSET_RESOLVER_H_
#define ROSLITE_ASSET_RESOLVER_H_

#include <filesystem>
#include <string>
#include <vector>

#include "roslite/util/error.h"

namespace roslite::asset {

class ResolveError : public Error {
 public:
  using Error::Error;
};

class UnknownScheme : public ResolveError {
 public:
  using ResolveError::ResolveError;
};

class NotFound : public ResolveError {
 public:
  using ResolveError::ResolveError;
};

class PathEscapesRoot : public ResolveError {
 public:
  using ResolveError::ResolveError;
};

// `package://pkg/rel` -> first root containing pkg/rel; `file:///abs` must lie
// inside one of the roots. Symlinks are followed before the containment check.
std::filesystem::path resolve_uri(const std::string& uri, const std::vector<std::filesystem::path>& roots);

// Colon-separated ROS_PACKAGE_PATH entries that exist.
std::vector<std::filesystem::path> package_roots_from_env();

}  // namespace roslite::asset

#endif  // ROSLITE_ASSET_RESOLVER_H_

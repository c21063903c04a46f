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

#ifndef ROSLITE_NODE_NAMES_H_
#define ROSLITE_NODE_NAMES_H_

#include <string>
#include <string_view>
#include <vector>

#include "roslite/util/error.h"

// Graph names. Only global names, relative names (against the node's
// namespace) and `~private` names; remapping is not supported.
namespace roslite::node {

class InvalidName : public Error {
 public:
  using Error::Error;
};

// "/", or "/seg/seg" with segments matching [A-Za-z][A-Za-z0-9_]*.
bool is_global_name(std::string_view name);

// "/a/b/node" -> "/a/b/"; "/node" -> "/".
std::string namespace_of(std::string_view name);

// Global form of `name` for a node called `node_name`. InvalidName on bad input.
std::string resolve_name(std::string_view name, std::string_view node_name);

// "/a" + "b" -> "/a/b".
std::string join_name(std::string_view ns, std::string_view name);

std::vector<std::string> split_name(std::string_view name);

}  // namespace roslite::node

#endif  // ROSLITE_NODE_NAMES_H_

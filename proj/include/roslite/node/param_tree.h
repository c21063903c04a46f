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

#ifndef ROSLITE_NODE_PARAM_TREE_H_
#define ROSLITE_NODE_PARAM_TREE_H_

#include <optional>
#include <string>
#include <vector>

#include "roslite/xmlrpc/value.h"

namespace roslite::node {

using ParamValue = xmlrpc::XrValue;

// Hierarchical parameter store with master semantics: namespaces are Records,
// setting a Record replaces the subtree, reading a namespace returns the
// Record of its children. Not synchronized.
class ParamTree {
 public:
  ParamTree() : root_(ParamValue::Record{}) {}

  void set(const std::string& key, ParamValue value);
  std::optional<ParamValue> get(const std::string& key) const;
  bool has(const std::string& key) const { return get(key).has_value(); }
  bool erase(const std::string& key);
  // Every leaf key, global form.
  std::vector<std::string> names() const;
  // Closest `key` walking up from `caller`'s private namespace to the root.
  std::optional<std::string> search(const std::string& caller, const std::string& key) const;

 private:
  ParamValue root_;
};

}  // namespace roslite::node

#endif  // ROSLITE_NODE_PARAM_TREE_H_

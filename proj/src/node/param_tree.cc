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

#include "roslite/node/param_tree.h"

#include "roslite/node/names.h"

namespace roslite::node {

void ParamTree::set(const std::string& key, ParamValue value) {
  auto parts = split_name(key);
  if (parts.empty()) {
    if (!value.is_record()) throw InvalidName("only a struct may be stored at the root");
    root_ = std::move(value);
    return;
  }
  ParamValue* node = &root_;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    const ParamValue* child = node->find(parts[i]);
    if (!child || !child->is_record()) node->set(parts[i], ParamValue(ParamValue::Record{}));
    node = const_cast<ParamValue*>(node->find(parts[i]));
  }
  node->set(parts.back(), std::move(value));
}

std::optional<ParamValue> ParamTree::get(const std::string& key) const {
  const ParamValue* node = &root_;
  for (const auto& part : split_name(key)) {
    if (!node->is_record()) return std::nullopt;
    node = node->find(part);
    if (!node) return std::nullopt;
  }
  return *node;
}

bool ParamTree::erase(const std::string& key) {
  auto parts = split_name(key);
  if (parts.empty()) {
    root_ = ParamValue(ParamValue::Record{});
    return true;
  }
  ParamValue* node = &root_;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_record()) return false;
    node = const_cast<ParamValue*>(node->find(parts[i]));
    if (!node) return false;
  }
  if (!node->is_record()) return false;
  auto& rec = node->as_record();
  for (auto it = rec.begin(); it != rec.end(); ++it) {
    if (it->first == parts.back()) {
      rec.erase(it);
      return true;
    }
  }
  return false;
}

namespace {

void collect(const ParamValue& v, const std::string& prefix, std::vector<std::string>& out) {
  if (v.is_record()) {
    for (const auto& [k, child] : v.as_record()) collect(child, prefix + "/" + k, out);
  } else {
    out.push_back(prefix);
  }
}

}  // namespace

std::vector<std::string> ParamTree::names() const {
  std::vector<std::string> out;
  for (const auto& [k, child] : root_.as_record()) collect(child, "/" + k, out);
  return out;
}

std::optional<std::string> ParamTree::search(const std::string& caller, const std::string& key) const {
  if (key.empty()) return std::nullopt;
  if (key.front() == '~') throw InvalidName("private keys cannot be searched");
  if (key.front() == '/') return has(key) ? std::optional<std::string>(join_name("/", key)) : std::nullopt;
  auto key_parts = split_name(key);
  if (key_parts.empty()) return std::nullopt;
  // Match on the first key segment, starting in the caller's own namespace.
  auto ns_parts = split_name(caller);
  for (std::size_t depth = ns_parts.size() + 1; depth-- > 0;) {
    std::string ns = "/";
    for (std::size_t i = 0; i < depth; ++i) ns += ns_parts[i] + "/";
    if (has(join_name(ns, key_parts.front()))) return join_name(ns, key);
  }
  return std::nullopt;
}

}  // namespace roslite::node

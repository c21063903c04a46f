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

#include "roslite/node/names.h"

#include "roslite/util/strings.h"

namespace roslite::node {

namespace {

bool valid_segment(std::string_view s) {
  if (s.empty()) return false;
  char c = s.front();
  if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))) return false;
  for (char ch : s) {
    if (!((ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_')) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<std::string> split_name(std::string_view name) {
  std::vector<std::string> out;
  for (auto part : util::split(name, '/')) {
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

bool is_global_name(std::string_view name) {
  if (name.empty() || name.front() != '/') return false;
  if (name == "/") return true;
  if (name.back() == '/') name.remove_suffix(1);
  for (auto part : util::split(name.substr(1), '/')) {
    if (!valid_segment(part)) return false;
  }
  return true;
}

std::string join_name(std::string_view ns, std::string_view name) {
  std::string out = "/";
  for (const auto& p : split_name(ns)) out += p + "/";
  for (const auto& p : split_name(name)) out += p + "/";
  if (out.size() > 1) out.pop_back();
  return out;
}

std::string namespace_of(std::string_view name) {
  auto parts = split_name(name);
  std::string out = "/";
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) out += parts[i] + "/";
  return out;
}

std::string resolve_name(std::string_view name, std::string_view node_name) {
  if (name.empty()) throw InvalidName("empty name");
  std::string resolved;
  if (name.front() == '/') {
    resolved = join_name("/", name);
  } else if (name.front() == '~') {
    resolved = join_name(node_name, name.substr(1));
  } else {
    resolved = join_name(namespace_of(node_name), name);
  }
  if (!is_global_name(resolved)) throw InvalidName("invalid graph name '" + std::string(name) + "'");
  return resolved;
}

}  // namespace roslite::node

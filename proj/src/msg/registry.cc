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

#include "roslite/msg/registry.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "roslite/util/digest.h"
#include "roslite/util/strings.h"

namespace roslite::msg {

namespace {

constexpr std::string_view kBundleSeparator =
    "================================================================================";

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// `pkg/msg/Name.msg` or `pkg/srv/Name.srv` -> (pkg, kind, Name).
struct DefinitionPath {
  std::string package;
  std::string kind;
  std::string name;
};

std::optional<DefinitionPath> split_definition_path(std::string_view rel) {
  auto parts = util::split(rel, '/');
  if (parts.size() != 3) return std::nullopt;
  std::string_view file = parts[2];
  auto dot = file.rfind('.');
  if (dot == std::string_view::npos) return std::nullopt;
  std::string_view ext = file.substr(dot + 1);
  if (ext != parts[1]) return std::nullopt;
  return DefinitionPath{std::string(parts[0]), std::string(ext), std::string(file.substr(0, dot))};
}

}  // namespace

SchemaRegistry::Builder& SchemaRegistry::Builder::add(MsgSpec spec) {
  std::string key = spec.full_name();
  messages_.try_emplace(std::move(key), std::move(spec));
  return *this;
}

SchemaRegistry::Builder& SchemaRegistry::Builder::add(SrvSpec spec) {
  std::string key = spec.full_name();
  if (services_.contains(key)) return *this;
  add(spec.request);
  add(spec.response);
  services_.emplace(std::move(key), std::move(spec));
  return *this;
}

SchemaRegistry::Builder& SchemaRegistry::Builder::add_all(const SchemaRegistry& other) {
  for (const auto& [name, spec] : other.messages_) messages_.try_emplace(name, spec);
  for (const auto& [name, spec] : other.services_) services_.try_emplace(name, spec);
  return *this;
}

SchemaRegistry::Builder& SchemaRegistry::Builder::add_root(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) return *this;
  std::vector<fs::path> files;
  for (const auto& pkg : fs::directory_iterator(root)) {
    if (!pkg.is_directory()) continue;
    for (const char* kind : {"msg", "srv"}) {
      fs::path dir = pkg.path() / kind;
      if (!fs::is_directory(dir)) continue;
      for (const auto& f : fs::directory_iterator(dir)) {
        if (f.path().extension() == std::string(".") + kind) files.push_back(f.path());
      }
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::string pkg = f.parent_path().parent_path().filename().string();
    std::string name = f.stem().string();
    if (f.extension() == ".msg") {
      add(parse_msg(read_file(f), pkg, name));
    } else {
      add(parse_srv(read_file(f), pkg, name));
    }
  }
  return *this;
}

SchemaRegistry::Builder& SchemaRegistry::Builder::add_builtin_corpus() {
  for (const auto& def : embedded_definitions()) {
    auto p = split_definition_path(def.path);
    if (!p) continue;
    if (p->kind == "msg") {
      add(parse_msg(def.text, p->package, p->name));
    } else {
      add(parse_srv(def.text, p->package, p->name));
    }
  }
  return *this;
}

SchemaRegistry SchemaRegistry::Builder::build() {
  SchemaRegistry r;
  r.messages_ = std::move(messages_);
  r.services_ = std::move(services_);
  messages_.clear();
  services_.clear();
  return r;
}

SchemaRegistry::SchemaRegistry() : cache_mutex_(std::make_unique<std::mutex>()) {}

SchemaRegistry::SchemaRegistry(const SchemaRegistry& other)
    : messages_(other.messages_), services_(other.services_), cache_mutex_(std::make_unique<std::mutex>()) {
  std::lock_guard lock(*other.cache_mutex_);
  md5_cache_ = other.md5_cache_;
}

SchemaRegistry& SchemaRegistry::operator=(const SchemaRegistry& other) {
  if (this != &other) {
    SchemaRegistry copy(other);
    *this = std::move(copy);
  }
  return *this;
}

SchemaRegistry::SchemaRegistry(SchemaRegistry&&) noexcept = default;
SchemaRegistry& SchemaRegistry::operator=(SchemaRegistry&&) noexcept = default;
SchemaRegistry::~SchemaRegistry() = default;

const MsgSpec* SchemaRegistry::find(std::string_view full_name) const {
  auto it = messages_.find(full_name);
  return it == messages_.end() ? nullptr : &it->second;
}

const SrvSpec* SchemaRegistry::find_service(std::string_view full_name) const {
  auto it = services_.find(full_name);
  return it == services_.end() ? nullptr : &it->second;
}

const MsgSpec& SchemaRegistry::at(std::string_view full_name) const {
  if (const auto* s = find(full_name)) return *s;
  throw UnresolvedType(std::string(full_name));
}

const SrvSpec& SchemaRegistry::service_at(std::string_view full_name) const {
  if (const auto* s = find_service(full_name)) return *s;
  throw UnresolvedType(std::string(full_name));
}

std::vector<std::string> SchemaRegistry::message_names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : messages_) out.push_back(name);
  return out;
}

std::vector<std::string> SchemaRegistry::service_names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : services_) out.push_back(name);
  return out;
}

std::string SchemaRegistry::cached_md5(std::string_view full_name) const {
  if (!cache_mutex_) return {};
  std::lock_guard lock(*cache_mutex_);
  auto it = md5_cache_.find(full_name);
  return it == md5_cache_.end() ? std::string() : it->second;
}

void SchemaRegistry::store_md5(std::string_view full_name, std::string md5) const {
  if (!cache_mutex_) return;
  std::lock_guard lock(*cache_mutex_);
  md5_cache_.insert_or_assign(std::string(full_name), std::move(md5));
}

const SchemaRegistry& builtin_corpus() {
  static const SchemaRegistry corpus = SchemaRegistry::Builder().add_builtin_corpus().build();
  return corpus;
}

namespace {

std::string md5_of_named(const NamedType& type, const SchemaRegistry& registry, std::vector<std::string>& path);

std::string md5_text_impl(const MsgSpec& spec, const SchemaRegistry& registry, std::vector<std::string>& path) {
  std::string out;
  for (const auto& c : spec.constants) {
    out += c.type.spelling() + " " + c.name + "=" + c.value_text + "\n";
  }
  for (const auto& f : spec.fields) {
    if (f.type.is_builtin()) {
      out += f.declaration() + "\n";
    } else {
      out += md5_of_named(f.type.named(), registry, path) + " " + f.name + "\n";
    }
  }
  // Reference tooling strips surrounding whitespace from the whole text.
  return std::string(util::trim(out));
}

std::string md5_of_named(const NamedType& type, const SchemaRegistry& registry, std::vector<std::string>& path) {
  std::string full = type.full_name();
  if (auto cached = registry.cached_md5(full); !cached.empty()) return cached;
  if (std::find(path.begin(), path.end(), full) != path.end()) {
    path.push_back(full);
    throw CyclicDependency(path);
  }
  const MsgSpec& dep = registry.at(full);
  path.push_back(full);
  std::string md5 = util::md5_hex(md5_text_impl(dep, registry, path));
  path.pop_back();
  registry.store_md5(full, md5);
  return md5;
}

void collect_dependencies(const MsgSpec& spec, const SchemaRegistry& registry, std::vector<std::string>& out,
                          std::vector<std::string>& path) {
  for (const auto& f : spec.fields) {
    if (f.type.is_builtin()) continue;
    std::string full = f.type.named().full_name();
    if (std::find(path.begin(), path.end(), full) != path.end()) {
      path.push_back(full);
      throw CyclicDependency(path);
    }
    if (std::find(out.begin(), out.end(), full) != out.end()) continue;
    out.push_back(full);
    path.push_back(full);
    collect_dependencies(registry.at(full), registry, out, path);
    path.pop_back();
  }
}

}  // namespace

std::string md5_text(const MsgSpec& spec, const SchemaRegistry& registry) {
  std::vector<std::string> path{spec.full_name()};
  return md5_text_impl(spec, registry, path);
}

std::string compute_md5(const MsgSpec& spec, const SchemaRegistry& registry) {
  return util::md5_hex(md5_text(spec, registry));
}

std::string compute_md5(std::string_view full_name, const SchemaRegistry& registry) {
  std::vector<std::string> path;
  return md5_of_named(split_type_name(full_name), registry, path);
}

std::string compute_srv_md5(const SrvSpec& spec, const SchemaRegistry& registry) {
  return util::md5_hex(md5_text(spec.request, registry) + md5_text(spec.response, registry));
}

std::vector<std::string> dependency_order(const MsgSpec& spec, const SchemaRegistry& registry) {
  std::vector<std::string> out;
  std::vector<std::string> path{spec.full_name()};
  collect_dependencies(spec, registry, out, path);
  return out;
}

std::string dependency_text(const MsgSpec& spec, const SchemaRegistry& registry) {
  std::string out = spec.source_text + "\n";
  for (const auto& dep : dependency_order(spec, registry)) {
    out += kBundleSeparator;
    out += "\nMSG: " + dep + "\n";
    out += registry.at(dep).source_text + "\n";
  }
  out.pop_back();
  return out;
}

SchemaRegistry parse_definition_bundle(std::string_view text, std::string_view root_name) {
  std::vector<std::string> blocks(1);
  std::vector<bool> block_started(1, false);
  for (std::string_view line : util::split(text, '\n')) {
    std::string_view bare = line;
    if (!bare.empty() && bare.back() == '\r') bare.remove_suffix(1);
    if (bare == kBundleSeparator) {
      blocks.emplace_back();
      block_started.push_back(false);
      continue;
    }
    if (block_started.back()) blocks.back() += '\n';
    blocks.back() += line;
    block_started.back() = true;
  }

  NamedType root = split_type_name(root_name);
  SchemaRegistry::Builder builder;
  builder.add(parse_msg(blocks[0], root.package, root.name));
  for (size_t i = 1; i < blocks.size(); ++i) {
    std::string_view block = blocks[i];
    auto nl = block.find('\n');
    std::string_view header = util::trim(block.substr(0, nl));
    if (!header.starts_with("MSG:")) throw SyntaxError(0, "bundle block " + std::to_string(i) + " lacks 'MSG:' line");
    std::string_view type_name = util::trim(header.substr(4));
    auto slash = type_name.find('/');
    if (slash == std::string_view::npos) throw SyntaxError(0, "bundle block type '" + std::string(type_name) + "' lacks package");
    NamedType t = split_type_name(type_name);
    std::string_view body = nl == std::string_view::npos ? std::string_view() : block.substr(nl + 1);
    builder.add(parse_msg(body, t.package, t.name));
  }
  return builder.build();
}

}  // namespace roslite::msg

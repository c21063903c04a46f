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

#ifndef ROSLITE_MSG_REGISTRY_H_
#define ROSLITE_MSG_REGISTRY_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roslite/msg/schema.h"

namespace roslite::msg {

// Immutable set of message and service schemas keyed by full type name.
// Checksums are memoized per type; the memo is internally synchronized so a
// built registry can be shared across threads.
class SchemaRegistry {
 public:
  class Builder {
   public:
    // Later additions of an existing name are ignored (first wins).
    Builder& add(MsgSpec spec);
    Builder& add(SrvSpec spec);
    Builder& add_all(const SchemaRegistry& other);
    // Loads every `<root>/<pkg>/msg/*.msg` and `<root>/<pkg>/srv/*.srv`.
    // Roots added earlier take precedence.
    Builder& add_root(const std::filesystem::path& root);
    // The standard definitions compiled into the library.
    Builder& add_builtin_corpus();
    SchemaRegistry build();

   private:
    std::map<std::string, MsgSpec, std::less<>> messages_;
    std::map<std::string, SrvSpec, std::less<>> services_;
  };

  SchemaRegistry();
  SchemaRegistry(const SchemaRegistry& other);
  SchemaRegistry& operator=(const SchemaRegistry& other);
  SchemaRegistry(SchemaRegistry&&) noexcept;
  SchemaRegistry& operator=(SchemaRegistry&&) noexcept;
  ~SchemaRegistry();

  const MsgSpec* find(std::string_view full_name) const;
  const SrvSpec* find_service(std::string_view full_name) const;
  // Throws UnresolvedType.
  const MsgSpec& at(std::string_view full_name) const;
  const SrvSpec& service_at(std::string_view full_name) const;

  std::vector<std::string> message_names() const;
  std::vector<std::string> service_names() const;
  std::size_t size() const { return messages_.size(); }

  std::string cached_md5(std::string_view full_name) const;
  void store_md5(std::string_view full_name, std::string md5) const;

 private:
  std::map<std::string, MsgSpec, std::less<>> messages_;
  std::map<std::string, SrvSpec, std::less<>> services_;
  mutable std::unique_ptr<std::mutex> cache_mutex_;
  mutable std::map<std::string, std::string, std::less<>> md5_cache_;
};

// The standard definitions compiled into the library (built once).
const SchemaRegistry& builtin_corpus();

// Raw vendored definition files: relative path (`pkg/msg/Name.msg`) -> text.
struct EmbeddedDefinition {
  const char* path;
  const char* text;
};
std::span<const EmbeddedDefinition> embedded_definitions();

// Text whose MD5 is the type checksum: constants, then fields with nested
// message types replaced by their own checksums.
std::string md5_text(const MsgSpec& spec, const SchemaRegistry& registry);
std::string compute_md5(const MsgSpec& spec, const SchemaRegistry& registry);
std::string compute_md5(std::string_view full_name, const SchemaRegistry& registry);
std::string compute_srv_md5(const SrvSpec& spec, const SchemaRegistry& registry);

// Unique transitive dependencies in first-encounter depth-first order.
std::vector<std::string> dependency_order(const MsgSpec& spec, const SchemaRegistry& registry);

// The `message_definition` text sent in the TCPROS handshake.
std::string dependency_text(const MsgSpec& spec, const SchemaRegistry& registry);

// Inverse of dependency_text: one registry holding the root (named
// `root_name`) and every `MSG:` block.
SchemaRegistry parse_definition_bundle(std::string_view text, std::string_view root_name);

}  // namespace roslite::msg

#endif  // ROSLITE_MSG_REGISTRY_H_

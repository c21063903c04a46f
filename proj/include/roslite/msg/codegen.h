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

#ifndef ROSLITE_MSG_CODEGEN_H_
#define ROSLITE_MSG_CODEGEN_H_

#include <filesystem>
#include <string>

#include "roslite/msg/registry.h"
#include "roslite/msg/schema.h"

namespace roslite::msg {

// Emits a self-contained C++ header for one message or service: type name,
// checksum and definition constants, a value struct, and wire routines that
// match the dynamic codec byte for byte. Output is deterministic.
std::string emit_source(const MsgSpec& spec, const SchemaRegistry& registry);
std::string emit_source(const SrvSpec& spec, const SchemaRegistry& registry);

// `<pkg>/<Name>.h`, the include path generated headers use for each other.
std::filesystem::path generated_header_path(const std::string& package, const std::string& name);

// Writes headers for every message and service in `registry` under `out_dir`.
// Returns the number of files written.
std::size_t emit_all(const SchemaRegistry& registry, const std::filesystem::path& out_dir);

}  // namespace roslite::msg

#endif  // ROSLITE_MSG_CODEGEN_H_

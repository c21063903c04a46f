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

// Build-time helper: emits C++ headers for the whole vendored corpus plus an
// X-macro index (`corpus_types.inc`) listing every generated message struct.
#include <fstream>
#include <iostream>

#include "roslite/msg/codegen.h"
#include "roslite/msg/registry.h"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_corpus_headers <out_dir>\n";
    return 64;
  }
  const auto& reg = roslite::msg::builtin_corpus();
  std::filesystem::path out = argv[1];
  roslite::msg::emit_all(reg, out);
  std::ofstream index(out / "corpus_types.inc", std::ios::trunc);
  for (const auto& name : reg.message_names()) {
    const auto& spec = reg.at(name);
    index << "ROSLITE_CORPUS_TYPE(" << spec.package << ", " << spec.name << ")\n";
  }
  std::ofstream includes(out / "corpus_includes.inc", std::ios::trunc);
  for (const auto& name : reg.message_names()) {
    const auto& spec = reg.at(name);
    // Service halves live in the service's header.
    bool part = false;
    for (const auto& srv_name : reg.service_names()) {
      const auto& srv = reg.service_at(srv_name);
      if (srv.request.full_name() == name || srv.response.full_name() == name) part = true;
    }
    if (!part) includes << "#include \"" << spec.package << "/" << spec.name << ".h\"\n";
  }
  for (const auto& name : reg.service_names()) {
    const auto& srv = reg.service_at(name);
    includes << "#include \"" << srv.package << "/" << srv.name << ".h\"\n";
  }
  return 0;
}

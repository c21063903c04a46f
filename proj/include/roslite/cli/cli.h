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

#ifndef ROSLITE_CLI_CLI_H_
#define ROSLITE_CLI_CLI_H_

#include <atomic>
#include <iosfwd>
#include <string>
#include <vector>

#include "roslite/bridge/json_mapping.h"
#include "roslite/xmlrpc/value.h"

// The `roslite` command line. Exit codes:
//   0 ok, 1 other failure (unknown topic/node), 2 master, 3 handshake,
//   4 timeout, 5 service, 6 param, 64 usage (bad flags, unknown type,
//   malformed or mismatching value literal).
namespace roslite::cli {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kMaster = 2;
inline constexpr int kHandshake = 3;
inline constexpr int kTimeout = 4;
inline constexpr int kService = 5;
inline constexpr int kParam = 6;
inline constexpr int kUsage = 64;
}  // namespace exit_code

// Failure carrying an explicit exit code.
class CliFailure : public Error {
 public:
  CliFailure(int code, const std::string& what) : Error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

// Runs one invocation. `args` excludes the program name. Data goes to `out`,
// diagnostics to `err`. Long-running commands return once `*stop` turns true
// (or on their own --duration / --count).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::atomic<bool>* stop = nullptr);

// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);

// Parameter values as JSON. Binary becomes a base64 string; integers outside
// the 32-bit range and non-integral numbers become doubles.
bridge::Json param_to_json(const xmlrpc::XrValue& value);
xmlrpc::XrValue json_to_param(const bridge::Json& json);

// Indented `key: value` text as printed by `topic echo` and `service call`.
std::string to_yaml(const bridge::Json& json);

}  // namespace roslite::cli

#endif  // ROSLITE_CLI_CLI_H_

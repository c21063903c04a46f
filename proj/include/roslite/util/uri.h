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

#ifndef ROSLITE_UTIL_URI_H_
#define ROSLITE_UTIL_URI_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "roslite/util/error.h"

namespace roslite::util {

class UriError : public Error {
 public:
  using Error::Error;
};

// scheme://host[:port][/path]. IPv6 hosts use brackets.
struct Uri {
  std::string scheme;
  std::string host;
  std::uint16_t port = 0;
  std::string path;  // "/" when absent

  std::string to_string() const;
};

// `default_port` applies when the authority has none.
Uri parse_uri(std::string_view text, std::uint16_t default_port = 0);

std::string make_uri(std::string_view scheme, std::string_view host, std::uint16_t port, std::string_view path = "/");

}  // namespace roslite::util

#endif  // ROSLITE_UTIL_URI_H_

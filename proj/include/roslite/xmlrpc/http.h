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

#ifndef ROSLITE_XMLRPC_HTTP_H_
#define ROSLITE_XMLRPC_HTTP_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roslite/net/socket.h"
#include "roslite/util/error.h"

// Just enough HTTP/1.1 for XML-RPC: Content-Length bodies, Connection: close.
namespace roslite::http {

// status is the HTTP status code, or 0 when the message itself is malformed.
class HttpError : public Error {
 public:
  HttpError(int status, const std::string& reason)
      : Error(status ? "http status " + std::to_string(status) + ": " + reason : "http: " + reason), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct Message {
  std::string start_line;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;

  // Case-insensitive lookup.
  const std::string* header(std::string_view name) const;
  // Response status code; HttpError if the start line is not a status line.
  int status() const;
  std::string method() const;
  std::string target() const;
};

inline constexpr std::size_t kDefaultMaxMessage = 64u << 20;

// Parses a complete message held in memory.
Message parse(std::string_view bytes, std::size_t max_size = kDefaultMaxMessage);

// Reads one message. Without Content-Length the body runs to EOF.
Message read(net::Socket& socket, net::Deadline deadline, std::size_t max_size = kDefaultMaxMessage);

std::string make_request(std::string_view method, std::string_view host, std::string_view target,
                         std::string_view content_type, std::string_view body);
std::string make_response(int status, std::string_view reason, std::string_view content_type, std::string_view body);

}  // namespace roslite::http

#endif  // ROSLITE_XMLRPC_HTTP_H_

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

#include "roslite/util/uri.h"

#include <charconv>

#include "roslite/util/strings.h"

namespace roslite::util {

Uri parse_uri(std::string_view text, std::uint16_t default_port) {
  Uri uri;
  std::size_t sep = text.find("://");
  if (sep == std::string_view::npos || sep == 0) throw UriError("uri without scheme: " + std::string(text));
  uri.scheme = to_lower(text.substr(0, sep));
  std::string_view rest = text.substr(sep + 3);
  std::size_t slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  uri.path = slash == std::string_view::npos ? "/" : std::string(rest.substr(slash));
  std::string_view port_text;
  if (!authority.empty() && authority.front() == '[') {
    std::size_t close = authority.find(']');
    if (close == std::string_view::npos) throw UriError("unterminated IPv6 host: " + std::string(text));
    uri.host = std::string(authority.substr(1, close - 1));
    std::string_view after = authority.substr(close + 1);
    if (!after.empty()) {
      if (after.front() != ':') throw UriError("bad authority: " + std::string(text));
      port_text = after.substr(1);
    }
  } else {
    std::size_t colon = authority.rfind(':');
    uri.host = std::string(authority.substr(0, colon));
    if (colon != std::string_view::npos) port_text = authority.substr(colon + 1);
  }
  if (uri.host.empty()) throw UriError("uri without host: " + std::string(text));
  uri.port = default_port;
  if (!port_text.empty()) {
    unsigned value = 0;
    auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), value);
    if (ec != std::errc() || p != port_text.data() + port_text.size() || value > 65535) {
      throw UriError("bad port in uri: " + std::string(text));
    }
    uri.port = static_cast<std::uint16_t>(value);
  }
  return uri;
}

std::string make_uri(std::string_view scheme, std::string_view host, std::uint16_t port, std::string_view path) {
  std::string out(scheme);
  out += "://";
  if (host.find(':') != std::string_view::npos) {
    out += '[';
    out += host;
    out += ']';
  } else {
    out += host;
  }
  out += ':';
  out += std::to_string(port);
  out += path;
  return out;
}

std::string Uri::to_string() const { return make_uri(scheme, host, port, path); }

}  // namespace roslite::util

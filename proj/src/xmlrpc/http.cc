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

#include "roslite/xmlrpc/http.h"

#include <charconv>

#include "roslite/util/strings.h"

namespace roslite::http {

const std::string* Message::header(std::string_view name) const {
  for (const auto& [k, v] : headers) {
    if (k.size() == name.size() && util::starts_with_ci(k, name)) return &v;
  }
  return nullptr;
}

int Message::status() const {
  auto parts = util::split_whitespace(start_line);
  if (parts.size() < 2 || !parts[0].starts_with("HTTP/")) throw HttpError(0, "not a status line: " + start_line);
  int code = 0;
  auto [p, ec] = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), code);
  if (ec != std::errc() || p != parts[1].data() + parts[1].size() || code < 100 || code > 999) {
    throw HttpError(0, "bad status code in: " + start_line);
  }
  return code;
}

std::string Message::method() const {
  auto parts = util::split_whitespace(start_line);
  return parts.empty() ? std::string() : std::string(parts[0]);
}

std::string Message::target() const {
  auto parts = util::split_whitespace(start_line);
  return parts.size() < 2 ? std::string() : std::string(parts[1]);
}

namespace {

constexpr std::size_t kMaxHeaderBytes = 64 * 1024;

// Parses start line and headers from `head` (without the blank line).
Message parse_head(std::string_view head) {
  Message msg;
  bool first = true;
  std::size_t pos = 0;
  while (pos <= head.size()) {
    std::size_t eol = head.find('\n', pos);
    std::string_view line = head.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (first) {
      if (line.empty()) throw HttpError(0, "empty start line");
      msg.start_line = std::string(line);
      first = false;
    } else if (!line.empty()) {
      std::size_t colon = line.find(':');
      if (colon == std::string_view::npos || colon == 0) throw HttpError(0, "malformed header line");
      msg.headers.emplace_back(std::string(util::trim(line.substr(0, colon))),
                               std::string(util::trim(line.substr(colon + 1))));
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  if (const auto* te = msg.header("Transfer-Encoding"); te && util::to_lower(*te) != "identity") {
    throw HttpError(0, "transfer encoding '" + *te + "' not supported");
  }
  return msg;
}

// -1 when absent.
long long content_length(const Message& msg, std::size_t max_size) {
  const auto* cl = msg.header("Content-Length");
  if (!cl) return -1;
  unsigned long long n = 0;
  auto [p, ec] = std::from_chars(cl->data(), cl->data() + cl->size(), n);
  if (cl->empty() || ec != std::errc() || p != cl->data() + cl->size()) throw HttpError(0, "bad Content-Length");
  if (n > max_size) throw HttpError(0, "body larger than limit");
  return static_cast<long long>(n);
}

// Finds the end of the header block; returns offset past the blank line.
std::size_t find_head_end(std::string_view data, std::size_t* head_len) {
  std::size_t crlf = data.find("\r\n\r\n");
  std::size_t lf = data.find("\n\n");
  if (crlf != std::string_view::npos && (lf == std::string_view::npos || crlf < lf)) {
    *head_len = crlf;
    return crlf + 4;
  }
  if (lf != std::string_view::npos) {
    *head_len = lf;
    return lf + 2;
  }
  return std::string_view::npos;
}

}  // namespace

Message parse(std::string_view bytes, std::size_t max_size) {
  std::size_t head_len = 0;
  std::size_t body_start = find_head_end(bytes, &head_len);
  if (body_start == std::string_view::npos) throw HttpError(0, "incomplete header block");
  Message msg = parse_head(bytes.substr(0, head_len));
  long long len = content_length(msg, max_size);
  std::string_view body = bytes.substr(body_start);
  if (len >= 0) {
    if (body.size() < static_cast<std::size_t>(len)) throw HttpError(0, "body shorter than Content-Length");
    body = body.substr(0, static_cast<std::size_t>(len));
  }
  msg.body = std::string(body);
  return msg;
}

Message read(net::Socket& socket, net::Deadline deadline, std::size_t max_size) {
  std::string buf;
  std::uint8_t chunk[8192];
  std::size_t head_len = 0;
  std::size_t body_start = std::string::npos;
  while (true) {
    body_start = find_head_end(buf, &head_len);
    if (body_start != std::string::npos) break;
    if (buf.size() > kMaxHeaderBytes) throw HttpError(0, "header block too large");
    std::size_t n = socket.recv_some(chunk, deadline);
    if (n == 0) {
      if (buf.empty()) throw net::Disconnected("connection closed before request");
      throw HttpError(0, "connection closed inside header block");
    }
    buf.append(reinterpret_cast<const char*>(chunk), n);
  }
  Message msg = parse_head(std::string_view(buf).substr(0, head_len));
  long long len = content_length(msg, max_size);
  std::string body = buf.substr(body_start);
  if (len >= 0) {
    std::size_t want = static_cast<std::size_t>(len);
    if (body.size() < want) {
      std::size_t have = body.size();
      body.resize(want);
      socket.recv_exact(std::span<std::uint8_t>(reinterpret_cast<std::uint8_t*>(body.data()) + have, want - have),
                        deadline);
    }
    body.resize(want);
  } else {
    while (true) {
      std::size_t n = socket.recv_some(chunk, deadline);
      if (n == 0) break;
      body.append(reinterpret_cast<const char*>(chunk), n);
      if (body.size() > max_size) throw HttpError(0, "body larger than limit");
    }
  }
  msg.body = std::move(body);
  return msg;
}

std::string make_request(std::string_view method, std::string_view host, std::string_view target,
                         std::string_view content_type, std::string_view body) {
  std::string out;
  out.reserve(body.size() + 160);
  out.append(method).append(" ").append(target).append(" HTTP/1.1\r\n");
  out.append("Host: ").append(host).append("\r\n");
  out.append("User-Agent: roslite\r\n");
  out.append("Content-Type: ").append(content_type).append("\r\n");
  out.append("Content-Length: ").append(std::to_string(body.size())).append("\r\n");
  out.append("Connection: close\r\n\r\n");
  out.append(body);
  return out;
}

std::string make_response(int status, std::string_view reason, std::string_view content_type, std::string_view body) {
  std::string out;
  out.reserve(body.size() + 160);
  out.append("HTTP/1.1 ").append(std::to_string(status)).append(" ").append(reason).append("\r\n");
  out.append("Server: roslite\r\n");
  out.append("Content-Type: ").append(content_type).append("\r\n");
  out.append("Content-Length: ").append(std::to_string(body.size())).append("\r\n");
  out.append("Connection: close\r\n\r\n");
  out.append(body);
  return out;
}

}  // namespace roslite::http

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

#include "roslite/xmlrpc/client.h"

#include "roslite/util/uri.h"

namespace roslite::xmlrpc {

XrValue RosRpcReply::to_value() const {
  return XrValue::seq({XrValue(static_cast<std::int32_t>(code)), XrValue(status_message), payload});
}

RosRpcReply RosRpcReply::from_value(const XrValue& v) {
  if (!v.is_seq() || v.as_seq().size() != 3) {
    throw ProtocolError("ROS reply must be a 3-element array, got " + v.debug_string());
  }
  const auto& s = v.as_seq();
  if (!s[0].is_int() || !s[1].is_str()) throw ProtocolError("ROS reply must be (int, string, value)");
  return RosRpcReply{s[0].as_int(), s[1].as_str(), s[2]};
}

RosRpcReply success(std::string message, XrValue payload) {
  return RosRpcReply{RosRpcReply::kSuccess, std::move(message), std::move(payload)};
}

RosRpcReply failure(std::string message, XrValue payload) {
  return RosRpcReply{RosRpcReply::kFailure, std::move(message), std::move(payload)};
}

Response Client::call(const std::string& uri, const std::string& method, const Params& params) const {
  util::Uri target = util::parse_uri(uri, 80);
  if (target.scheme != "http") throw util::UriError("xml-rpc needs an http uri: " + uri);
  std::string request = encode_call(method, params, target.host + ":" + std::to_string(target.port), target.path);
  for (int attempt = 0;; ++attempt) {
    net::Deadline deadline = net::Clock::now() + timeout_;
    try {
      net::Socket sock = net::Socket::connect(target.host, target.port, timeout_);
      sock.send_all(request, deadline);
      http::Message reply = http::read(sock, deadline);
      int status = reply.status();
      if (status != 200) throw HttpError(status, reply.start_line);
      return decode_response_body(reply.body);
    } catch (const TimeoutError&) {
      throw;
    } catch (const IoError&) {
      if (attempt >= 1) throw;
    }
  }
}

XrValue Client::call_value(const std::string& uri, const std::string& method, const Params& params) const {
  Response r = call(uri, method, params);
  if (auto* f = std::get_if<Fault>(&r)) throw FaultError(*f);
  return std::get<XrValue>(std::move(r));
}

RosRpcReply Client::call_ros(const std::string& uri, const std::string& method, const Params& params) const {
  return RosRpcReply::from_value(call_value(uri, method, params));
}

}  // namespace roslite::xmlrpc

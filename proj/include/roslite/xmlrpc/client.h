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

#ifndef ROSLITE_XMLRPC_CLIENT_H_
#define ROSLITE_XMLRPC_CLIENT_H_

#include <chrono>
#include <string>

#include "roslite/xmlrpc/codec.h"

namespace roslite::xmlrpc {

class ProtocolError : public Error {
 public:
  using Error::Error;
};

// The (code, statusMessage, payload) triple every ROS API call returns.
struct RosRpcReply {
  static constexpr int kSuccess = 1;
  static constexpr int kFailure = 0;
  static constexpr int kError = -1;

  int code = kSuccess;
  std::string status_message;
  XrValue payload;

  bool ok() const { return code == kSuccess; }
  XrValue to_value() const;
  // ProtocolError unless `v` is a 3-element Seq of (Int, Str, any).
  static RosRpcReply from_value(const XrValue& v);
};

RosRpcReply success(std::string message, XrValue payload = XrValue(std::int32_t{0}));
RosRpcReply failure(std::string message, XrValue payload = XrValue(std::int32_t{0}));

// Blocking XML-RPC client. Connection failures before a response are retried
// once; timeouts are not.
class Client {
 public:
  explicit Client(std::chrono::milliseconds timeout = std::chrono::seconds(3)) : timeout_(timeout) {}

  // Fault is returned, not thrown. Throws HttpError, XmlSyntaxError,
  // TimeoutError, IoError.
  Response call(const std::string& uri, const std::string& method, const Params& params) const;
  // As call(), but a Fault becomes FaultError.
  XrValue call_value(const std::string& uri, const std::string& method, const Params& params) const;
  // As call_value(), then decoded as a RosRpcReply.
  RosRpcReply call_ros(const std::string& uri, const std::string& method, const Params& params) const;

  std::chrono::milliseconds timeout() const { return timeout_; }

 private:
  std::chrono::milliseconds timeout_;
};

}  // namespace roslite::xmlrpc

#endif  // ROSLITE_XMLRPC_CLIENT_H_

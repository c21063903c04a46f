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

#ifndef ROSLITE_XMLRPC_CODEC_H_
#define ROSLITE_XMLRPC_CODEC_H_

#include <string>
#include <string_view>
#include <variant>

#include "roslite/util/xml.h"
#include "roslite/xmlrpc/http.h"
#include "roslite/xmlrpc/value.h"

namespace roslite::xmlrpc {

using xml::DepthExceeded;
using xml::XmlSyntaxError;
using http::HttpError;

inline constexpr int kMaxValueDepth = 64;

struct Fault {
  int code = 0;
  std::string message;
  bool operator==(const Fault&) const = default;
};

class FaultError : public Error {
 public:
  explicit FaultError(Fault f)
      : Error("xml-rpc fault " + std::to_string(f.code) + ": " + f.message), fault_(std::move(f)) {}
  const Fault& fault() const { return fault_; }

 private:
  Fault fault_;
};

using Response = std::variant<XrValue, Fault>;

struct MethodCall {
  std::string method;
  Params params;
};

std::string encode_value(const XrValue& value);
std::string encode_call_body(std::string_view method, const Params& params);
std::string encode_response_body(const XrValue& value);
std::string encode_fault_body(const Fault& fault);

// Full HTTP messages.
std::string encode_call(std::string_view method, const Params& params, std::string_view host = "localhost",
                        std::string_view path = "/");
std::string encode_response(const XrValue& value);
std::string encode_fault(const Fault& fault);

// `http_bytes` is a complete HTTP response. HttpError on non-200 status.
Response decode_response(std::string_view http_bytes);
Response decode_response_body(std::string_view xml_body);
MethodCall decode_call_body(std::string_view xml_body);
XrValue decode_value(const xml::Element& value_element);

}  // namespace roslite::xmlrpc

#endif  // ROSLITE_XMLRPC_CODEC_H_

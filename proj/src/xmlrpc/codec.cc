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

#include "roslite/xmlrpc/codec.h"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "roslite/util/digest.h"
#include "roslite/util/strings.h"

namespace roslite::xmlrpc {

namespace {

// value + array + data per level, plus the envelope.
constexpr int kMaxXmlDepth = 3 * kMaxValueDepth + 8;

void encode_into(std::string& out, const XrValue& v) {
  out += "<value>";
  switch (v.kind()) {
    case XrValue::Kind::kInt:
      out += "<i4>" + std::to_string(v.as_int()) + "</i4>";
      break;
    case XrValue::Kind::kBool:
      out += v.as_bool() ? "<boolean>1</boolean>" : "<boolean>0</boolean>";
      break;
    case XrValue::Kind::kStr:
      out += "<string>" + xml::escape(v.as_str()) + "</string>";
      break;
    case XrValue::Kind::kDouble:
      out += "<double>" + util::format_double(v.as_double()) + "</double>";
      break;
    case XrValue::Kind::kSeq:
      out += "<array><data>";
      for (const auto& item : v.as_seq()) encode_into(out, item);
      out += "</data></array>";
      break;
    case XrValue::Kind::kRecord:
      out += "<struct>";
      for (const auto& [k, item] : v.as_record()) {
        out += "<member><name>" + xml::escape(k) + "</name>";
        encode_into(out, item);
        out += "</member>";
      }
      out += "</struct>";
      break;
    case XrValue::Kind::kBinary:
      out += "<base64>" + util::base64_encode(std::span<const std::uint8_t>(v.as_binary().bytes)) + "</base64>";
      break;
  }
  out += "</value>";
}

[[noreturn]] void malformed(const std::string& reason) { throw XmlSyntaxError(0, reason); }

bool only_space(std::string_view s) { return util::trim(s).empty(); }

XrValue decode_at(const xml::Element& el, int depth) {
  if (el.name != "value") malformed("expected <value>, found <" + el.name + ">");
  if (depth > kMaxValueDepth) throw DepthExceeded(0, kMaxValueDepth);
  if (el.children.empty()) return XrValue(el.text);
  if (el.children.size() != 1 || !only_space(el.text)) malformed("<value> must hold exactly one typed element");
  const xml::Element& t = el.children.front();
  auto leaf = [&]() -> std::string_view {
    if (!t.children.empty()) malformed("<" + t.name + "> cannot contain elements");
    return t.text;
  };
  if (t.name == "i4" || t.name == "int") {
    std::string_view text = util::trim(leaf());
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    std::int32_t n = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (text.empty() || ec != std::errc() || p != text.data() + text.size()) malformed("bad integer '" + std::string(text) + "'");
    return XrValue(n);
  }
  if (t.name == "boolean") {
    std::string_view text = util::trim(leaf());
    if (text == "1") return XrValue(true);
    if (text == "0") return XrValue(false);
    malformed("bad boolean '" + std::string(text) + "'");
  }
  if (t.name == "string") return XrValue(std::string(leaf()));
  if (t.name == "double") {
    std::string text(util::trim(leaf()));
    char* end = nullptr;
    double d = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) malformed("bad double '" + text + "'");
    return XrValue(d);
  }
  if (t.name == "base64") {
    std::string compact;
    for (char c : leaf()) {
      if (c != ' ' && c != '\n' && c != '\r' && c != '\t') compact += c;
    }
    auto bytes = util::base64_decode(compact);
    if (!bytes) malformed("bad base64 payload");
    return XrValue(Binary{std::move(*bytes)});
  }
  if (t.name == "array") {
    const xml::Element* data = t.child("data");
    if (!data || t.children.size() != 1) malformed("<array> must contain one <data>");
    XrValue::Seq items;
    items.reserve(data->children.size());
    for (const auto& item : data->children) items.push_back(decode_at(item, depth + 1));
    return XrValue(std::move(items));
  }
  if (t.name == "struct") {
    XrValue::Record members;
    for (const auto& m : t.children) {
      if (m.name != "member") malformed("<struct> may only contain <member>");
      const xml::Element* name = m.child("name");
      const xml::Element* value = m.child("value");
      if (!name || !value || m.children.size() != 2) malformed("<member> needs <name> and <value>");
      for (const auto& [k, _] : members) {
        if (k == name->text) malformed("duplicate struct member '" + name->text + "'");
      }
      members.emplace_back(name->text, decode_at(*value, depth + 1));
    }
    return XrValue(std::move(members));
  }
  if (t.name == "dateTime.iso8601") return XrValue(std::string(leaf()));
  malformed("unknown value type <" + t.name + ">");
}

XrValue::Seq decode_params(const xml::Element* params) {
  XrValue::Seq out;
  if (!params) return out;
  for (const auto& p : params->children) {
    if (p.name != "param") malformed("<params> may only contain <param>");
    const xml::Element* v = p.child("value");
    if (!v || p.children.size() != 1) malformed("<param> needs one <value>");
    out.push_back(decode_at(*v, 1));
  }
  return out;
}

}  // namespace

std::string encode_value(const XrValue& value) {
  std::string out;
  encode_into(out, value);
  return out;
}

std::string encode_call_body(std::string_view method, const Params& params) {
  std::string out = "<?xml version=\"1.0\"?><methodCall><methodName>";
  out += xml::escape(method);
  out += "</methodName><params>";
  for (const auto& p : params) {
    out += "<param>";
    encode_into(out, p);
    out += "</param>";
  }
  out += "</params></methodCall>";
  return out;
}

std::string encode_response_body(const XrValue& value) {
  std::string out = "<?xml version=\"1.0\"?><methodResponse><params><param>";
  encode_into(out, value);
  out += "</param></params></methodResponse>";
  return out;
}

std::string encode_fault_body(const Fault& fault) {
  std::string out = "<?xml version=\"1.0\"?><methodResponse><fault>";
  encode_into(out, XrValue::record({{"faultCode", fault.code}, {"faultString", fault.message}}));
  out += "</fault></methodResponse>";
  return out;
}

std::string encode_call(std::string_view method, const Params& params, std::string_view host, std::string_view path) {
  return http::make_request("POST", host, path, "text/xml", encode_call_body(method, params));
}

std::string encode_response(const XrValue& value) {
  return http::make_response(200, "OK", "text/xml", encode_response_body(value));
}

std::string encode_fault(const Fault& fault) {
  return http::make_response(200, "OK", "text/xml", encode_fault_body(fault));
}

Response decode_response_body(std::string_view xml_body) {
  xml::Element root = xml::parse(xml_body, kMaxXmlDepth);
  if (root.name != "methodResponse") malformed("expected <methodResponse>, found <" + root.name + ">");
  if (const xml::Element* fault = root.child("fault")) {
    const xml::Element* v = fault->child("value");
    if (!v) malformed("<fault> without <value>");
    XrValue fv = decode_at(*v, 1);
    Fault f;
    if (fv.is_record()) {
      if (const auto* c = fv.find("faultCode"); c && c->is_int()) f.code = c->as_int();
      if (const auto* s = fv.find("faultString"); s && s->is_str()) f.message = s->as_str();
    }
    return f;
  }
  XrValue::Seq params = decode_params(root.child("params"));
  if (params.size() != 1) malformed("<methodResponse> must carry exactly one param");
  return std::move(params.front());
}

Response decode_response(std::string_view http_bytes) {
  http::Message msg = http::parse(http_bytes);
  int status = msg.status();
  if (status != 200) throw HttpError(status, msg.start_line);
  return decode_response_body(msg.body);
}

MethodCall decode_call_body(std::string_view xml_body) {
  xml::Element root = xml::parse(xml_body, kMaxXmlDepth);
  if (root.name != "methodCall") malformed("expected <methodCall>, found <" + root.name + ">");
  const xml::Element* name = root.child("methodName");
  if (!name || util::trim(name->text).empty()) malformed("missing <methodName>");
  MethodCall call;
  call.method = std::string(util::trim(name->text));
  call.params = decode_params(root.child("params"));
  return call;
}

XrValue decode_value(const xml::Element& value_element) { return decode_at(value_element, 1); }

}  // namespace roslite::xmlrpc

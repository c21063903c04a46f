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

#include <gtest/gtest.h>

#include <cstring>
#include <fstream>
#include <future>
#include <random>
#include <sstream>
#include <thread>

#include "roslite/util/xml.h"
#include "roslite/xmlrpc/client.h"
#include "roslite/xmlrpc/server.h"

namespace roslite::xmlrpc {
namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(ROSLITE_TEST_DATA_DIR) + "/xmlrpc/" + name, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Xml, ParsesElementsAttributesAndEntities) {
  auto root = xml::parse(
      "<?xml version=\"1.0\"?>\n<!-- c --><!DOCTYPE r [<!ELEMENT r ANY>]>"
      "<r a='1' b=\"x&amp;y\"><c/>t&lt;&#65;&#x42;<![CDATA[<raw>]]><d>in</d></r>");
  EXPECT_EQ(root.name, "r");
  EXPECT_EQ(*root.attr("b"), "x&y");
  EXPECT_EQ(root.children.size(), 2u);
  EXPECT_EQ(root.text, "t<AB<raw>");
  EXPECT_EQ(root.child("d")->text, "in");
}

TEST(Xml, RejectsMalformed) {
  for (const char* bad : {"", "<a>", "<a></b>", "<a b=1/>", "<a>&bogus;</a>", "<a/><b/>", "<a b='1' b='2'/>",
                          "<a>&#0;</a>", "<a><![CDATA[x</a>"}) {
    EXPECT_THROW(xml::parse(bad), xml::XmlSyntaxError) << bad;
  }
}

TEST(Xml, DepthLimit) {
  std::string doc;
  for (int i = 0; i < 70; ++i) doc += "<a>";
  for (int i = 0; i < 70; ++i) doc += "</a>";
  EXPECT_THROW(xml::parse(doc, 64), xml::DepthExceeded);
  EXPECT_NO_THROW(xml::parse(doc, 70));
}

TEST(Encode, ScalarForms) {
  EXPECT_NE(encode_call_body("m", {XrValue(3)}).find("<value><i4>3</i4></value>"), std::string::npos);
  EXPECT_EQ(encode_value(XrValue(true)), "<value><boolean>1</boolean></value>");
  EXPECT_EQ(encode_value(XrValue("")), "<value><string></string></value>");
  EXPECT_EQ(encode_value(XrValue(0.1)), "<value><double>0.1</double></value>");
  EXPECT_EQ(encode_value(XrValue("a<b")), "<value><string>a&lt;b</string></value>");
}

TEST(Encode, HttpRequestFraming) {
  std::string req = encode_call("getPid", {XrValue("/caller")}, "host:11311", "/");
  auto msg = http::parse(req);
  EXPECT_EQ(msg.start_line, "POST / HTTP/1.1");
  EXPECT_EQ(*msg.header("content-type"), "text/xml");
  EXPECT_EQ(std::stoul(*msg.header("Content-Length")), msg.body.size());
  EXPECT_TRUE(msg.body.starts_with("<?xml version=\"1.0\"?><methodCall>"));
}

TEST(Decode, EmptyStringTypedAndUntyped) {
  for (const char* form : {"<value><string></string></value>", "<value></value>", "<value/>", "<value><string/></value>"}) {
    std::string body = std::string("<methodResponse><params><param>") + form + "</param></params></methodResponse>";
    EXPECT_EQ(std::get<XrValue>(decode_response_body(body)), XrValue("")) << form;
  }
  std::string untyped = "<methodResponse><params><param><value>hi there</value></param></params></methodResponse>";
  EXPECT_EQ(std::get<XrValue>(decode_response_body(untyped)), XrValue("hi there"));
  std::string int_form = "<methodResponse><params><param><value><int> 42 </int></value></param></params></methodResponse>";
  EXPECT_EQ(std::get<XrValue>(decode_response_body(int_form)), XrValue(42));
}

// Fixtures written by Python's xmlrpc module (tests/oracles/golden_xmlrpc.py).
TEST(Decode, ReferenceGetSystemStateShape) {
  Response r = decode_response(read_fixture("getSystemState.http"));
  RosRpcReply reply = RosRpcReply::from_value(std::get<XrValue>(r));
  EXPECT_EQ(reply.code, 1);
  EXPECT_EQ(reply.status_message, "current system state");
  const auto& state = reply.payload.as_seq();
  ASSERT_EQ(state.size(), 3u);
  const auto& pubs = state[0].as_seq();
  ASSERT_EQ(pubs.size(), 2u);
  EXPECT_EQ(pubs[1].as_seq()[0].as_str(), "/chatter");
  EXPECT_EQ(pubs[1].as_seq()[1].as_seq()[1].as_str(), "/talker2");
  EXPECT_EQ(state[2].as_seq()[1].as_seq()[0].as_str(), "/talker/set_logger_level");
}

TEST(Decode, ReferenceFaultAndCall) {
  Response r = decode_response_body(read_fixture("fault.xml"));
  ASSERT_TRUE(std::holds_alternative<Fault>(r));
  EXPECT_EQ(std::get<Fault>(r), (Fault{-1, "method \"bogus\" is not supported"}));
  MethodCall call = decode_call_body(read_fixture("mixed_call.xml"));
  EXPECT_EQ(call.method, "mixed");
  ASSERT_EQ(call.params.size(), 7u);
  EXPECT_EQ(call.params[0], XrValue(3));
  EXPECT_EQ(call.params[1], XrValue(true));
  EXPECT_EQ(call.params[2], XrValue("a<b&c"));
  EXPECT_EQ(call.params[3], XrValue(2.5));
  EXPECT_EQ(call.params[4], XrValue::seq({XrValue(1), XrValue::seq({XrValue(2), XrValue("x")})}));
  EXPECT_EQ(call.params[5], XrValue::record({{"k", "v"}, {"n", -7}}));
  EXPECT_EQ(call.params[6], XrValue(Binary{{0x00, 0xff, 0x10}}));
}

TEST(Decode, Errors) {
  EXPECT_THROW(decode_response("HTTP/1.1 500 Internal\r\nContent-Length: 0\r\n\r\n"), HttpError);
  try {
    decode_response("HTTP/1.1 404 Not Found\r\nContent-Length: 0\r\n\r\n");
  } catch (const HttpError& e) {
    EXPECT_EQ(e.status(), 404);
  }
  EXPECT_THROW(decode_response("HTTP/1.1 200 OK\r\nTransfer-Encoding: chunked\r\n\r\n5\r\nhello\r\n0\r\n\r\n"),
               HttpError);
  EXPECT_THROW(decode_response_body("<methodResponse><params><param><value><i4>x</i4></value></param></params>"
                                    "</methodResponse>"),
               XmlSyntaxError);
  EXPECT_THROW(decode_response_body("<methodResponse><params><param><value><i4>2147483648</i4></value></param>"
                                    "</params></methodResponse>"),
               XmlSyntaxError);
  std::string deep = "<value>";
  for (int i = 0; i < 70; ++i) deep += "<array><data><value>";
  deep += "<i4>1</i4>";
  for (int i = 0; i < 70; ++i) deep += "</value></data></array>";
  deep += "</value>";
  EXPECT_THROW(decode_response_body("<methodResponse><params><param>" + deep + "</param></params></methodResponse>"),
               DepthExceeded);
}

TEST(RosReply, ShapeValidation) {
  EXPECT_EQ(RosRpcReply::from_value(success("ok", 5).to_value()).payload, XrValue(5));
  EXPECT_THROW(RosRpcReply::from_value(XrValue::seq({1, "x"})), ProtocolError);
  EXPECT_THROW(RosRpcReply::from_value(XrValue::seq({"1", "x", 0})), ProtocolError);
  EXPECT_THROW(RosRpcReply::from_value(XrValue(1)), ProtocolError);
}

XrValue random_tree(std::mt19937_64& rng, int depth) {
  int pick = static_cast<int>(rng() % (depth >= 8 ? 5 : 7));
  switch (pick) {
    case 0: return XrValue(static_cast<std::int32_t>(rng()));
    case 1: return XrValue(rng() % 2 == 0);
    case 2: {
      std::string s;
      int n = static_cast<int>(rng() % 12);
      for (int i = 0; i < n; ++i) s += "ab<>&\"' \xc3\xa9z"[rng() % 12];
      return XrValue(s);
    }
    case 3: {
      double d;
      std::uint64_t bits = rng();
      std::memcpy(&d, &bits, 8);
      if (std::isinf(d)) d = 1.0;
      return XrValue(d);
    }
    case 4: {
      Binary b;
      b.bytes.resize(rng() % 9);
      for (auto& x : b.bytes) x = static_cast<std::uint8_t>(rng());
      return XrValue(b);
    }
    case 5: {
      XrValue::Seq s;
      int n = static_cast<int>(rng() % 17);
      for (int i = 0; i < n; ++i) s.push_back(random_tree(rng, depth + 1));
      return XrValue(s);
    }
    default: {
      XrValue::Record r;
      int n = static_cast<int>(rng() % 17);
      for (int i = 0; i < n; ++i) r.emplace_back("m" + std::to_string(i), random_tree(rng, depth + 1));
      return XrValue(r);
    }
  }
}

TEST(Property, RandomTreesRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    XrValue v = random_tree(rng, 1);
    Response r = decode_response(encode_response(v));
    ASSERT_EQ(std::get<XrValue>(r), v) << v.debug_string();
    MethodCall c = decode_call_body(encode_call_body("m", {v, XrValue(1)}));
    ASSERT_EQ(c.params[0], v);
  }
  Response f = decode_response(encode_fault({-3, "bad & worse"}));
  EXPECT_EQ(std::get<Fault>(f), (Fault{-3, "bad & worse"}));
}

class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.register_method("echo", [](const Params& p) { return XrValue(p); });
    server_.register_method("boom", [](const Params&) -> XrValue { throw std::runtime_error("kaboom"); });
    server_.register_method("slow", [](const Params&) {
      std::this_thread::sleep_for(std::chrono::milliseconds(300));
      return XrValue(1);
    });
    server_.start("127.0.0.1", 0);
    uri_ = "http://127.0.0.1:" + std::to_string(server_.port()) + "/";
  }
  Server server_;
  std::string uri_;
};

TEST_F(ServerTest, EchoReturnsParams) {
  Client client;
  Params p{XrValue(1), XrValue("two"), XrValue::record({{"x", 3.5}})};
  EXPECT_EQ(client.call_value(uri_, "echo", p), XrValue(p));
  EXPECT_EQ(server_.requests_served(), 1u);
}

TEST_F(ServerTest, UnknownMethodAndHandlerErrorsAreFaults) {
  Client client;
  Response r = client.call(uri_, "nope", {});
  EXPECT_EQ(std::get<Fault>(r), (Fault{-1, "method not found"}));
  r = client.call(uri_, "boom", {});
  EXPECT_EQ(std::get<Fault>(r), (Fault{-1, "kaboom"}));
  EXPECT_THROW(client.call_value(uri_, "boom", {}), FaultError);
}

TEST_F(ServerTest, ConcurrentCallsBothComplete) {
  Client client;
  auto start = std::chrono::steady_clock::now();
  auto a = std::async(std::launch::async, [&] { return client.call_value(uri_, "slow", {}); });
  auto b = std::async(std::launch::async, [&] { return client.call_value(uri_, "slow", {}); });
  EXPECT_EQ(a.get(), XrValue(1));
  EXPECT_EQ(b.get(), XrValue(1));
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(550));
}

TEST_F(ServerTest, MalformedXmlGetsFaultWith200AndClose) {
  net::Socket s = net::Socket::connect("127.0.0.1", server_.port(), std::chrono::seconds(1));
  s.send_all(http::make_request("POST", "x", "/", "text/xml", "<methodCall><oops>"));
  http::Message reply = http::read(s, net::Clock::now() + std::chrono::seconds(2));
  EXPECT_EQ(reply.status(), 200);
  Response r = decode_response_body(reply.body);
  ASSERT_TRUE(std::holds_alternative<Fault>(r));
  EXPECT_EQ(std::get<Fault>(r).code, -1);
  std::uint8_t byte;
  EXPECT_EQ(s.recv_some(std::span<std::uint8_t>(&byte, 1), net::Clock::now() + std::chrono::seconds(2)), 0u);
}

TEST_F(ServerTest, AnyPathAccepted) {
  Client client;
  EXPECT_EQ(client.call_value(uri_ + "RPC2", "echo", {XrValue(9)}), XrValue::seq({XrValue(9)}));
}

TEST(Client, TimeoutAndRefused) {
  net::Listener silent = net::Listener::bind("127.0.0.1", 0);
  Client client(std::chrono::milliseconds(200));
  std::string uri = "http://127.0.0.1:" + std::to_string(silent.port());
  EXPECT_THROW(client.call(uri, "x", {}), TimeoutError);
  std::uint16_t port = silent.port();
  silent.close();
  EXPECT_THROW(client.call("http://127.0.0.1:" + std::to_string(port), "x", {}), IoError);
  EXPECT_THROW(client.call("rosrpc://127.0.0.1:1", "x", {}), Error);
}

// Fuzz: mutated and random bodies never crash dispatch; over the wire the
// server keeps answering.
TEST(Fuzz, ServerBodies) {
  Server server;
  server.register_method("echo", [](const Params& p) { return XrValue(p); });
  std::mt19937_64 rng(5);
  std::string valid = encode_call_body("echo", {random_tree(rng, 1), random_tree(rng, 1)});
  for (int i = 0; i < 20000; ++i) {
    std::string body = valid;
    if (i % 3 == 0) {
      body.resize(rng() % 2048);
      for (auto& c : body) c = static_cast<char>(rng());
    } else {
      for (int k = 0; k < 3; ++k) body[rng() % body.size()] = "<>/&;x \"'"[rng() % 9];
      body.resize(rng() % (body.size() + 1));
    }
    std::string reply = server.handle_body(body);
    ASSERT_NO_THROW(decode_response_body(reply));
  }
  server.start("127.0.0.1", 0);
  Client client;
  std::string uri = "http://127.0.0.1:" + std::to_string(server.port());
  std::string huge(1 << 20, '<');
  net::Socket s = net::Socket::connect("127.0.0.1", server.port(), std::chrono::seconds(1));
  s.send_all(http::make_request("POST", "x", "/", "text/xml", huge));
  http::Message reply = http::read(s, net::Clock::now() + std::chrono::seconds(5));
  EXPECT_EQ(reply.status(), 200);
  EXPECT_EQ(client.call_value(uri, "echo", {XrValue(1)}), XrValue::seq({XrValue(1)}));
}

}  // namespace
}  // namespace roslite::xmlrpc

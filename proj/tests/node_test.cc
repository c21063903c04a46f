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

#include <atomic>
#include <future>
#include <thread>

#include "roslite/node/master.h"
#include "roslite/node/names.h"
#include "roslite/node/node.h"
#include "roslite/node/param_tree.h"

namespace roslite::node {
namespace {

using namespace std::chrono_literals;
using xmlrpc::XrValue;

template <typename Pred>
bool eventually(Pred pred, std::chrono::milliseconds limit = 5s) {
  auto end = std::chrono::steady_clock::now() + limit;
  while (std::chrono::steady_clock::now() < end) {
    if (pred()) return true;
    std::this_thread::sleep_for(5ms);
  }
  return pred();
}

class NodeTest : public ::testing::Test {
 protected:
  void SetUp() override { master_.start("127.0.0.1", 0, "127.0.0.1"); }
  void TearDown() override { master_.stop(); }

  std::shared_ptr<Node> make_node(const std::string& name) {
    NodeConfig c;
    c.name = name;
    c.master_uri = master_.uri();
    c.advertised_host = "127.0.0.1";
    c.bind_address = "127.0.0.1";
    c.call_timeout = 1000ms;
    return Node::start(c);
  }

  Master master_;
};

serde::DynamicValue string_msg(const std::string& s) { return serde::DynamicValue::record({{"data", s}}); }

std::string data_of(const MessageEvent& ev) { return ev.value->at("data").get<std::string>(); }

TEST(Names, Resolution) {
  EXPECT_EQ(resolve_name("chatter", "/ns/talker"), "/ns/chatter");
  EXPECT_EQ(resolve_name("/chatter", "/ns/talker"), "/chatter");
  EXPECT_EQ(resolve_name("~rate", "/ns/talker"), "/ns/talker/rate");
  EXPECT_EQ(resolve_name("a/b", "/talker"), "/a/b");
  EXPECT_THROW(resolve_name("bad name", "/talker"), InvalidName);
  EXPECT_THROW(resolve_name("1abc", "/talker"), InvalidName);
}

TEST(ParamTreeTest, SubtreesAndSearch) {
  ParamTree t;
  t.set("/a/b/c", XrValue(1));
  t.set("/a/d", XrValue("x"));
  XrValue a = t.get("/a").value();
  ASSERT_TRUE(a.is_record());
  EXPECT_EQ(a.find("b")->find("c")->as_int(), 1);
  t.set("/a", XrValue::record({{"z", XrValue(true)}}));
  EXPECT_FALSE(t.has("/a/d"));
  EXPECT_TRUE(t.get("/a/z")->as_bool());
  t.set("/robot/rate", XrValue(10));
  EXPECT_EQ(t.search("/robot/ns/node", "rate").value_or(""), "/robot/rate");
  t.set("/robot/ns/node/rate", XrValue(20));
  EXPECT_EQ(t.search("/robot/ns/node", "rate").value_or(""), "/robot/ns/node/rate");
  EXPECT_FALSE(t.search("/robot/ns/node", "missing").has_value());
}

TEST_F(NodeTest, SlaveApiBasics) {
  auto n = make_node("/probe");
  xmlrpc::Client c(1s);
  auto pid = c.call_ros(n->uri(), "getPid", {XrValue("/tester")});
  EXPECT_EQ(pid.code, 1);
  EXPECT_TRUE(pid.payload.is_int());
  auto rt = c.call_ros(n->uri(), "requestTopic",
                       {XrValue("/tester"), XrValue("/nothing"), XrValue::seq({XrValue::seq({"TCPROS"})})});
  EXPECT_EQ(rt.code, -1);
  auto mu = c.call_ros(n->uri(), "getMasterUri", {XrValue("/tester")});
  EXPECT_EQ(mu.payload.as_str(), master_.uri());
}

TEST_F(NodeTest, AdvertiseIsIdempotentAndConflictsOnType) {
  auto n = make_node("/talker");
  auto p1 = n->advertise("chatter", "std_msgs/String");
  auto p2 = n->advertise("/chatter", "std_msgs/String");
  EXPECT_EQ(p1, p2);
  EXPECT_THROW(n->advertise("chatter", "std_msgs/Int32"), TypeConflict);
  SystemState st = n->system_state();
  ASSERT_EQ(st.publishers.size(), 1u);
  EXPECT_EQ(st.publishers[0].first, "/chatter");
  EXPECT_EQ(st.publishers[0].second, std::vector<std::string>{"/talker"});
}

TEST_F(NodeTest, PublishSubscribeRoundTrip) {
  auto talker = make_node("/talker");
  auto listener = make_node("/listener");
  auto pub = talker->advertise("/chatter", "std_msgs/String");
  EXPECT_EQ(pub->publish(string_msg("before")), 0u);
  std::mutex mu;
  std::vector<std::string> got;
  auto sub = listener->subscribe("/chatter", "std_msgs/String", [&](const MessageEvent& ev) {
    std::lock_guard lock(mu);
    got.push_back(data_of(ev));
    EXPECT_EQ(ev.publisher, "/talker");
  });
  ASSERT_TRUE(eventually([&] { return pub->num_subscribers() == 1; }));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(pub->publish(string_msg("m" + std::to_string(i))), 1u);
  ASSERT_TRUE(eventually([&] {
    std::lock_guard lock(mu);
    return got.size() == 3;
  }));
  EXPECT_EQ(got, (std::vector<std::string>{"m0", "m1", "m2"}));
  EXPECT_EQ(pub->published(), 4u);
  auto links = talker->bus_info();
  ASSERT_EQ(links.size(), 1u);
  EXPECT_EQ(links[0].remote, "/listener");
}

TEST_F(NodeTest, LatchedMessageDeliveredOnce) {
  auto talker = make_node("/talker");
  auto pub = talker->advertise("/latched", "std_msgs/String", true);
  pub->publish(string_msg("first"));
  pub->publish(string_msg("last"));
  auto listener = make_node("/listener");
  std::atomic<int> count{0};
  std::string seen;
  std::mutex mu;
  auto sub = listener->subscribe("/latched", "std_msgs/String", [&](const MessageEvent& ev) {
    std::lock_guard lock(mu);
    seen = data_of(ev);
    ++count;
  });
  ASSERT_TRUE(eventually([&] { return count.load() == 1; }));
  std::this_thread::sleep_for(200ms);
  EXPECT_EQ(count.load(), 1);
  std::lock_guard lock(mu);
  EXPECT_EQ(seen, "last");
}

TEST_F(NodeTest, PublisherUpdateAddsAndRemovesLinks) {
  auto listener = make_node("/listener");
  auto sub = listener->subscribe("/topic", "std_msgs/String", [](const MessageEvent&) {});
  EXPECT_TRUE(sub->known_publishers().empty());
  auto a = make_node("/a");
  auto b = make_node("/b");
  auto pa = a->advertise("/topic", "std_msgs/String");
  auto pb = b->advertise("/topic", "std_msgs/String");
  ASSERT_TRUE(eventually([&] { return sub->connected_publishers().size() == 2; }));
  EXPECT_TRUE(eventually([&] { return pa->num_subscribers() == 1 && pb->num_subscribers() == 1; }));

  xmlrpc::Client c(1s);
  auto r = c.call_ros(listener->uri(), "publisherUpdate", {XrValue("/master"), XrValue("/topic"), XrValue::seq({})});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(eventually([&] { return sub->connected_publishers().empty(); }));
  EXPECT_TRUE(eventually([&] { return pa->num_subscribers() == 0 && pb->num_subscribers() == 0; }));
  // Still registered with the master.
  SystemState st = listener->system_state();
  ASSERT_EQ(st.subscribers.size(), 1u);
  EXPECT_EQ(st.subscribers[0].second, std::vector<std::string>{"/listener"});
}

TEST_F(NodeTest, WildcardSubscriptionLearnsType) {
  auto talker = make_node("/talker");
  auto pub = talker->advertise("/pose", "geometry_msgs/Point");
  auto listener = make_node("/listener");
  std::promise<serde::DynamicValue> got;
  std::atomic<bool> once{false};
  auto sub = listener->subscribe("/pose", "*", [&](const MessageEvent& ev) {
    if (ev.value && !once.exchange(true)) got.set_value(*ev.value);
  });
  ASSERT_TRUE(eventually([&] { return pub->num_subscribers() == 1; }));
  pub->publish(serde::DynamicValue::record({{"x", 1.0}, {"y", 2.0}, {"z", 3.0}}));
  auto fut = got.get_future();
  ASSERT_EQ(fut.wait_for(5s), std::future_status::ready);
  EXPECT_EQ(fut.get().at("y").get<double>(), 2.0);
  EXPECT_EQ(sub->type(), "geometry_msgs/Point");
  EXPECT_EQ(sub->md5(), pub->md5());
}

TEST_F(NodeTest, ServiceCallAndErrors) {
  auto server = make_node("/adder");
  server->advertise_service("add_two_ints", "roscpp_tutorials/TwoInts", [](const serde::DynamicValue& req) {
    std::int64_t a = req.at("a").get<std::int64_t>();
    std::int64_t b = req.at("b").get<std::int64_t>();
    if (a < 0) throw Error("negative input");
    return serde::DynamicValue::record({{"sum", a + b}});
  });
  auto client = make_node("/client");
  auto res = client->call_service("/add_two_ints", "roscpp_tutorials/TwoInts",
                                  serde::DynamicValue::record({{"a", std::int64_t{2}}, {"b", std::int64_t{40}}}));
  EXPECT_EQ(res.at("sum").get<std::int64_t>(), 42);
  // A node can call its own service.
  auto self = server->call_service("add_two_ints", "roscpp_tutorials/TwoInts",
                                   serde::DynamicValue::record({{"a", std::int64_t{1}}, {"b", std::int64_t{1}}}));
  EXPECT_EQ(self.at("sum").get<std::int64_t>(), 2);
  try {
    client->call_service("/add_two_ints", "roscpp_tutorials/TwoInts",
                         serde::DynamicValue::record({{"a", std::int64_t{-1}}, {"b", std::int64_t{0}}}));
    FAIL() << "expected RemoteFailure";
  } catch (const RemoteFailure& e) {
    EXPECT_NE(std::string(e.what()).find("negative input"), std::string::npos);
  }
  EXPECT_THROW(client->call_service("/missing", "roscpp_tutorials/TwoInts", serde::DynamicValue::record(
                                                                               {{"a", std::int64_t{0}},
                                                                                {"b", std::int64_t{0}}})),
               ServiceNotFound);
  server->unadvertise_service("add_two_ints");
  EXPECT_THROW(client->lookup_service("/add_two_ints"), ServiceNotFound);
}

TEST_F(NodeTest, ParametersAndUpdates) {
  auto n = make_node("/ns/node");
  n->param_set("~rate", XrValue(10));
  n->param_set("/global", XrValue::record({{"a", XrValue(1.5)}, {"b", XrValue("s")}}));
  EXPECT_EQ(n->param_get("/ns/node/rate").as_int(), 10);
  EXPECT_TRUE(n->param_has("/global/a"));
  EXPECT_EQ(n->param_get("/global").find("b")->as_str(), "s");
  EXPECT_EQ(n->param_search("global").value_or(""), "/global");
  auto names = n->param_names();
  EXPECT_NE(std::find(names.begin(), names.end(), "/global/a"), names.end());
  n->param_delete("/global/a");
  EXPECT_FALSE(n->param_has("/global/a"));
  EXPECT_THROW(n->param_get("/nope"), ParamNotFound);
  EXPECT_THROW(n->param_delete("/nope"), ParamNotFound);

  std::promise<std::pair<std::string, int>> update;
  n->param_subscribe("/watched", [&](const std::string& key, const ParamValue& v) {
    update.set_value({key, v.as_int()});
  });
  auto other = make_node("/other");
  other->param_set("/watched", XrValue(7));
  auto fut = update.get_future();
  ASSERT_EQ(fut.wait_for(5s), std::future_status::ready);
  EXPECT_EQ(fut.get(), (std::pair<std::string, int>{"/watched", 7}));
}

TEST_F(NodeTest, ShutdownIsIdempotentAndUnregisters) {
  auto n = make_node("/talker");
  n->advertise("/chatter", "std_msgs/String");
  n->advertise_service("/srv", "std_srvs/Empty", [](const serde::DynamicValue&) { return serde::DynamicValue(); });
  n->shutdown();
  n->shutdown();
  EXPECT_TRUE(n->is_shutdown());
  auto probe = make_node("/probe");
  SystemState st = probe->system_state();
  EXPECT_TRUE(st.publishers.empty());
  EXPECT_TRUE(st.services.empty());
  EXPECT_THROW(n->advertise("/x", "std_msgs/String"), NodeShutdown);
}

TEST_F(NodeTest, ShutdownWithMasterGoneIsBounded) {
  auto n = make_node("/talker");
  for (int i = 0; i < 5; ++i) n->advertise("/t" + std::to_string(i), "std_msgs/String");
  master_.stop();
  auto t0 = std::chrono::steady_clock::now();
  n->shutdown();
  EXPECT_LT(std::chrono::steady_clock::now() - t0, 3s);
}

TEST_F(NodeTest, SlaveShutdownRequest) {
  auto n = make_node("/victim");
  xmlrpc::Client c(1s);
  auto r = c.call_ros(n->uri(), "shutdown", {XrValue("/killer"), XrValue("test")});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(n->wait_for_shutdown(2s));
  EXPECT_TRUE(n->shutdown_requested());
}

TEST(NodeStart, MasterUnreachable) {
  NodeConfig c;
  c.name = "/lonely";
  c.master_uri = "http://127.0.0.1:1/";
  c.advertised_host = "127.0.0.1";
  c.call_timeout = 500ms;
  EXPECT_THROW(Node::start(c), MasterUnreachable);
}

TEST(NodeStart, OfflineDirectPublishers) {
  NodeConfig c;
  c.offline = true;
  c.advertised_host = "127.0.0.1";
  c.bind_address = "127.0.0.1";
  c.name = "/pub";
  auto pub_node = Node::start(c);
  c.name = "/sub";
  auto sub_node = Node::start(c);
  auto pub = pub_node->advertise("/direct", "std_msgs/String");
  std::promise<std::string> got;
  std::atomic<bool> once{false};
  SubscribeOptions opts;
  opts.direct_publishers = {pub_node->uri()};
  auto sub = sub_node->subscribe("/direct", "std_msgs/String", [&](const MessageEvent& ev) {
    if (!once.exchange(true)) got.set_value(data_of(ev));
  }, opts);
  ASSERT_TRUE(eventually([&] { return pub->num_subscribers() == 1; }));
  pub->publish(string_msg("hello"));
  auto fut = got.get_future();
  ASSERT_EQ(fut.wait_for(5s), std::future_status::ready);
  EXPECT_EQ(fut.get(), "hello");
  EXPECT_THROW(sub_node->param_get("/x"), MasterUnreachable);
}

}  // namespace
}  // namespace roslite::node

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

#include <sys/socket.h>

#include <atomic>
#include <cstring>
#include <future>
#include <random>
#include <thread>

#include "roslite/net/tcp_server.h"
#include "roslite/tcpros/link.h"
#include "roslite/tcpros/service.h"

namespace roslite::tcpros {
namespace {

using namespace std::chrono_literals;
using Bytes = std::vector<std::uint8_t>;

Bytes str_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

TEST(Header, EncodingRule) {
  EXPECT_EQ(encode_header(ConnectionHeader{{"a", "b"}}), (Bytes{7, 0, 0, 0, 3, 0, 0, 0, 'a', '=', 'b'}));
  EXPECT_EQ(encode_header(ConnectionHeader{}), (Bytes{0, 0, 0, 0}));
}

TEST(Header, DecodeKeepsOrderValueEqualsAndLastDuplicate) {
  ConnectionHeader h{{"callerid", "/x"}, {"message_definition", "int32 A=1\nint32 a"}};
  Bytes enc = encode_header(h);
  EXPECT_EQ(decode_header_block(std::span(enc).subspan(4)), h);
  Bytes dup = {4, 0, 0, 0, 'k', '=', 'v', '1', 4, 0, 0, 0, 'k', '=', 'v', '2'};
  EXPECT_EQ(*decode_header_block(dup).get("k"), "v2");
  EXPECT_EQ(decode_header_block(dup).size(), 1u);
}

TEST(Header, MalformedAndOversize) {
  EXPECT_THROW(decode_header_block(Bytes{3, 0, 0, 0, 'a', 'b', 'c'}), MalformedHeader);
  EXPECT_THROW(decode_header_block(Bytes{9, 0, 0, 0, 'a', '=', 'c'}), MalformedHeader);
  EXPECT_THROW(decode_header_block(Bytes{1, 0}), MalformedHeader);
  EXPECT_THROW(encode_header(ConnectionHeader{{"big", std::string(kMaxHeaderSize, 'x')}}), OversizeHeader);
  auto [a, b] = net::socket_pair();
  a.send_all(Bytes{0xff, 0xff, 0xff, 0x7f});
  EXPECT_THROW(read_header(b, net::Clock::now() + 1s), OversizeHeader);
}

TEST(Frame, EmptyBodyAndOrdering) {
  EXPECT_EQ(encode_frame({}), (Bytes{0, 0, 0, 0}));
  auto [a, b] = net::socket_pair();
  std::thread writer([&a] {
    for (std::uint32_t i = 0; i < 1000; ++i) {
      Bytes body(i % 37, static_cast<std::uint8_t>(i));
      write_frame(a, body);
    }
  });
  for (std::uint32_t i = 0; i < 1000; ++i) {
    Bytes body = read_frame(b);
    ASSERT_EQ(body, Bytes(i % 37, static_cast<std::uint8_t>(i)));
  }
  writer.join();
  a.close();
  EXPECT_THROW(read_frame(b), Disconnected);
}

TEST(Frame, SixteenMebibytesRoundTrip) {
  auto [a, b] = net::socket_pair();
  Bytes big(16u << 20);
  std::mt19937 rng(3);
  for (auto& x : big) x = static_cast<std::uint8_t>(rng());
  std::thread writer([&] { write_frame(a, big); });
  Bytes got = read_frame(b);
  writer.join();
  EXPECT_EQ(got, big);
}

TEST(Frame, TooLarge) {
  auto [a, b] = net::socket_pair();
  a.send_all(Bytes{0, 0, 0, 2});  // 32 MiB
  EXPECT_THROW(read_frame(b, std::nullopt, 1u << 20), FrameTooLarge);
}

TEST(Queue, DropOldest) {
  SendQueue q(QueuePolicy{1, 1u << 20});
  EXPECT_EQ(q.offer(make_payload({1})), OfferResult::kAccepted);
  EXPECT_EQ(q.offer(make_payload({2})), OfferResult::kAcceptedWithDrop);
  EXPECT_EQ(q.offer(make_payload({3})), OfferResult::kAcceptedWithDrop);
  EXPECT_EQ(**q.pop(), Bytes{3});
  EXPECT_EQ(q.dropped(), 2u);
}

TEST(Queue, ByteBoundAndOversizeMessage) {
  SendQueue q(QueuePolicy{16, 10});
  q.offer(make_payload(Bytes(4)));
  q.offer(make_payload(Bytes(4)));
  q.offer(make_payload(Bytes(4)));
  EXPECT_EQ(q.size(), 2u);
  q.offer(make_payload(Bytes(50)));
  EXPECT_EQ(q.size(), 1u);
  EXPECT_EQ((*q.pop())->size(), 50u);
  q.close();
  EXPECT_EQ(q.offer(make_payload({})), OfferResult::kClosed);
  EXPECT_FALSE(q.pop().has_value());
}

AdvertisedTopic chatter() {
  return AdvertisedTopic{"/chatter", "std_msgs/String", "992ce8a1687cec8c8bd883ec73ca41d1", "string data\n", "/talker",
                         false};
}

TopicLookup lookup_of(AdvertisedTopic t) {
  return [t](const std::string& topic) -> std::optional<AdvertisedTopic> {
    if (topic == t.topic) return t;
    return std::nullopt;
  };
}

TEST(Handshake, WildcardSubscriberGetsDefinition) {
  auto [sub, pub] = net::socket_pair();
  auto accepted = std::async(std::launch::async, [&pub] { return publisher_accept(pub, lookup_of(chatter())); });
  ConnectionHeader reply = subscriber_handshake(sub, {"/chatter", "*", "*", "/listener", false});
  EXPECT_EQ(*reply.get("message_definition"), "string data\n");
  EXPECT_EQ(*reply.get("type"), "std_msgs/String");
  EXPECT_EQ(*reply.get("latching"), "0");
  AcceptedSubscriber a = accepted.get();
  EXPECT_EQ(*a.request.get("callerid"), "/listener");
  EXPECT_EQ(*a.request.get("md5sum"), "*");
}

TEST(Handshake, Md5MismatchRejectedByPublisher) {
  auto [sub, pub] = net::socket_pair();
  auto accepted = std::async(std::launch::async, [&pub] { return publisher_accept(pub, lookup_of(chatter())); });
  try {
    subscriber_handshake(sub, {"/chatter", "std_msgs/String", "0123456789abcdef0123456789abcdef", "/l", false});
    FAIL();
  } catch (const HandshakeRejected& e) {
    EXPECT_NE(e.remote_error().find("md5sum"), std::string::npos);
  }
  EXPECT_THROW(accepted.get(), Md5Mismatch);
}

TEST(Handshake, LocalMd5CheckWhenPeerSkipsIt) {
  auto [sub, pub] = net::socket_pair();
  std::thread fake([&pub] {
    read_header(pub, std::nullopt);
    write_header(pub, ConnectionHeader{{"md5sum", "ffff"}, {"type", "x/Y"}});
  });
  EXPECT_THROW(subscriber_handshake(sub, {"/t", "x/Y", "aaaa", "/l", false}), Md5Mismatch);
  fake.join();
}

TEST(Handshake, UnknownTopicGetsErrorHeader) {
  auto [sub, pub] = net::socket_pair();
  auto accepted = std::async(std::launch::async, [&pub] { return publisher_accept(pub, lookup_of(chatter())); });
  EXPECT_THROW(subscriber_handshake(sub, {"/other", "*", "*", "/l", false}), HandshakeRejected);
  EXPECT_THROW(accepted.get(), UnknownTopic);
}

TEST(Handshake, TcpNoDelaySetLocally) {
  net::Listener l = net::Listener::bind("127.0.0.1", 0);
  net::Socket sub = net::Socket::connect("127.0.0.1", l.port(), 1s);
  net::Socket pub = std::move(*l.accept(1s));
  auto accepted = std::async(std::launch::async, [&pub] { return publisher_accept(pub, lookup_of(chatter())); });
  EXPECT_FALSE(sub.nodelay());
  subscriber_handshake(sub, {"/chatter", "*", "*", "/l", true});
  EXPECT_TRUE(sub.nodelay());
  accepted.get();
  EXPECT_TRUE(pub.nodelay());
}

TEST(Handshake, TimeoutOnSilentPeer) {
  auto [sub, pub] = net::socket_pair();
  auto start = net::Clock::now();
  EXPECT_THROW(subscriber_handshake(sub, {"/t", "*", "*", "/l", false}, 200ms), TimeoutError);
  EXPECT_LT(net::Clock::now() - start, 1s);
  EXPECT_THROW(publisher_accept(pub, lookup_of(chatter()), 200ms), Error);
}

// Subscriber-side fixture: handshakes over a socket pair and hands back the
// link plus the subscriber socket.
struct LinkPair {
  std::unique_ptr<SubscriberLink> link;
  net::Socket sub;
};

LinkPair make_link(AdvertisedTopic topic, QueuePolicy policy = {}, Payload latched = nullptr) {
  auto [sub, pub] = net::socket_pair();
  auto accepted = std::async(std::launch::async, [&pub, topic] { return publisher_accept(pub, lookup_of(topic)); });
  subscriber_handshake(sub, {topic.topic, "*", "*", "/l", false});
  LinkPair lp;
  lp.link = std::make_unique<SubscriberLink>(std::move(pub), accepted.get(), policy, std::move(latched));
  lp.sub = std::move(sub);
  return lp;
}

TEST(Link, LatchedMessageDeliveredOnceBeforeNewPublications) {
  AdvertisedTopic t = chatter();
  t.latching = true;
  LinkPair lp = make_link(t, {}, make_payload(str_bytes("latched")));
  EXPECT_EQ(read_frame(lp.sub, net::Clock::now() + 1s), str_bytes("latched"));
  lp.link->offer(make_payload(str_bytes("fresh")));
  EXPECT_EQ(read_frame(lp.sub, net::Clock::now() + 1s), str_bytes("fresh"));
  EXPECT_THROW(read_frame(lp.sub, net::Clock::now() + 100ms), TimeoutError);
}

TEST(Link, FastSubscriberReceivesEverything) {
  LinkPair lp = make_link(chatter());
  constexpr int kCount = 10000;
  std::thread pub([&] {
    for (int i = 0; i < kCount; ++i) {
      Bytes b(4);
      std::memcpy(b.data(), &i, 4);
      lp.link->offer(make_payload(std::move(b)));
      if (i % 8 == 7) std::this_thread::sleep_for(std::chrono::microseconds(400));
    }
  });
  for (int i = 0; i < kCount; ++i) {
    Bytes b = read_frame(lp.sub, net::Clock::now() + 5s);
    int v;
    std::memcpy(&v, b.data(), 4);
    ASSERT_EQ(v, i);
  }
  pub.join();
  EXPECT_EQ(lp.link->stats().drops, 0u);
  EXPECT_EQ(lp.link->stats().messages, static_cast<std::uint64_t>(kCount));
}

TEST(Link, StalledSubscriberDoesNotDelayHealthyOne) {
  LinkPair stalled = make_link(chatter());
  LinkPair healthy = make_link(chatter());
  // Fill the stalled link's socket buffers so its writer blocks.
  auto big = make_payload(Bytes(1u << 20, 0xaa));
  for (int i = 0; i < 8; ++i) stalled.link->offer(big);
  std::this_thread::sleep_for(100ms);
  auto small = make_payload(str_bytes("ping"));
  auto start = net::Clock::now();
  stalled.link->offer(small);
  healthy.link->offer(small);
  EXPECT_EQ(read_frame(healthy.sub, net::Clock::now() + 1s), str_bytes("ping"));
  EXPECT_LT(net::Clock::now() - start, 100ms);
  EXPECT_EQ(stalled.link->state(), LinkState::kActive);
}

TEST(Link, ErroredLinkIsIsolated) {
  LinkPair a = make_link(chatter());
  LinkPair b = make_link(chatter());
  // Stop reading without hanging up: writes fail (EPIPE) while the watcher
  // sees no EOF, so the link errors rather than closing.
  ::shutdown(a.sub.fd(), SHUT_RD);
  for (int i = 0; i < 50 && a.link->state() == LinkState::kActive; ++i) {
    a.link->offer(make_payload(Bytes(1024)));
    std::this_thread::sleep_for(10ms);
  }
  EXPECT_EQ(a.link->state(), LinkState::kErrored);
  EXPECT_FALSE(a.link->offer(make_payload({1})));
  EXPECT_TRUE(b.link->offer(make_payload({2})));
  EXPECT_EQ(read_frame(b.sub, net::Clock::now() + 1s), Bytes{2});
}

TEST(Link, PublisherLinkDeliversAndReportsClose) {
  auto [sub, pub] = net::socket_pair();
  std::vector<Bytes> got;
  std::promise<void> closed;
  PublisherLink link(
      std::move(sub), ConnectionHeader{{"callerid", "/talker"}}, "http://x:1/",
      [&](PublisherLink&, Bytes b) { got.push_back(std::move(b)); }, [&](PublisherLink&) { closed.set_value(); });
  link.start();
  write_frame(pub, Bytes{1, 2});
  write_frame(pub, Bytes{});
  pub.close();
  ASSERT_EQ(closed.get_future().wait_for(2s), std::future_status::ready);
  EXPECT_EQ(got, (std::vector<Bytes>{{1, 2}, {}}));
  EXPECT_EQ(link.state(), LinkState::kErrored);
  EXPECT_EQ(link.stats().messages, 2u);
  EXPECT_EQ(link.remote_caller_id(), "/talker");
}

std::shared_ptr<const ServiceBinding> echo_binding() {
  auto b = std::make_shared<ServiceBinding>();
  b->name = "/echo";
  b->type = "roscpp_tutorials/TwoInts";
  b->md5 = "6a2e34150c00229791cc89ff309fff21";
  b->caller_id = "/server";
  b->handler = [](std::span<const std::uint8_t> req) -> Bytes {
    if (!req.empty() && req[0] == 0xee) throw std::runtime_error("handler refused");
    return Bytes(req.begin(), req.end());
  };
  return b;
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    auto binding = echo_binding();
    server_.start("127.0.0.1", 0, [binding](net::Socket& s) {
      ConnectionHeader h = read_header(s, net::Clock::now() + 2s);
      serve_service_connection(s, h, [binding](const std::string& name) {
        return name == binding->name ? binding : nullptr;
      });
    });
  }
  net::TcpServer server_;
};

TEST_F(ServiceTest, OkEmptyBodyFraming) {
  auto [a, b] = net::socket_pair();
  write_service_response(a, true, {});
  Bytes raw(5);
  b.recv_exact(raw);
  EXPECT_EQ(raw, (Bytes{1, 0, 0, 0, 0}));
}

TEST_F(ServiceTest, CallAndHandlerError) {
  net::Socket s = net::Socket::connect("127.0.0.1", server_.port(), 1s);
  ServiceResponse r = service_call(s, {"/echo", "6a2e34150c00229791cc89ff309fff21", "/c"}, Bytes{1, 2, 3});
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.payload, (Bytes{1, 2, 3}));
  net::Socket s2 = net::Socket::connect("127.0.0.1", server_.port(), 1s);
  r = service_call(s2, {"/echo", "*", "/c"}, Bytes{0xee});
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.error_text(), "handler refused");
}

TEST_F(ServiceTest, PersistentConnectionServesManyCalls) {
  ServiceConnection c = ServiceConnection::open("127.0.0.1", server_.port(), {"/echo", "*", "/c", true});
  EXPECT_EQ(*c.reply().get("type"), "roscpp_tutorials/TwoInts");
  for (std::uint8_t i = 0; i < 50; ++i) {
    ServiceResponse r = c.call(Bytes{i}, 1s);
    ASSERT_TRUE(r.ok);
    ASSERT_EQ(r.payload, Bytes{i});
  }
}

TEST_F(ServiceTest, RejectionsAndProbe) {
  EXPECT_THROW(ServiceConnection::open("127.0.0.1", server_.port(), {"/missing", "*", "/c"}), HandshakeRejected);
  EXPECT_THROW(ServiceConnection::open("127.0.0.1", server_.port(), {"/echo", "bad", "/c"}), HandshakeRejected);
  ServiceConnection probe = ServiceConnection::open("127.0.0.1", server_.port(), {"/echo", "*", "/c", false, true});
  EXPECT_EQ(*probe.reply().get("md5sum"), "6a2e34150c00229791cc89ff309fff21");
}

// Arbitrary bytes at the publisher end in a typed error, never a hang.
TEST(Fuzz, PublisherAcceptTotality) {
  std::mt19937_64 rng(17);
  Bytes valid = encode_header(make_subscriber_header({"/chatter", "*", "*", "/l", false}));
  auto lookup = lookup_of(chatter());
  int accepted = 0;
  for (int i = 0; i < 3000; ++i) {
    Bytes input = valid;
    if (i % 2 == 0) {
      input.resize(rng() % 64);
      for (auto& b : input) b = static_cast<std::uint8_t>(rng());
    } else {
      for (int k = 0; k < 3; ++k) input[rng() % input.size()] = static_cast<std::uint8_t>(rng());
    }
    auto [peer, pub] = net::socket_pair();
    peer.send_all(input);
    ::shutdown(peer.fd(), SHUT_WR);
    try {
      publisher_accept(pub, lookup, 1s);
      ++accepted;
    } catch (const Error&) {
    }
  }
  EXPECT_GT(accepted, 0);
}

}  // namespace
}  // namespace roslite::tcpros

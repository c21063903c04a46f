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

#include "roslite/tcpros/handshake.h"

namespace roslite::tcpros {

ConnectionHeader make_subscriber_header(const SubscriberRequest& request) {
  return ConnectionHeader{{"callerid", request.caller_id},
                          {"topic", request.topic},
                          {"type", request.type.empty() ? std::string(kAnyMd5) : request.type},
                          {"md5sum", request.md5.empty() ? std::string(kAnyMd5) : request.md5},
                          {"tcp_nodelay", request.tcp_nodelay ? "1" : "0"}};
}

ConnectionHeader subscriber_handshake(net::Socket& socket, const SubscriberRequest& request,
                                      std::chrono::milliseconds timeout) {
  net::Deadline deadline = net::Clock::now() + timeout;
  if (request.tcp_nodelay) socket.set_nodelay(true);
  write_header(socket, make_subscriber_header(request), deadline);
  ConnectionHeader reply = read_header(socket, deadline);
  if (const std::string* err = reply.get("error")) throw HandshakeRejected(*err);
  std::string remote_md5 = reply.get_or("md5sum", "");
  if (request.md5 != kAnyMd5 && !request.md5.empty() && remote_md5 != kAnyMd5 && remote_md5 != request.md5) {
    throw Md5Mismatch(request.md5, remote_md5);
  }
  return reply;
}

void send_error_header(net::Socket& socket, const std::string& reason, net::Deadline deadline) {
  try {
    write_header(socket, ConnectionHeader{{"error", reason}}, deadline);
  } catch (const Error&) {
    // Peer already gone; the local error is what matters.
  }
}

AcceptedSubscriber publisher_answer(net::Socket& socket, const ConnectionHeader& request, const TopicLookup& lookup,
                                    std::chrono::milliseconds timeout) {
  net::Deadline deadline = net::Clock::now() + timeout;
  const std::string* topic = request.get("topic");
  if (!topic) {
    send_error_header(socket, "header missing required field 'topic'", deadline);
    throw MalformedHeader("subscriber header without topic");
  }
  std::optional<AdvertisedTopic> adv = lookup ? lookup(*topic) : std::nullopt;
  if (!adv) {
    send_error_header(socket, "topic [" + *topic + "] is not published by this node", deadline);
    throw UnknownTopic(*topic);
  }
  std::string md5 = request.get_or("md5sum", kAnyMd5);
  if (md5 != kAnyMd5 && adv->md5 != kAnyMd5 && md5 != adv->md5) {
    send_error_header(socket,
                      "Client [" + request.get_or("callerid", "?") + "] wants topic " + *topic + " to have datatype/md5sum [" +
                          request.get_or("type", "?") + "/" + md5 + "], but our version has [" + adv->type + "/" +
                          adv->md5 + "]. Dropping connection.",
                      deadline);
    throw Md5Mismatch(adv->md5, md5);
  }
  if (request.get_or("tcp_nodelay", "0") == "1") socket.set_nodelay(true);
  ConnectionHeader reply{{"callerid", adv->caller_id},
                         {"latching", adv->latching ? "1" : "0"},
                         {"md5sum", adv->md5},
                         {"message_definition", adv->definition},
                         {"topic", adv->topic},
                         {"type", adv->type}};
  write_header(socket, reply, deadline);
  return AcceptedSubscriber{request, std::move(*adv)};
}

AcceptedSubscriber publisher_accept(net::Socket& socket, const TopicLookup& lookup,
                                    std::chrono::milliseconds timeout) {
  net::Deadline deadline = net::Clock::now() + timeout;
  ConnectionHeader request = read_header(socket, deadline);
  return publisher_answer(socket, request, lookup, timeout);
}

}  // namespace roslite::tcpros

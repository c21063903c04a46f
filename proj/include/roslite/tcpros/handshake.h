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

#ifndef ROSLITE_TCPROS_HANDSHAKE_H_
#define ROSLITE_TCPROS_HANDSHAKE_H_

#include <chrono>
#include <functional>
#include <optional>
#include <string>

#include "roslite/tcpros/header.h"

namespace roslite::tcpros {

class HandshakeRejected : public TcprosError {
 public:
  explicit HandshakeRejected(std::string remote_error)
      : TcprosError("handshake rejected by peer: " + remote_error), remote_error_(std::move(remote_error)) {}
  const std::string& remote_error() const { return remote_error_; }

 private:
  std::string remote_error_;
};

class Md5Mismatch : public TcprosError {
 public:
  Md5Mismatch(std::string local, std::string remote)
      : TcprosError("md5 mismatch: local " + local + ", remote " + remote),
        local_(std::move(local)),
        remote_(std::move(remote)) {}
  const std::string& local() const { return local_; }
  const std::string& remote() const { return remote_; }

 private:
  std::string local_, remote_;
};

class UnknownTopic : public TcprosError {
 public:
  explicit UnknownTopic(const std::string& topic) : TcprosError("topic not advertised here: " + topic) {}
};

inline constexpr std::chrono::milliseconds kDefaultHandshakeTimeout{5000};

// Wildcard md5 accepted by both sides.
inline constexpr const char* kAnyMd5 = "*";

struct SubscriberRequest {
  std::string topic;
  std::string type;
  std::string md5 = kAnyMd5;
  std::string caller_id;
  bool tcp_nodelay = false;
};

ConnectionHeader make_subscriber_header(const SubscriberRequest& request);

// Sends the subscriber header and validates the publisher's reply, which is
// returned (message_definition and latching included when the peer sent them).
ConnectionHeader subscriber_handshake(net::Socket& socket, const SubscriberRequest& request,
                                      std::chrono::milliseconds timeout = kDefaultHandshakeTimeout);

struct AdvertisedTopic {
  std::string topic;
  std::string type;
  std::string md5;
  std::string definition;
  std::string caller_id;
  bool latching = false;
};

using TopicLookup = std::function<std::optional<AdvertisedTopic>(const std::string& topic)>;

struct AcceptedSubscriber {
  ConnectionHeader request;
  AdvertisedTopic topic;
};

// Validates an already-read subscriber header against the advertised topics
// and answers it. On failure an `error` header is sent before throwing.
AcceptedSubscriber publisher_answer(net::Socket& socket, const ConnectionHeader& request, const TopicLookup& lookup,
                                    std::chrono::milliseconds timeout = kDefaultHandshakeTimeout);

// read_header + publisher_answer. Any malformed input ends in a typed error
// within `timeout`.
AcceptedSubscriber publisher_accept(net::Socket& socket, const TopicLookup& lookup,
                                    std::chrono::milliseconds timeout = kDefaultHandshakeTimeout);

void send_error_header(net::Socket& socket, const std::string& reason, net::Deadline deadline);

}  // namespace roslite::tcpros

#endif  // ROSLITE_TCPROS_HANDSHAKE_H_

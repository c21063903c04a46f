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

#ifndef ROSLITE_TCPROS_LINK_H_
#define ROSLITE_TCPROS_LINK_H_

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "roslite/tcpros/handshake.h"
#include "roslite/tcpros/queue.h"

namespace roslite::tcpros {

enum class LinkState { kHandshaking, kActive, kClosed, kErrored };
const char* link_state_name(LinkState s);

struct LinkStats {
  std::uint64_t messages = 0;
  std::uint64_t bytes = 0;
  std::uint64_t drops = 0;
};

// Publisher side of one connection: owns a writer thread draining a
// drop-oldest queue into the socket.
class SubscriberLink {
 public:
  // `latched` (when set) is queued ahead of any later publication.
  SubscriberLink(net::Socket socket, AcceptedSubscriber accepted, QueuePolicy policy, Payload latched = nullptr);
  ~SubscriberLink();
  SubscriberLink(const SubscriberLink&) = delete;
  SubscriberLink& operator=(const SubscriberLink&) = delete;

  // False once the link is closed or errored.
  bool offer(Payload payload);
  void close();

  LinkState state() const { return state_.load(); }
  bool alive() const { return state() == LinkState::kActive; }
  LinkStats stats() const;
  const std::string& remote_caller_id() const { return caller_id_; }
  const std::string& topic() const { return topic_; }
  std::string error() const;
  std::uint64_t id() const { return id_; }

 private:
  void writer_loop();
  void watch_loop();

  net::Socket socket_;
  std::string caller_id_;
  std::string topic_;
  SendQueue queue_;
  std::atomic<LinkState> state_{LinkState::kActive};
  std::atomic<std::uint64_t> messages_{0};
  std::atomic<std::uint64_t> bytes_{0};
  mutable std::mutex error_mu_;
  std::string error_;
  std::uint64_t id_;
  std::thread writer_;
  std::thread watcher_;
};

// Subscriber side of one connection: a reader thread handing every frame to
// `on_message`, then `on_close` exactly once when the stream ends.
class PublisherLink {
 public:
  using MessageFn = std::function<void(PublisherLink&, std::vector<std::uint8_t>)>;
  using CloseFn = std::function<void(PublisherLink&)>;

  PublisherLink(net::Socket socket, ConnectionHeader reply, std::string publisher_uri, MessageFn on_message,
                CloseFn on_close, std::size_t max_frame = kDefaultMaxFrame);
  ~PublisherLink();
  PublisherLink(const PublisherLink&) = delete;
  PublisherLink& operator=(const PublisherLink&) = delete;

  void start();
  void close();

  LinkState state() const { return state_.load(); }
  LinkStats stats() const { return {messages_.load(), bytes_.load(), 0}; }
  const ConnectionHeader& reply() const { return reply_; }
  const std::string& publisher_uri() const { return publisher_uri_; }
  std::string remote_caller_id() const { return reply_.get_or("callerid", ""); }
  std::string error() const;
  std::uint64_t id() const { return id_; }

 private:
  void reader_loop();

  net::Socket socket_;
  ConnectionHeader reply_;
  std::string publisher_uri_;
  MessageFn on_message_;
  CloseFn on_close_;
  std::size_t max_frame_;
  std::atomic<LinkState> state_{LinkState::kHandshaking};
  std::atomic<std::uint64_t> messages_{0};
  std::atomic<std::uint64_t> bytes_{0};
  mutable std::mutex error_mu_;
  std::string error_;
  std::uint64_t id_;
  std::thread reader_;
};

}  // namespace roslite::tcpros

#endif  // ROSLITE_TCPROS_LINK_H_

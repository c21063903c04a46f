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

#include "roslite/tcpros/link.h"

namespace roslite::tcpros {

namespace {
std::atomic<std::uint64_t> next_link_id{1};
}  // namespace

const char* link_state_name(LinkState s) {
  switch (s) {
    case LinkState::kHandshaking: return "handshaking";
    case LinkState::kActive: return "active";
    case LinkState::kClosed: return "closed";
    case LinkState::kErrored: return "errored";
  }
  return "?";
}

SubscriberLink::SubscriberLink(net::Socket socket, AcceptedSubscriber accepted, QueuePolicy policy, Payload latched)
    : socket_(std::move(socket)),
      caller_id_(accepted.request.get_or("callerid", "")),
      topic_(accepted.topic.topic),
      queue_(policy),
      id_(next_link_id.fetch_add(1)) {
  if (latched) queue_.offer(std::move(latched));
  writer_ = std::thread([this] { writer_loop(); });
  watcher_ = std::thread([this] { watch_loop(); });
}

SubscriberLink::~SubscriberLink() {
  close();
  if (writer_.joinable()) writer_.join();
  if (watcher_.joinable()) watcher_.join();
}

// Subscribers send nothing after the handshake, so reading only detects the
// peer going away while the writer sits idle.
void SubscriberLink::watch_loop() {
  std::uint8_t sink[256];
  try {
    while (socket_.recv_some(sink) > 0) {
    }
  } catch (const std::exception&) {
  }
  LinkState expected = LinkState::kActive;
  state_.compare_exchange_strong(expected, LinkState::kClosed);
  queue_.close();
}

bool SubscriberLink::offer(Payload payload) {
  if (!alive()) return false;
  return queue_.offer(std::move(payload)) != OfferResult::kClosed;
}

void SubscriberLink::writer_loop() {
  while (true) {
    std::optional<Payload> p = queue_.pop();
    if (!p) break;
    try {
      write_frame(socket_, **p);
      messages_.fetch_add(1);
      bytes_.fetch_add((*p)->size());
    } catch (const std::exception& e) {
      LinkState expected = LinkState::kActive;
      if (state_.compare_exchange_strong(expected, LinkState::kErrored)) {
        std::lock_guard lock(error_mu_);
        error_ = e.what();
      }
      queue_.close();
      break;
    }
  }
  socket_.shutdown();
}

void SubscriberLink::close() {
  LinkState expected = LinkState::kActive;
  state_.compare_exchange_strong(expected, LinkState::kClosed);
  queue_.close();
  socket_.shutdown();
}

LinkStats SubscriberLink::stats() const { return {messages_.load(), bytes_.load(), queue_.dropped()}; }

std::string SubscriberLink::error() const {
  std::lock_guard lock(error_mu_);
  return error_;
}

PublisherLink::PublisherLink(net::Socket socket, ConnectionHeader reply, std::string publisher_uri,
                             MessageFn on_message, CloseFn on_close, std::size_t max_frame)
    : socket_(std::move(socket)),
      reply_(std::move(reply)),
      publisher_uri_(std::move(publisher_uri)),
      on_message_(std::move(on_message)),
      on_close_(std::move(on_close)),
      max_frame_(max_frame),
      id_(next_link_id.fetch_add(1)) {}

PublisherLink::~PublisherLink() {
  close();
  if (reader_.joinable() && reader_.get_id() != std::this_thread::get_id()) reader_.join();
  if (reader_.joinable()) reader_.detach();
}

void PublisherLink::start() {
  state_ = LinkState::kActive;
  reader_ = std::thread([this] { reader_loop(); });
}

void PublisherLink::reader_loop() {
  while (state_.load() == LinkState::kActive) {
    try {
      std::vector<std::uint8_t> frame = read_frame(socket_, std::nullopt, max_frame_);
      messages_.fetch_add(1);
      bytes_.fetch_add(frame.size());
      if (on_message_) on_message_(*this, std::move(frame));
    } catch (const std::exception& e) {
      LinkState expected = LinkState::kActive;
      if (state_.compare_exchange_strong(expected, LinkState::kErrored)) {
        std::lock_guard lock(error_mu_);
        error_ = e.what();
      }
      break;
    }
  }
  socket_.shutdown();
  if (on_close_) on_close_(*this);
}

void PublisherLink::close() {
  LinkState s = state_.load();
  while ((s == LinkState::kActive || s == LinkState::kHandshaking) &&
         !state_.compare_exchange_weak(s, LinkState::kClosed)) {
  }
  socket_.shutdown();
}

std::string PublisherLink::error() const {
  std::lock_guard lock(error_mu_);
  return error_;
}

}  // namespace roslite::tcpros

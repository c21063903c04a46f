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

#ifndef ROSLITE_TCPROS_QUEUE_H_
#define ROSLITE_TCPROS_QUEUE_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace roslite::tcpros {

// Serialized message shared by every link it is offered to.
using Payload = std::shared_ptr<const std::vector<std::uint8_t>>;

inline Payload make_payload(std::vector<std::uint8_t> bytes) {
  return std::make_shared<const std::vector<std::uint8_t>>(std::move(bytes));
}

struct QueuePolicy {
  std::size_t max_messages = 16;
  std::size_t max_bytes = 4u << 20;
};

enum class OfferResult { kAccepted, kAcceptedWithDrop, kClosed };

// Bounded drop-oldest queue between a publisher and one link's writer.
// A single message larger than max_bytes is still accepted, alone.
class SendQueue {
 public:
  explicit SendQueue(QueuePolicy policy = {}) : policy_(policy) {}

  OfferResult offer(Payload payload);
  // Blocks until a message is available or the queue is closed (nullopt).
  std::optional<Payload> pop();
  std::optional<Payload> pop_for(std::chrono::milliseconds timeout);
  void close();

  std::size_t size() const;
  std::uint64_t dropped() const { return dropped_.load(); }
  const QueuePolicy& policy() const { return policy_; }

 private:
  QueuePolicy policy_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Payload> items_;
  std::size_t bytes_ = 0;
  bool closed_ = false;
  std::atomic<std::uint64_t> dropped_{0};
};

}  // namespace roslite::tcpros

#endif  // ROSLITE_TCPROS_QUEUE_H_

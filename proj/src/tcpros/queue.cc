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

#include "roslite/tcpros/queue.h"

namespace roslite::tcpros {

OfferResult SendQueue::offer(Payload payload) {
  bool dropped = false;
  {
    std::lock_guard lock(mu_);
    if (closed_) return OfferResult::kClosed;
    std::size_t size = payload ? payload->size() : 0;
    while (!items_.empty() &&
           (items_.size() + 1 > policy_.max_messages || bytes_ + size > policy_.max_bytes)) {
      bytes_ -= items_.front() ? items_.front()->size() : 0;
      items_.pop_front();
      dropped_.fetch_add(1);
      dropped = true;
    }
    bytes_ += size;
    items_.push_back(std::move(payload));
  }
  cv_.notify_one();
  return dropped ? OfferResult::kAcceptedWithDrop : OfferResult::kAccepted;
}

std::optional<Payload> SendQueue::pop() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return closed_ || !items_.empty(); });
  if (items_.empty()) return std::nullopt;
  Payload p = std::move(items_.front());
  items_.pop_front();
  bytes_ -= p ? p->size() : 0;
  return p;
}

std::optional<Payload> SendQueue::pop_for(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  if (!cv_.wait_for(lock, timeout, [&] { return closed_ || !items_.empty(); })) return std::nullopt;
  if (items_.empty()) return std::nullopt;
  Payload p = std::move(items_.front());
  items_.pop_front();
  bytes_ -= p ? p->size() : 0;
  return p;
}

void SendQueue::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
    items_.clear();
    bytes_ = 0;
  }
  cv_.notify_all();
}

std::size_t SendQueue::size() const {
  std::lock_guard lock(mu_);
  return items_.size();
}

}  // namespace roslite::tcpros

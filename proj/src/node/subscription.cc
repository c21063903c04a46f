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

#include <algorithm>

#include "roslite/node/node.h"
#include "roslite/util/uri.h"

namespace roslite::node {

Subscription::Subscription(std::string topic, std::string type, std::string md5, RegistryPtr registry,
                           Callback callback, SubscribeOptions options, Context context)
    : topic_(std::move(topic)),
      callback_(std::move(callback)),
      options_(std::move(options)),
      context_(std::move(context)),
      type_(std::move(type)),
      md5_(std::move(md5)),
      registry_(std::move(registry)) {
  if (registry_ && type_ != tcpros::kAnyMd5) spec_ = registry_->find(type_);
  resolved_ = spec_ != nullptr;
  delivery_ = std::thread([this] { delivery_loop(); });
}

Subscription::~Subscription() { close(); }

std::string Subscription::type() const {
  std::lock_guard lock(schema_mu_);
  return type_;
}

std::string Subscription::md5() const {
  std::lock_guard lock(schema_mu_);
  return md5_;
}

RegistryPtr Subscription::registry() const {
  std::lock_guard lock(schema_mu_);
  return registry_;
}

const msg::MsgSpec* Subscription::spec() const {
  std::lock_guard lock(schema_mu_);
  return spec_;
}

std::vector<std::string> Subscription::known_publishers() const {
  std::lock_guard lock(slots_mu_);
  return known_;
}

std::vector<std::string> Subscription::connected_publishers() const {
  std::lock_guard lock(slots_mu_);
  std::vector<std::string> out;
  for (const auto& [uri, slot] : slots_) {
    std::lock_guard slot_lock(slot->mu);
    if (slot->link && slot->link->state() == tcpros::LinkState::kActive) out.push_back(uri);
  }
  return out;
}

std::vector<LinkInfo> Subscription::links() const {
  std::lock_guard lock(slots_mu_);
  std::vector<LinkInfo> out;
  for (const auto& [uri, slot] : slots_) {
    std::lock_guard slot_lock(slot->mu);
    if (!slot->link) continue;
    const auto& l = *slot->link;
    out.push_back(LinkInfo{l.id(), l.remote_caller_id(), topic_, 'i', tcpros::link_state_name(l.state()), l.stats(),
                           uri});
  }
  return out;
}

void Subscription::set_publishers(const std::vector<std::string>& uris) {
  std::lock_guard lock(slots_mu_);
  if (closed_) return;
  known_.clear();
  for (const auto& u : uris) {
    if (std::find(known_.begin(), known_.end(), u) == known_.end()) known_.push_back(u);
  }
  for (auto it = slots_.begin(); it != slots_.end();) {
    if (std::find(known_.begin(), known_.end(), it->first) == known_.end()) {
      stop_slot(*it->second);
      retired_.push_back(std::move(it->second));
      it = slots_.erase(it);
    } else {
      ++it;
    }
  }
  for (const auto& uri : known_) {
    if (slots_.count(uri)) continue;
    auto slot = std::make_unique<Slot>();
    slot->uri = uri;
    Slot* raw = slot.get();
    slots_[uri] = std::move(slot);
    raw->thread = std::thread([this, raw] { run_slot(*raw); });
  }
  reap_retired(false);
}

void Subscription::stop_slot(Slot& slot) {
  std::lock_guard lock(slot.mu);
  slot.stop = true;
  if (slot.connecting) slot.connecting->shutdown();
  if (slot.link) slot.link->close();
  slot.cv.notify_all();
}

void Subscription::reap_retired(bool wait_all) {
  for (auto it = retired_.begin(); it != retired_.end();) {
    bool finished;
    {
      std::lock_guard lock((*it)->mu);
      finished = (*it)->finished;
    }
    if (finished || wait_all) {
      if ((*it)->thread.joinable()) (*it)->thread.join();
      it = retired_.erase(it);
    } else {
      ++it;
    }
  }
}

// Asks the publisher's slave API where to connect.
static std::pair<std::string, std::uint16_t> request_topic(const std::string& uri, const std::string& caller_id,
                                                           const std::string& topic, Millis timeout) {
  xmlrpc::Client client(timeout);
  xmlrpc::RosRpcReply r = client.call_ros(
      uri, "requestTopic",
      {xmlrpc::XrValue(caller_id), xmlrpc::XrValue(topic), xmlrpc::XrValue::seq({xmlrpc::XrValue::seq({"TCPROS"})})});
  if (!r.ok()) throw Error("requestTopic refused by " + uri + ": " + r.status_message);
  const auto& params = r.payload.as_seq();
  if (params.size() < 3 || params[0].as_str() != "TCPROS") throw Error("publisher offered no TCPROS endpoint");
  int port = params[2].as_int();
  if (port <= 0 || port > 65535) throw Error("publisher offered invalid port");
  return {params[1].as_str(), static_cast<std::uint16_t>(port)};
}

void Subscription::run_slot(Slot& slot) {
  Millis backoff = options_.initial_backoff;
  auto wait_backoff = [&] {
    std::unique_lock lock(slot.mu);
    slot.cv.wait_for(lock, backoff, [&] { return slot.stop; });
    backoff = std::min(backoff * 2, options_.max_backoff);
  };
  while (true) {
    {
      std::lock_guard lock(slot.mu);
      if (slot.stop) break;
    }
    try {
      auto [host, port] = request_topic(slot.uri, context_.caller_id, topic_, context_.call_timeout);
      net::Socket socket = net::Socket::connect(host, port, context_.call_timeout);
      {
        std::lock_guard lock(slot.mu);
        if (slot.stop) break;
        slot.connecting = &socket;
      }
      tcpros::SubscriberRequest req{topic_, type(), md5(), context_.caller_id, options_.tcp_nodelay};
      tcpros::ConnectionHeader reply;
      try {
        reply = tcpros::subscriber_handshake(socket, req, context_.handshake_timeout);
      } catch (const tcpros::TcprosError& e) {
        if (dynamic_cast<const tcpros::HandshakeRejected*>(&e) || dynamic_cast<const tcpros::Md5Mismatch*>(&e)) {
          std::lock_guard lock(schema_mu_);
          last_handshake_error_ = e.what();
          handshake_failures_.fetch_add(1);
        }
        std::lock_guard lock(slot.mu);
        slot.connecting = nullptr;
        throw;
      } catch (...) {
        std::lock_guard lock(slot.mu);
        slot.connecting = nullptr;
        throw;
      }
      on_handshake(reply);
      auto link = std::make_unique<tcpros::PublisherLink>(
          std::move(socket), reply, slot.uri,
          [this](tcpros::PublisherLink& l, std::vector<std::uint8_t> bytes) { on_frame(l, std::move(bytes)); },
          [&slot](tcpros::PublisherLink&) {
            std::lock_guard lock(slot.mu);
            slot.cv.notify_all();
          },
          options_.max_frame);
      tcpros::PublisherLink* raw = link.get();
      {
        std::lock_guard lock(slot.mu);
        slot.connecting = nullptr;
        if (slot.stop) break;
        slot.link = std::move(link);
        slot.last_error.clear();
      }
      raw->start();
      backoff = options_.initial_backoff;
      {
        std::unique_lock lock(slot.mu);
        slot.cv.wait(lock, [&] { return slot.stop || raw->state() != tcpros::LinkState::kActive; });
      }
      std::unique_ptr<tcpros::PublisherLink> done;
      {
        std::lock_guard lock(slot.mu);
        done = std::move(slot.link);
        if (!done->error().empty()) slot.last_error = done->error();
      }
      done->close();
      done.reset();
    } catch (const std::exception& e) {
      std::lock_guard lock(slot.mu);
      slot.last_error = e.what();
    }
    wait_backoff();
  }
  std::lock_guard lock(slot.mu);
  slot.finished = true;
}

std::string Subscription::last_handshake_error() const {
  std::lock_guard lock(schema_mu_);
  return last_handshake_error_;
}

void Subscription::on_handshake(const tcpros::ConnectionHeader& reply) {
  std::lock_guard lock(schema_mu_);
  if (resolved_) return;
  std::string type = reply.get_or("type", "");
  const std::string* def = reply.get("message_definition");
  if (type.empty() || type == tcpros::kAnyMd5) return;
  // The publisher's own definition wins over a same-named local type.
  if (def && !def->empty()) {
    try {
      auto reg = std::make_shared<msg::SchemaRegistry>(msg::parse_definition_bundle(*def, type));
      if (const msg::MsgSpec* s = reg->find(type)) {
        registry_ = reg;
        spec_ = s;
      }
    } catch (const std::exception&) {
    }
  }
  if (!spec_ && registry_) spec_ = registry_->find(type);
  if (type_ == tcpros::kAnyMd5) type_ = type;
  if (md5_ == tcpros::kAnyMd5) md5_ = reply.get_or("md5sum", tcpros::kAnyMd5);
  resolved_ = spec_ != nullptr;
}

void Subscription::on_frame(tcpros::PublisherLink& link, std::vector<std::uint8_t> bytes) {
  MessageEvent ev;
  ev.bytes = tcpros::make_payload(std::move(bytes));
  {
    std::lock_guard lock(schema_mu_);
    ev.spec = spec_;
    ev.registry = registry_;
  }
  if (ev.spec && options_.decode) {
    try {
      ev.value = serde::deserialize(*ev.spec, *ev.bytes, *ev.registry);
    } catch (const std::exception& e) {
      ev.decode_error = e.what();
    }
  }
  ev.publisher = link.remote_caller_id();
  ev.publisher_uri = link.publisher_uri();
  ev.link_id = link.id();
  {
    std::lock_guard lock(delivery_mu_);
    if (delivery_stop_) return;
    if (pending_.size() >= std::max<std::size_t>(options_.delivery_queue, 1)) {
      pending_.pop_front();
      dropped_.fetch_add(1);
    }
    pending_.push_back(std::move(ev));
  }
  delivery_cv_.notify_one();
}

void Subscription::delivery_loop() {
  while (true) {
    MessageEvent ev;
    {
      std::unique_lock lock(delivery_mu_);
      delivery_cv_.wait(lock, [&] { return delivery_stop_ || !pending_.empty(); });
      if (delivery_stop_) return;
      ev = std::move(pending_.front());
      pending_.pop_front();
    }
    received_.fetch_add(1);
    try {
      if (callback_) callback_(ev);
    } catch (const std::exception&) {
      // A throwing callback does not stop the subscription.
    }
  }
}

void Subscription::close() {
  std::map<std::string, std::unique_ptr<Slot>> slots;
  {
    std::lock_guard lock(slots_mu_);
    if (closed_) return;
    closed_ = true;
    slots.swap(slots_);
    for (auto& [uri, slot] : slots) stop_slot(*slot);
  }
  for (auto& [uri, slot] : slots) {
    if (slot->thread.joinable()) slot->thread.join();
  }
  {
    std::lock_guard lock(slots_mu_);
    reap_retired(true);
  }
  {
    std::lock_guard lock(delivery_mu_);
    delivery_stop_ = true;
  }
  delivery_cv_.notify_all();
  if (delivery_.joinable() && delivery_.get_id() != std::this_thread::get_id()) delivery_.join();
}

}  // namespace roslite::node

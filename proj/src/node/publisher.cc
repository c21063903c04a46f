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

#include "roslite/node/node.h"

namespace roslite::node {

Publisher::Publisher(std::string topic, std::string type, std::string md5, std::string definition, bool latching,
                     RegistryPtr registry, tcpros::QueuePolicy policy)
    : topic_(std::move(topic)),
      type_(std::move(type)),
      md5_(std::move(md5)),
      definition_(std::move(definition)),
      latching_(latching),
      registry_(std::move(registry)),
      spec_(registry_ ? registry_->find(type_) : nullptr),
      policy_(policy) {}

std::size_t Publisher::publish(const serde::DynamicValue& value) {
  if (!spec_) throw msg::UnresolvedType(type_);
  return publish_bytes(serde::serialize(*spec_, value, *registry_));
}

std::size_t Publisher::publish_bytes(std::vector<std::uint8_t> bytes) {
  tcpros::Payload payload = tcpros::make_payload(std::move(bytes));
  std::lock_guard lock(mu_);
  if (closed_) return 0;
  published_.fetch_add(1);
  if (latching_) last_ = payload;
  prune_locked();
  std::size_t accepted = 0;
  for (auto& link : links_) accepted += link->offer(payload) ? 1 : 0;
  return accepted;
}

void Publisher::prune_locked() {
  std::erase_if(links_, [](const std::unique_ptr<tcpros::SubscriberLink>& l) { return !l->alive(); });
}

std::size_t Publisher::num_subscribers() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& l : links_) n += l->alive() ? 1 : 0;
  return n;
}

std::vector<LinkInfo> Publisher::links() const {
  std::lock_guard lock(mu_);
  std::vector<LinkInfo> out;
  for (const auto& l : links_) {
    out.push_back(LinkInfo{l->id(), l->remote_caller_id(), topic_, 'o', tcpros::link_state_name(l->state()),
                           l->stats(), ""});
  }
  return out;
}

tcpros::AdvertisedTopic Publisher::advertised(const std::string& caller_id) const {
  return tcpros::AdvertisedTopic{topic_, type_, md5_, definition_, caller_id, latching_};
}

void Publisher::add_link(net::Socket socket, tcpros::AcceptedSubscriber accepted) {
  std::lock_guard lock(mu_);
  if (closed_) return;
  prune_locked();
  links_.push_back(std::make_unique<tcpros::SubscriberLink>(std::move(socket), std::move(accepted), policy_,
                                                            latching_ ? last_ : nullptr));
}

void Publisher::close_all() {
  std::vector<std::unique_ptr<tcpros::SubscriberLink>> links;
  {
    std::lock_guard lock(mu_);
    closed_ = true;
    links.swap(links_);
  }
  for (auto& l : links) l->close();
}

}  // namespace roslite::node

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

#include <unistd.h>

#include <cstdlib>

#include "roslite/node/names.h"
#include "roslite/util/uri.h"

namespace roslite::node {

using xmlrpc::Params;
using xmlrpc::RosRpcReply;
using xmlrpc::XrValue;

NodeConfig NodeConfig::from_environment(std::string name) {
  NodeConfig c;
  c.name = std::move(name);
  if (const char* m = std::getenv("ROS_MASTER_URI"); m && *m) c.master_uri = m;
  c.advertised_host = net::default_advertised_host();
  return c;
}

namespace {

RegistryPtr default_registry() {
  // The builtin corpus is a process-lifetime static.
  return RegistryPtr(&msg::builtin_corpus(), [](const msg::SchemaRegistry*) {});
}

std::vector<std::string> to_strings(const XrValue& v) {
  std::vector<std::string> out;
  for (const auto& item : v.as_seq()) out.push_back(item.as_str());
  return out;
}

}  // namespace

Node::Node(NodeConfig config, RegistryPtr registry)
    : config_(std::move(config)), registry_(std::move(registry)), master_client_(config_.call_timeout) {}

std::shared_ptr<Node> Node::start(NodeConfig config, RegistryPtr registry) {
  if (config.name.empty()) throw InvalidName("node name required");
  if (config.name.front() != '/') config.name = "/" + config.name;
  if (!is_global_name(config.name)) throw InvalidName("invalid node name '" + config.name + "'");
  if (config.advertised_host.empty()) config.advertised_host = net::default_advertised_host();
  if (!config.offline) {
    util::Uri m = util::parse_uri(config.master_uri, 11311);
    if (m.scheme != "http") throw util::UriError("master uri must be http: " + config.master_uri);
  }
  std::shared_ptr<Node> node(new Node(std::move(config), registry ? std::move(registry) : default_registry()));
  node->install_slave_api();
  node->slave_.start(node->config_.bind_address, node->config_.xmlrpc_port);
  node->tcpros_.start(node->config_.bind_address, node->config_.tcpros_port,
                      [raw = node.get()](net::Socket& s) { raw->serve_tcpros(s); });
  node->uri_ = util::make_uri("http", node->config_.advertised_host, node->slave_.port(), "/");
  if (!node->config_.offline) {
    try {
      node->master_client_.call_ros(node->config_.master_uri, "getUri", {XrValue(node->config_.name)});
    } catch (const std::exception& e) {
      node->shut_ = true;
      node->tcpros_.stop();
      node->slave_.stop();
      throw MasterUnreachable("cannot reach master at " + node->config_.master_uri + ": " + e.what());
    }
  }
  return node;
}

Node::~Node() { shutdown(); }

std::string Node::resolve(std::string_view name) const { return resolve_name(name, config_.name); }

std::string Node::rosrpc_uri() const { return util::make_uri("rosrpc", config_.advertised_host, tcpros_.port(), ""); }

void Node::check_running() const {
  if (shut_) throw NodeShutdown("node " + config_.name + " is shut down");
}

void Node::require_master(const char* what) const {
  check_running();
  if (config_.offline) throw MasterUnreachable(std::string(what) + " needs a master; node is offline");
}

RosRpcReply Node::master_call(const std::string& method, Params params) {
  try {
    return master_client_.call_ros(config_.master_uri, method, std::move(params));
  } catch (const IoError& e) {
    throw MasterUnreachable(method + ": " + e.what());
  } catch (const TimeoutError& e) {
    throw MasterUnreachable(method + ": " + e.what());
  }
}

XrValue Node::master_value(const std::string& method, Params params) {
  RosRpcReply r = master_call(method, std::move(params));
  if (!r.ok()) throw MasterError(r.code, r.status_message);
  return r.payload;
}

void Node::install_slave_api() {
  auto& s = slave_;
  auto reply = [](RosRpcReply r) { return r.to_value(); };
  s.register_method("getPid", [reply](const Params&) {
    return reply(xmlrpc::success("", XrValue(static_cast<std::int32_t>(::getpid()))));
  });
  s.register_method("getMasterUri",
                    [this, reply](const Params&) { return reply(xmlrpc::success("", XrValue(config_.master_uri))); });
  s.register_method("getName", [this, reply](const Params&) { return reply(xmlrpc::success("", XrValue(config_.name))); });
  s.register_method("getBusStats", [this, reply](const Params&) {
    XrValue::Seq pubs, subs;
    for (const auto& l : bus_info()) {
      auto msgs = static_cast<std::int32_t>(l.stats.messages);
      auto bytes = static_cast<std::int32_t>(l.stats.bytes);
      auto& target = l.direction == 'o' ? pubs : subs;
      target.push_back(XrValue::seq({l.topic, XrValue::seq({XrValue::seq({static_cast<std::int32_t>(l.id), bytes, msgs,
                                                                          l.state == "active"})})}));
    }
    return reply(xmlrpc::success("", XrValue::seq({XrValue(pubs), XrValue(subs), XrValue::seq({0, 0, 0})})));
  });
  s.register_method("getBusInfo", [this, reply](const Params&) {
    XrValue::Seq out;
    for (const auto& l : bus_info()) {
      out.push_back(XrValue::seq({static_cast<std::int32_t>(l.id), l.remote, std::string(1, l.direction), "TCPROS",
                                  l.topic, l.state == "active", l.endpoint}));
    }
    return reply(xmlrpc::success("bus info", XrValue(out)));
  });
  s.register_method("getSubscriptions", [this, reply](const Params&) {
    std::lock_guard lock(mu_);
    XrValue::Seq out;
    for (const auto& [topic, sub] : subscriptions_) out.push_back(XrValue::seq({topic, sub->type()}));
    return reply(xmlrpc::success("subscriptions", XrValue(out)));
  });
  s.register_method("getPublications", [this, reply](const Params&) {
    std::lock_guard lock(mu_);
    XrValue::Seq out;
    for (const auto& [topic, pub] : publishers_) out.push_back(XrValue::seq({topic, pub->type()}));
    return reply(xmlrpc::success("publications", XrValue(out)));
  });
  s.register_method("publisherUpdate", [this, reply](const Params& p) {
    if (p.size() < 3) throw Error("publisherUpdate needs (caller_id, topic, publishers)");
    std::shared_ptr<Subscription> sub = find_subscription(p[1].as_str());
    if (sub) sub->set_publishers(to_strings(p[2]));
    return reply(xmlrpc::success("publisher update received", XrValue(0)));
  });
  s.register_method("paramUpdate", [this, reply](const Params& p) {
    if (p.size() < 3) throw Error("paramUpdate needs (caller_id, key, value)");
    std::string key = p[1].as_str();
    if (key.size() > 1 && key.back() == '/') key.pop_back();
    ParamCallback cb;
    {
      std::lock_guard lock(mu_);
      if (auto it = param_callbacks_.find(key); it != param_callbacks_.end()) cb = it->second;
    }
    if (cb) cb(key, p[2]);
    return reply(xmlrpc::success("", XrValue(0)));
  });
  s.register_method("requestTopic", [this, reply](const Params& p) {
    if (p.size() < 3) throw Error("requestTopic needs (caller_id, topic, protocols)");
    const std::string& topic = p[1].as_str();
    if (!find_publisher(topic)) {
      return reply(RosRpcReply{RosRpcReply::kError, "Not a publisher of [" + topic + "]", XrValue(XrValue::Seq{})});
    }
    for (const auto& proto : p[2].as_seq()) {
      if (proto.is_seq() && !proto.as_seq().empty() && proto.as_seq()[0].is_str() &&
          proto.as_seq()[0].as_str() == "TCPROS") {
        return reply(xmlrpc::success(
            "ready on " + config_.advertised_host + ":" + std::to_string(tcpros_.port()),
            XrValue::seq({"TCPROS", config_.advertised_host, static_cast<std::int32_t>(tcpros_.port())})));
      }
    }
    return reply(RosRpcReply{RosRpcReply::kFailure, "no supported protocol implementations", XrValue(XrValue::Seq{})});
  });
  s.register_method("shutdown", [this, reply](const Params& p) {
    shutdown_requested_ = true;
    {
      std::lock_guard lock(shutdown_mu_);
    }
    shutdown_cv_.notify_all();
    std::string why = p.size() > 1 && p[1].is_str() ? p[1].as_str() : "";
    return reply(xmlrpc::success("shutdown requested" + (why.empty() ? "" : ": " + why), XrValue(0)));
  });
}

void Node::serve_tcpros(net::Socket& socket) {
  tcpros::ConnectionHeader header = tcpros::read_header(socket, net::Clock::now() + config_.handshake_timeout);
  if (header.has("service")) {
    tcpros::serve_service_connection(
        socket, header,
        [this](const std::string& name) -> std::shared_ptr<const tcpros::ServiceBinding> {
          std::lock_guard lock(mu_);
          auto it = services_.find(name);
          return it == services_.end() ? nullptr : it->second;
        },
        config_.handshake_timeout);
    return;
  }
  std::shared_ptr<Publisher> pub;
  auto lookup = [this, &pub](const std::string& topic) -> std::optional<tcpros::AdvertisedTopic> {
    pub = find_publisher(topic);
    if (!pub) return std::nullopt;
    return pub->advertised(config_.name);
  };
  tcpros::AcceptedSubscriber accepted = tcpros::publisher_answer(socket, header, lookup, config_.handshake_timeout);
  if (pub) pub->add_link(std::move(socket), std::move(accepted));
}

std::shared_ptr<Publisher> Node::find_publisher(const std::string& topic) const {
  std::lock_guard lock(mu_);
  auto it = publishers_.find(topic);
  return it == publishers_.end() ? nullptr : it->second;
}

std::shared_ptr<Subscription> Node::find_subscription(const std::string& topic) const {
  std::lock_guard lock(mu_);
  auto it = subscriptions_.find(topic);
  return it == subscriptions_.end() ? nullptr : it->second;
}

std::vector<LinkInfo> Node::bus_info() const {
  std::vector<std::shared_ptr<Publisher>> pubs;
  std::vector<std::shared_ptr<Subscription>> subs;
  {
    std::lock_guard lock(mu_);
    for (const auto& [_, p] : publishers_) pubs.push_back(p);
    for (const auto& [_, s] : subscriptions_) subs.push_back(s);
  }
  std::vector<LinkInfo> out;
  for (const auto& p : pubs) {
    auto l = p->links();
    out.insert(out.end(), l.begin(), l.end());
  }
  for (const auto& s : subs) {
    auto l = s->links();
    out.insert(out.end(), l.begin(), l.end());
  }
  return out;
}

std::shared_ptr<Publisher> Node::advertise(const std::string& topic, const std::string& type, bool latching) {
  const msg::MsgSpec* spec = registry_->find(type);
  if (!spec) throw msg::UnresolvedType(type);
  return advertise_raw(topic, type, msg::compute_md5(*spec, *registry_), msg::dependency_text(*spec, *registry_),
                       latching);
}

std::shared_ptr<Publisher> Node::advertise_raw(const std::string& topic, const std::string& type,
                                               const std::string& md5, const std::string& definition, bool latching) {
  check_running();
  std::string name = resolve(topic);
  std::shared_ptr<Publisher> pub;
  {
    std::lock_guard lock(mu_);
    if (auto it = publishers_.find(name); it != publishers_.end()) {
      if (it->second->md5() != md5 || it->second->type() != type) {
        throw TypeConflict("topic " + name + " already advertised as " + it->second->type() + " (" +
                           it->second->md5() + ")");
      }
      return it->second;
    }
    pub = std::make_shared<Publisher>(name, type, md5, definition, latching, registry_, config_.queue);
    publishers_[name] = pub;
  }
  if (!config_.offline) {
    try {
      master_value("registerPublisher", {XrValue(config_.name), XrValue(name), XrValue(type), XrValue(uri_)});
    } catch (...) {
      std::lock_guard lock(mu_);
      publishers_.erase(name);
      throw;
    }
  }
  return pub;
}

void Node::unadvertise(const std::string& topic) {
  std::string name = resolve(topic);
  std::shared_ptr<Publisher> pub;
  {
    std::lock_guard lock(mu_);
    auto it = publishers_.find(name);
    if (it == publishers_.end()) return;
    pub = it->second;
    publishers_.erase(it);
  }
  if (!config_.offline && !shut_) {
    try {
      master_call("unregisterPublisher", {XrValue(config_.name), XrValue(name), XrValue(uri_)});
    } catch (const std::exception&) {
    }
  }
  pub->close_all();
}

std::shared_ptr<Subscription> Node::subscribe(const std::string& topic, const std::string& type,
                                              Subscription::Callback callback, SubscribeOptions options) {
  check_running();
  std::string name = resolve(topic);
  std::string md5 = tcpros::kAnyMd5;
  if (type != tcpros::kAnyMd5) {
    if (const msg::MsgSpec* spec = registry_->find(type)) md5 = msg::compute_md5(*spec, *registry_);
  }
  std::vector<std::string> direct = options.direct_publishers;
  std::shared_ptr<Subscription> sub;
  {
    std::lock_guard lock(mu_);
    if (subscriptions_.count(name)) throw TypeConflict("already subscribed to " + name + " on this node");
    sub = std::make_shared<Subscription>(name, type, md5, registry_, std::move(callback), std::move(options),
                                         Subscription::Context{config_.name, config_.call_timeout,
                                                               config_.handshake_timeout});
    subscriptions_[name] = sub;
  }
  if (config_.offline) {
    sub->set_publishers(direct);
    return sub;
  }
  try {
    XrValue pubs =
        master_value("registerSubscriber", {XrValue(config_.name), XrValue(name), XrValue(type), XrValue(uri_)});
    std::vector<std::string> uris = to_strings(pubs);
    uris.insert(uris.end(), direct.begin(), direct.end());
    sub->set_publishers(uris);
  } catch (...) {
    {
      std::lock_guard lock(mu_);
      subscriptions_.erase(name);
    }
    sub->close();
    throw;
  }
  return sub;
}

void Node::unsubscribe(const std::string& topic) {
  std::string name = resolve(topic);
  std::shared_ptr<Subscription> sub;
  {
    std::lock_guard lock(mu_);
    auto it = subscriptions_.find(name);
    if (it == subscriptions_.end()) return;
    sub = it->second;
    subscriptions_.erase(it);
  }
  if (!config_.offline && !shut_) {
    try {
      master_call("unregisterSubscriber", {XrValue(config_.name), XrValue(name), XrValue(uri_)});
    } catch (const std::exception&) {
    }
  }
  sub->close();
}

void Node::advertise_service(const std::string& name, const std::string& srv_type, ServiceHandler handler) {
  const msg::SrvSpec& srv = registry_->service_at(srv_type);
  RegistryPtr reg = registry_;
  const msg::MsgSpec* req = &srv.request;
  const msg::MsgSpec* res = &srv.response;
  advertise_service_raw(name, srv_type, msg::compute_srv_md5(srv, *registry_),
                        [reg, req, res, handler = std::move(handler)](std::span<const std::uint8_t> bytes) {
                          serde::DynamicValue request = serde::deserialize(*req, bytes, *reg);
                          return serde::serialize(*res, handler(request), *reg);
                        });
}

void Node::advertise_service_raw(const std::string& name, const std::string& srv_type, const std::string& md5,
                                 RawServiceHandler handler) {
  check_running();
  std::string resolved = resolve(name);
  auto binding = std::make_shared<tcpros::ServiceBinding>();
  binding->name = resolved;
  binding->type = srv_type;
  binding->md5 = md5;
  binding->request_type = srv_type + "Request";
  binding->response_type = srv_type + "Response";
  binding->caller_id = config_.name;
  binding->handler = std::move(handler);
  {
    std::lock_guard lock(mu_);
    services_[resolved] = binding;
  }
  if (!config_.offline) {
    try {
      master_value("registerService", {XrValue(config_.name), XrValue(resolved), XrValue(rosrpc_uri()), XrValue(uri_)});
    } catch (...) {
      std::lock_guard lock(mu_);
      services_.erase(resolved);
      throw;
    }
  }
}

void Node::unadvertise_service(const std::string& name) {
  std::string resolved = resolve(name);
  {
    std::lock_guard lock(mu_);
    if (!services_.erase(resolved)) return;
  }
  if (!config_.offline && !shut_) {
    try {
      master_call("unregisterService", {XrValue(config_.name), XrValue(resolved), XrValue(rosrpc_uri())});
    } catch (const std::exception&) {
    }
  }
}

std::string Node::lookup_service(const std::string& name) {
  require_master("lookupService");
  std::string resolved = resolve(name);
  RosRpcReply r = master_call("lookupService", {XrValue(config_.name), XrValue(resolved)});
  if (!r.ok()) throw ServiceNotFound("service " + resolved + " not found: " + r.status_message);
  return r.payload.as_str();
}

std::string Node::service_type(const std::string& name) {
  check_running();
  util::Uri target = util::parse_uri(lookup_service(name));
  tcpros::ServiceRequestHeader request{resolve(name), tcpros::kAnyMd5, config_.name};
  request.probe = true;
  tcpros::ServiceConnection conn =
      tcpros::ServiceConnection::open(target.host, target.port, request, config_.handshake_timeout);
  return conn.reply().get_or("type", "");
}

tcpros::ServiceResponse Node::call_service_at(const std::string& rosrpc_uri, const std::string& name,
                                              const std::string& md5, std::span<const std::uint8_t> request,
                                              std::optional<Millis> timeout) {
  check_running();
  util::Uri target = util::parse_uri(rosrpc_uri);
  Millis t = timeout.value_or(config_.service_timeout);
  tcpros::ServiceConnection conn = tcpros::ServiceConnection::open(
      target.host, target.port, {resolve(name), md5, config_.name}, std::min(t, config_.handshake_timeout));
  return conn.call(request, t);
}

tcpros::ServiceResponse Node::call_service_raw(const std::string& name, const std::string& md5,
                                               std::span<const std::uint8_t> request, std::optional<Millis> timeout) {
  return call_service_at(lookup_service(name), name, md5, request, timeout);
}

serde::DynamicValue Node::call_service(const std::string& name, const std::string& srv_type,
                                       const serde::DynamicValue& request, std::optional<Millis> timeout) {
  const msg::SrvSpec& srv = registry_->service_at(srv_type);
  std::vector<std::uint8_t> bytes = serde::serialize(srv.request, request, *registry_);
  tcpros::ServiceResponse r = call_service_raw(name, msg::compute_srv_md5(srv, *registry_), bytes, timeout);
  if (!r.ok) throw RemoteFailure(r.error_text());
  return serde::deserialize(srv.response, r.payload, *registry_);
}

ParamValue Node::param_get(const std::string& key) {
  require_master("getParam");
  std::string resolved = resolve(key);
  RosRpcReply r = master_call("getParam", {XrValue(config_.name), XrValue(resolved)});
  if (!r.ok()) throw ParamNotFound("parameter " + resolved + " is not set");
  return r.payload;
}

void Node::param_set(const std::string& key, const ParamValue& value) {
  require_master("setParam");
  master_value("setParam", {XrValue(config_.name), XrValue(resolve(key)), value});
}

bool Node::param_has(const std::string& key) {
  require_master("hasParam");
  return master_value("hasParam", {XrValue(config_.name), XrValue(resolve(key))}).as_bool();
}

void Node::param_delete(const std::string& key) {
  require_master("deleteParam");
  std::string resolved = resolve(key);
  RosRpcReply r = master_call("deleteParam", {XrValue(config_.name), XrValue(resolved)});
  if (!r.ok()) throw ParamNotFound("parameter " + resolved + " is not set");
}

std::optional<std::string> Node::param_search(const std::string& key) {
  require_master("searchParam");
  RosRpcReply r = master_call("searchParam", {XrValue(config_.name), XrValue(key)});
  if (!r.ok() || !r.payload.is_str() || r.payload.as_str().empty()) return std::nullopt;
  return r.payload.as_str();
}

std::vector<std::string> Node::param_names() {
  require_master("getParamNames");
  return to_strings(master_value("getParamNames", {XrValue(config_.name)}));
}

ParamValue Node::param_subscribe(const std::string& key, ParamCallback callback) {
  require_master("subscribeParam");
  std::string resolved = resolve(key);
  {
    std::lock_guard lock(mu_);
    param_callbacks_[resolved] = std::move(callback);
  }
  return master_value("subscribeParam", {XrValue(config_.name), XrValue(uri_), XrValue(resolved)});
}

SystemState Node::system_state() {
  require_master("getSystemState");
  XrValue v = master_value("getSystemState", {XrValue(config_.name)});
  auto entries = [](const XrValue& list) {
    SystemState::Entries out;
    for (const auto& e : list.as_seq()) out.emplace_back(e.as_seq().at(0).as_str(), to_strings(e.as_seq().at(1)));
    return out;
  };
  const auto& s = v.as_seq();
  if (s.size() != 3) throw xmlrpc::ProtocolError("getSystemState payload must have 3 lists");
  return SystemState{entries(s[0]), entries(s[1]), entries(s[2])};
}

std::vector<std::pair<std::string, std::string>> Node::published_topics() {
  require_master("getPublishedTopics");
  std::vector<std::pair<std::string, std::string>> out;
  XrValue v = master_value("getPublishedTopics", {XrValue(config_.name), XrValue("")});
  for (const auto& e : v.as_seq()) {
    out.emplace_back(e.as_seq().at(0).as_str(), e.as_seq().at(1).as_str());
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> Node::topic_types() {
  require_master("getTopicTypes");
  std::vector<std::pair<std::string, std::string>> out;
  XrValue v = master_value("getTopicTypes", {XrValue(config_.name)});
  for (const auto& e : v.as_seq()) {
    out.emplace_back(e.as_seq().at(0).as_str(), e.as_seq().at(1).as_str());
  }
  return out;
}

std::string Node::lookup_node(const std::string& name) {
  require_master("lookupNode");
  return master_value("lookupNode", {XrValue(config_.name), XrValue(resolve(name))}).as_str();
}

bool Node::wait_for_shutdown(std::optional<Millis> timeout) {
  std::unique_lock lock(shutdown_mu_);
  auto done = [&] { return shut_.load() || shutdown_requested_.load(); };
  if (!timeout) {
    shutdown_cv_.wait(lock, done);
    return true;
  }
  return shutdown_cv_.wait_for(lock, *timeout, done);
}

void Node::shutdown() {
  if (shut_.exchange(true)) return;
  std::map<std::string, std::shared_ptr<Publisher>> pubs;
  std::map<std::string, std::shared_ptr<Subscription>> subs;
  std::map<std::string, std::shared_ptr<const tcpros::ServiceBinding>> srvs;
  std::map<std::string, ParamCallback> params;
  {
    std::lock_guard lock(mu_);
    pubs.swap(publishers_);
    subs.swap(subscriptions_);
    srvs.swap(services_);
    params.swap(param_callbacks_);
  }
  // Best effort: the first unreachable-master error skips the remaining calls.
  bool master_ok = !config_.offline;
  auto unregister = [&](const std::string& method, Params p) {
    if (!master_ok) return;
    try {
      master_client_.call(config_.master_uri, method, p);
    } catch (const IoError&) {
      master_ok = false;
    } catch (const TimeoutError&) {
      master_ok = false;
    } catch (const std::exception&) {
    }
  };
  for (const auto& [topic, _] : pubs) unregister("unregisterPublisher", {XrValue(config_.name), topic, XrValue(uri_)});
  for (const auto& [topic, _] : subs) unregister("unregisterSubscriber", {XrValue(config_.name), topic, XrValue(uri_)});
  for (const auto& [name, _] : srvs) unregister("unregisterService", {XrValue(config_.name), name, XrValue(rosrpc_uri())});
  for (const auto& [key, _] : params) unregister("unsubscribeParam", {XrValue(config_.name), XrValue(uri_), key});
  for (auto& [_, p] : pubs) p->close_all();
  for (auto& [_, s] : subs) s->close();
  tcpros_.stop();
  slave_.stop();
  {
    std::lock_guard lock(shutdown_mu_);
  }
  shutdown_cv_.notify_all();
}

}  // namespace roslite::node

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

#include "roslite/node/master.h"

#include <unistd.h>

#include "roslite/node/names.h"
#include "roslite/util/uri.h"

namespace roslite::node {

using xmlrpc::Params;
using xmlrpc::RosRpcReply;
using xmlrpc::XrValue;

namespace {

const std::string& str_arg(const Params& p, std::size_t i) {
  if (i >= p.size()) throw Error("missing argument " + std::to_string(i));
  return p[i].as_str();
}

}  // namespace

void Master::start(const std::string& bind_host, std::uint16_t port, std::string advertised_host) {
  if (running_) return;
  install();
  server_.start(bind_host, port);
  if (advertised_host.empty()) {
    advertised_host = (bind_host.empty() || bind_host == "0.0.0.0" || bind_host == "::") ? net::default_advertised_host()
                                                                                         : bind_host;
  }
  uri_ = util::make_uri("http", advertised_host, server_.port(), "/");
  notify_stop_ = false;
  notifier_ = std::thread([this] { notify_loop(); });
  running_ = true;
}

void Master::stop() {
  if (!running_) return;
  running_ = false;
  server_.stop();
  {
    std::lock_guard lock(notify_mu_);
    notify_stop_ = true;
  }
  notify_cv_.notify_all();
  if (notifier_.joinable()) notifier_.join();
}

std::uint64_t Master::notifications_sent() const {
  std::lock_guard lock(notify_mu_);
  return notified_;
}

void Master::note_node(const std::string& caller_id, const std::string& api) {
  if (!api.empty()) nodes_[caller_id] = api;
}

XrValue Master::publisher_apis(const std::string& topic) const {
  XrValue::Seq apis;
  if (auto it = publishers_.find(topic); it != publishers_.end()) {
    for (const auto& r : it->second) apis.emplace_back(r.api);
  }
  return XrValue(std::move(apis));
}

void Master::queue_publisher_update(const std::string& topic) {
  auto it = subscribers_.find(topic);
  if (it == subscribers_.end()) return;
  XrValue apis = publisher_apis(topic);
  {
    std::lock_guard lock(notify_mu_);
    for (const auto& r : it->second) pending_.push_back({r.api, "publisherUpdate", {XrValue("/master"), topic, apis}});
  }
  notify_cv_.notify_one();
}

void Master::queue_param_update(const std::string& changed_key) {
  std::vector<Notification> out;
  for (const auto& [key, subs] : param_subscribers_) {
    bool related = changed_key == key || changed_key.starts_with(key == "/" ? key : key + "/") ||
                   key.starts_with(changed_key == "/" ? changed_key : changed_key + "/");
    if (!related) continue;
    XrValue value = params_.get(key).value_or(XrValue(XrValue::Record{}));
    // Subscribed keys are reported with a trailing slash, like the reference master.
    for (const auto& r : subs) out.push_back({r.api, "paramUpdate", {XrValue("/master"), key + "/", value}});
  }
  if (out.empty()) return;
  {
    std::lock_guard lock(notify_mu_);
    for (auto& n : out) pending_.push_back(std::move(n));
  }
  notify_cv_.notify_one();
}

void Master::notify_loop() {
  xmlrpc::Client client(std::chrono::milliseconds(2000));
  while (true) {
    Notification n;
    {
      std::unique_lock lock(notify_mu_);
      notify_cv_.wait(lock, [&] { return notify_stop_ || !pending_.empty(); });
      if (notify_stop_) return;
      n = std::move(pending_.front());
      pending_.pop_front();
    }
    try {
      client.call(n.api, n.method, n.params);
    } catch (const std::exception&) {
      // Dead subscribers are tolerated; they are cleaned up on unregister.
    }
    std::lock_guard lock(notify_mu_);
    ++notified_;
  }
}

void Master::install() {
  auto reply = [](RosRpcReply r) { return r.to_value(); };
  auto& s = server_;

  s.register_method("getUri", [this, reply](const Params&) { return reply(xmlrpc::success("", XrValue(uri_))); });
  s.register_method("getPid", [reply](const Params&) {
    return reply(xmlrpc::success("", XrValue(static_cast<std::int32_t>(::getpid()))));
  });

  s.register_method("registerPublisher", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    std::string topic = resolve_name(str_arg(p, 1), caller);
    const auto& type = str_arg(p, 2);
    const auto& api = str_arg(p, 3);
    std::lock_guard lock(mu_);
    note_node(caller, api);
    auto& regs = publishers_[topic];
    bool known = false;
    for (auto& r : regs) {
      if (r.caller_id == caller) {
        r.api = api;
        known = true;
      }
    }
    if (!known) regs.push_back({caller, api});
    if (type != "*" || !topic_types_.count(topic)) topic_types_[topic] = type;
    XrValue::Seq subs;
    if (auto it = subscribers_.find(topic); it != subscribers_.end()) {
      for (const auto& r : it->second) subs.emplace_back(r.api);
    }
    queue_publisher_update(topic);
    return reply(xmlrpc::success("Registered [" + caller + "] as publisher of [" + topic + "]", XrValue(subs)));
  });

  s.register_method("unregisterPublisher", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    std::string topic = resolve_name(str_arg(p, 1), caller);
    const auto& api = str_arg(p, 2);
    std::lock_guard lock(mu_);
    int removed = 0;
    if (auto it = publishers_.find(topic); it != publishers_.end()) {
      std::erase_if(it->second, [&](const Registration& r) {
        bool match = r.caller_id == caller && r.api == api;
        removed += match;
        return match;
      });
      if (it->second.empty()) publishers_.erase(it);
    }
    if (removed) queue_publisher_update(topic);
    return reply(xmlrpc::success("Unregistered [" + caller + "] as publisher of [" + topic + "]", XrValue(removed)));
  });

  s.register_method("registerSubscriber", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    std::string topic = resolve_name(str_arg(p, 1), caller);
    const auto& type = str_arg(p, 2);
    const auto& api = str_arg(p, 3);
    std::lock_guard lock(mu_);
    note_node(caller, api);
    auto& regs = subscribers_[topic];
    bool known = false;
    for (auto& r : regs) {
      if (r.caller_id == caller) {
        r.api = api;
        known = true;
      }
    }
    if (!known) regs.push_back({caller, api});
    if (type != "*" && !topic_types_.count(topic)) topic_types_[topic] = type;
    return reply(xmlrpc::success("Subscribed to [" + topic + "]", publisher_apis(topic)));
  });

  s.register_method("unregisterSubscriber", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    std::string topic = resolve_name(str_arg(p, 1), caller);
    const auto& api = str_arg(p, 2);
    std::lock_guard lock(mu_);
    int removed = 0;
    if (auto it = subscribers_.find(topic); it != subscribers_.end()) {
      std::erase_if(it->second, [&](const Registration& r) {
        bool match = r.caller_id == caller && r.api == api;
        removed += match;
        return match;
      });
      if (it->second.empty()) subscribers_.erase(it);
    }
    return reply(xmlrpc::success("Unsubscribed [" + caller + "] from [" + topic + "]", XrValue(removed)));
  });

  s.register_method("registerService", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    std::string service = resolve_name(str_arg(p, 1), caller);
    const auto& service_api = str_arg(p, 2);
    const auto& caller_api = str_arg(p, 3);
    std::lock_guard lock(mu_);
    note_node(caller, caller_api);
    services_[service] = {caller, service_api, caller_api};
    return reply(xmlrpc::success("Registered [" + caller + "] with service [" + service + "]", XrValue(0)));
  });

  s.register_method("unregisterService", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    std::string service = resolve_name(str_arg(p, 1), caller);
    const auto& service_api = str_arg(p, 2);
    std::lock_guard lock(mu_);
    int removed = 0;
    if (auto it = services_.find(service); it != services_.end() && it->second.service_api == service_api) {
      services_.erase(it);
      removed = 1;
    }
    return reply(xmlrpc::success("Unregistered [" + caller + "] with service [" + service + "]", XrValue(removed)));
  });

  s.register_method("lookupService", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    std::string service = resolve_name(str_arg(p, 1), caller);
    std::lock_guard lock(mu_);
    auto it = services_.find(service);
    if (it == services_.end()) {
      return reply(RosRpcReply{RosRpcReply::kError, "no provider for [" + service + "]", XrValue("")});
    }
    return reply(xmlrpc::success("rosrpc URI: [" + it->second.service_api + "]", XrValue(it->second.service_api)));
  });

  s.register_method("lookupNode", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    std::string name = resolve_name(str_arg(p, 1), caller);
    std::lock_guard lock(mu_);
    auto it = nodes_.find(name);
    if (it == nodes_.end()) return reply(RosRpcReply{RosRpcReply::kError, "unknown node [" + name + "]", XrValue("")});
    return reply(xmlrpc::success("node api", XrValue(it->second)));
  });

  s.register_method("getPublishedTopics", [this, reply](const Params&) {
    std::lock_guard lock(mu_);
    XrValue::Seq out;
    for (const auto& [topic, regs] : publishers_) {
      if (regs.empty()) continue;
      auto t = topic_types_.find(topic);
      out.push_back(XrValue::seq({topic, t == topic_types_.end() ? std::string("*") : t->second}));
    }
    return reply(xmlrpc::success("current topics", XrValue(out)));
  });

  s.register_method("getTopicTypes", [this, reply](const Params&) {
    std::lock_guard lock(mu_);
    XrValue::Seq out;
    for (const auto& [topic, type] : topic_types_) out.push_back(XrValue::seq({topic, type}));
    return reply(xmlrpc::success("current system topic types", XrValue(out)));
  });

  s.register_method("getSystemState", [this, reply](const Params&) {
    std::lock_guard lock(mu_);
    auto listing = [](const std::map<std::string, std::vector<Registration>>& m) {
      XrValue::Seq out;
      for (const auto& [topic, regs] : m) {
        if (regs.empty()) continue;
        XrValue::Seq names;
        for (const auto& r : regs) names.emplace_back(r.caller_id);
        out.push_back(XrValue::seq({topic, XrValue(names)}));
      }
      return XrValue(out);
    };
    XrValue::Seq srvs;
    for (const auto& [name, e] : services_) srvs.push_back(XrValue::seq({name, XrValue::seq({e.caller_id})}));
    return reply(xmlrpc::success("current system state",
                                 XrValue::seq({listing(publishers_), listing(subscribers_), XrValue(srvs)})));
  });

  s.register_method("setParam", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    std::string key = resolve_name(str_arg(p, 1), caller);
    if (p.size() < 3) throw Error("setParam needs a value");
    std::lock_guard lock(mu_);
    params_.set(key, p[2]);
    queue_param_update(key);
    return reply(xmlrpc::success("parameter " + key + " set", XrValue(0)));
  });

  s.register_method("getParam", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    std::string key = resolve_name(str_arg(p, 1), caller);
    std::lock_guard lock(mu_);
    auto v = params_.get(key);
    if (!v) return reply(RosRpcReply{RosRpcReply::kError, "Parameter [" + key + "] is not set", XrValue(0)});
    return reply(xmlrpc::success("Parameter [" + key + "]", *v));
  });

  s.register_method("hasParam", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    std::string key = resolve_name(str_arg(p, 1), caller);
    std::lock_guard lock(mu_);
    return reply(xmlrpc::success(key, XrValue(params_.has(key))));
  });

  s.register_method("deleteParam", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    std::string key = resolve_name(str_arg(p, 1), caller);
    std::lock_guard lock(mu_);
    if (!params_.erase(key)) {
      return reply(RosRpcReply{RosRpcReply::kError, "parameter [" + key + "] is not set", XrValue(0)});
    }
    queue_param_update(key);
    return reply(xmlrpc::success("parameter " + key + " deleted", XrValue(0)));
  });

  s.register_method("searchParam", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    const auto& key = str_arg(p, 1);
    std::lock_guard lock(mu_);
    auto found = params_.search(caller, key);
    if (!found) {
      return reply(RosRpcReply{RosRpcReply::kError,
                               "Cannot find parameter [" + key + "] in an upwards search", XrValue("")});
    }
    return reply(xmlrpc::success("Found [" + *found + "]", XrValue(*found)));
  });

  s.register_method("getParamNames", [this, reply](const Params&) {
    std::lock_guard lock(mu_);
    XrValue::Seq names;
    for (auto& n : params_.names()) names.emplace_back(std::move(n));
    return reply(xmlrpc::success("Parameter names", XrValue(names)));
  });

  s.register_method("subscribeParam", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    const auto& api = str_arg(p, 1);
    std::string key = resolve_name(str_arg(p, 2), caller);
    std::lock_guard lock(mu_);
    note_node(caller, api);
    auto& subs = param_subscribers_[key];
    std::erase_if(subs, [&](const Registration& r) { return r.caller_id == caller; });
    subs.push_back({caller, api});
    return reply(xmlrpc::success("Subscribed to parameter [" + key + "]",
                                 params_.get(key).value_or(XrValue(XrValue::Record{}))));
  });

  s.register_method("unsubscribeParam", [this, reply](const Params& p) {
    const auto& caller = str_arg(p, 0);
    const auto& api = str_arg(p, 1);
    std::string key = resolve_name(str_arg(p, 2), caller);
    std::lock_guard lock(mu_);
    int removed = 0;
    if (auto it = param_subscribers_.find(key); it != param_subscribers_.end()) {
      removed = static_cast<int>(std::erase_if(
          it->second, [&](const Registration& r) { return r.caller_id == caller && r.api == api; }));
    }
    return reply(xmlrpc::success("Unsubscribed from parameter [" + key + "]", XrValue(removed)));
  });
}

}  // namespace roslite::node

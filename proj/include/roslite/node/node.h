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

#ifndef ROSLITE_NODE_NODE_H_
#define ROSLITE_NODE_NODE_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "roslite/msg/registry.h"
#include "roslite/net/tcp_server.h"
#include "roslite/node/param_tree.h"
#include "roslite/serde/codec.h"
#include "roslite/tcpros/link.h"
#include "roslite/tcpros/service.h"
#include "roslite/xmlrpc/client.h"
#include "roslite/xmlrpc/server.h"

namespace roslite::node {

class MasterUnreachable : public Error {
 public:
  using Error::Error;
};

// Master answered with a non-success code.
class MasterError : public Error {
 public:
  MasterError(int code, const std::string& message)
      : Error("master error " + std::to_string(code) + ": " + message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

class TypeConflict : public Error {
 public:
  using Error::Error;
};

class ServiceNotFound : public Error {
 public:
  using Error::Error;
};

// Service server answered ok=0; what() carries its text.
class RemoteFailure : public Error {
 public:
  using Error::Error;
};

class ParamNotFound : public Error {
 public:
  using Error::Error;
};

class NodeShutdown : public Error {
 public:
  using Error::Error;
};

using Millis = std::chrono::milliseconds;
using RegistryPtr = std::shared_ptr<const msg::SchemaRegistry>;

struct NodeConfig {
  std::string name;  // global, e.g. "/talker"
  std::string master_uri = "http://localhost:11311/";
  std::string advertised_host;  // defaults to ROS_HOSTNAME / ROS_IP / hostname
  std::string bind_address = "0.0.0.0";
  std::uint16_t xmlrpc_port = 0;
  std::uint16_t tcpros_port = 0;
  Millis call_timeout{3000};
  Millis handshake_timeout{5000};
  Millis service_timeout{10000};
  tcpros::QueuePolicy queue;
  // No master: subscriptions connect to SubscribeOptions::direct_publishers.
  bool offline = false;

  // Reads ROS_MASTER_URI and ROS_HOSTNAME / ROS_IP.
  static NodeConfig from_environment(std::string name);
};

struct MessageEvent {
  tcpros::Payload bytes;
  // Set when the schema is known and decoding is enabled.
  std::optional<serde::DynamicValue> value;
  std::string decode_error;
  const msg::MsgSpec* spec = nullptr;
  RegistryPtr registry;
  std::string publisher;  // caller id of the sending node
  std::string publisher_uri;
  std::uint64_t link_id = 0;
};

struct SubscribeOptions {
  bool tcp_nodelay = true;
  bool decode = true;
  // Pending deliveries per subscription; oldest dropped beyond this.
  std::size_t delivery_queue = 4096;
  std::size_t max_frame = tcpros::kDefaultMaxFrame;
  // Slave API URIs to connect to without asking the master.
  std::vector<std::string> direct_publishers;
  Millis initial_backoff{500};
  Millis max_backoff{8000};
};

struct LinkInfo {
  std::uint64_t id = 0;
  std::string remote;  // caller id of the other side
  std::string topic;
  char direction = 'o';  // 'o' outbound (we publish), 'i' inbound
  std::string state;
  tcpros::LinkStats stats;
  std::string endpoint;  // publisher URI for inbound links
};

class Node;

class Publisher {
 public:
  const std::string& topic() const { return topic_; }
  const std::string& type() const { return type_; }
  const std::string& md5() const { return md5_; }
  bool latching() const { return latching_; }

  // Serializes once and offers to every live link; returns how many accepted.
  std::size_t publish(const serde::DynamicValue& value);
  std::size_t publish_bytes(std::vector<std::uint8_t> bytes);
  template <typename T>
  std::size_t publish_msg(const T& message) {
    return publish_bytes(message.to_bytes());
  }

  std::size_t num_subscribers() const;
  std::vector<LinkInfo> links() const;
  std::uint64_t published() const { return published_.load(); }

  Publisher(std::string topic, std::string type, std::string md5, std::string definition, bool latching,
            RegistryPtr registry, tcpros::QueuePolicy policy);

 private:
  friend class Node;
  tcpros::AdvertisedTopic advertised(const std::string& caller_id) const;
  void add_link(net::Socket socket, tcpros::AcceptedSubscriber accepted);
  void close_all();
  void prune_locked();

  std::string topic_, type_, md5_, definition_;
  bool latching_;
  RegistryPtr registry_;
  const msg::MsgSpec* spec_;
  tcpros::QueuePolicy policy_;
  mutable std::mutex mu_;
  std::vector<std::unique_ptr<tcpros::SubscriberLink>> links_;
  tcpros::Payload last_;
  std::atomic<std::uint64_t> published_{0};
  bool closed_ = false;
};

class Subscription {
 public:
  using Callback = std::function<void(const MessageEvent&)>;

  const std::string& topic() const { return topic_; }
  // Resolved from the first handshake for "*" subscriptions.
  std::string type() const;
  std::string md5() const;
  RegistryPtr registry() const;
  const msg::MsgSpec* spec() const;

  std::vector<std::string> known_publishers() const;
  std::vector<std::string> connected_publishers() const;
  std::vector<LinkInfo> links() const;
  std::uint64_t received() const { return received_.load(); }
  std::uint64_t dropped() const { return dropped_.load(); }
  // Handshakes refused by a publisher (rejection or md5 mismatch).
  std::uint64_t handshake_failures() const { return handshake_failures_.load(); }
  std::string last_handshake_error() const;

  // Reconciles live links with `uris`: new ones are connected, missing ones
  // closed. The subscription stays registered when the set is empty.
  void set_publishers(const std::vector<std::string>& uris);
  void close();

  struct Context {
    std::string caller_id;
    Millis call_timeout;
    Millis handshake_timeout;
  };
  Subscription(std::string topic, std::string type, std::string md5, RegistryPtr registry, Callback callback,
               SubscribeOptions options, Context context);
  ~Subscription();

 private:
  struct Slot {
    std::string uri;
    std::thread thread;
    std::mutex mu;
    std::condition_variable cv;
    bool stop = false;
    bool finished = false;
    net::Socket* connecting = nullptr;
    std::unique_ptr<tcpros::PublisherLink> link;
    std::string last_error;
  };

  void run_slot(Slot& slot);
  void on_handshake(const tcpros::ConnectionHeader& reply);
  void on_frame(tcpros::PublisherLink& link, std::vector<std::uint8_t> bytes);
  void delivery_loop();
  void stop_slot(Slot& slot);
  void reap_retired(bool wait_all);

  std::string topic_;
  Callback callback_;
  SubscribeOptions options_;
  Context context_;

  mutable std::mutex schema_mu_;
  std::string type_, md5_;
  RegistryPtr registry_;
  const msg::MsgSpec* spec_ = nullptr;
  bool resolved_ = false;

  mutable std::mutex slots_mu_;
  std::vector<std::string> known_;
  std::map<std::string, std::unique_ptr<Slot>> slots_;
  std::list<std::unique_ptr<Slot>> retired_;
  bool closed_ = false;

  std::mutex delivery_mu_;
  std::condition_variable delivery_cv_;
  std::deque<MessageEvent> pending_;
  bool delivery_stop_ = false;
  std::thread delivery_;
  std::atomic<std::uint64_t> received_{0};
  std::atomic<std::uint64_t> dropped_{0};
  std::atomic<std::uint64_t> handshake_failures_{0};
  std::string last_handshake_error_;  // under schema_mu_
};

struct SystemState {
  using Entries = std::vector<std::pair<std::string, std::vector<std::string>>>;
  Entries publishers;
  Entries subscribers;
  Entries services;
};

// A ROS node: slave XML-RPC API, TCPROS listener, publications,
// subscriptions, services and parameter access. Thread-safe.
class Node {
 public:
  using ServiceHandler = std::function<serde::DynamicValue(const serde::DynamicValue&)>;
  using RawServiceHandler = std::function<std::vector<std::uint8_t>(std::span<const std::uint8_t>)>;
  using ParamCallback = std::function<void(const std::string& key, const ParamValue& value)>;

  // MasterUnreachable (unless offline), net::BindError.
  static std::shared_ptr<Node> start(NodeConfig config, RegistryPtr registry = nullptr);
  ~Node();
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  const std::string& name() const { return config_.name; }
  const NodeConfig& config() const { return config_; }
  const std::string& uri() const { return uri_; }
  std::uint16_t tcpros_port() const { return tcpros_.port(); }
  const RegistryPtr& registry() const { return registry_; }
  std::string resolve(std::string_view name) const;

  // TypeConflict when the topic is already advertised here with another md5.
  std::shared_ptr<Publisher> advertise(const std::string& topic, const std::string& type, bool latching = false);
  std::shared_ptr<Publisher> advertise_raw(const std::string& topic, const std::string& type, const std::string& md5,
                                           const std::string& definition, bool latching = false);
  template <typename T>
  std::shared_ptr<Publisher> advertise_msg(const std::string& topic, bool latching = false) {
    return advertise_raw(topic, std::string(T::kTypeName), std::string(T::kMd5Sum), std::string(T::kDefinition),
                         latching);
  }
  void unadvertise(const std::string& topic);

  // `type` may be "*": the schema then comes from the publisher.
  std::shared_ptr<Subscription> subscribe(const std::string& topic, const std::string& type,
                                          Subscription::Callback callback, SubscribeOptions options = {});
  void unsubscribe(const std::string& topic);

  void advertise_service(const std::string& name, const std::string& srv_type, ServiceHandler handler);
  void advertise_service_raw(const std::string& name, const std::string& srv_type, const std::string& md5,
                             RawServiceHandler handler);
  void unadvertise_service(const std::string& name);
  // ServiceNotFound, RemoteFailure, TimeoutError.
  serde::DynamicValue call_service(const std::string& name, const std::string& srv_type,
                                   const serde::DynamicValue& request, std::optional<Millis> timeout = std::nullopt);
  tcpros::ServiceResponse call_service_raw(const std::string& name, const std::string& md5,
                                           std::span<const std::uint8_t> request,
                                           std::optional<Millis> timeout = std::nullopt);
  // Direct call against a rosrpc:// URI, no master lookup.
  tcpros::ServiceResponse call_service_at(const std::string& rosrpc_uri, const std::string& name,
                                          const std::string& md5, std::span<const std::uint8_t> request,
                                          std::optional<Millis> timeout = std::nullopt);
  std::string lookup_service(const std::string& name);
  // Service type as reported by the server's probe reply.
  std::string service_type(const std::string& name);

  ParamValue param_get(const std::string& key);
  void param_set(const std::string& key, const ParamValue& value);
  bool param_has(const std::string& key);
  void param_delete(const std::string& key);
  std::optional<std::string> param_search(const std::string& key);
  std::vector<std::string> param_names();
  // Returns the current value; later changes arrive through paramUpdate.
  ParamValue param_subscribe(const std::string& key, ParamCallback callback);

  SystemState system_state();
  std::vector<std::pair<std::string, std::string>> published_topics();
  std::vector<std::pair<std::string, std::string>> topic_types();
  std::string lookup_node(const std::string& name);

  std::vector<LinkInfo> bus_info() const;
  std::shared_ptr<Publisher> find_publisher(const std::string& topic) const;
  std::shared_ptr<Subscription> find_subscription(const std::string& topic) const;

  // Unregisters everything, closes links, stops servers. Idempotent.
  void shutdown();
  bool is_shutdown() const { return shut_.load(); }
  // True once a peer called the slave `shutdown` method.
  bool shutdown_requested() const { return shutdown_requested_.load(); }
  // Blocks until shutdown() runs or a peer requests it; false on timeout.
  bool wait_for_shutdown(std::optional<Millis> timeout = std::nullopt);

 private:
  explicit Node(NodeConfig config, RegistryPtr registry);
  void install_slave_api();
  void serve_tcpros(net::Socket& socket);
  xmlrpc::RosRpcReply master_call(const std::string& method, xmlrpc::Params params);
  xmlrpc::XrValue master_value(const std::string& method, xmlrpc::Params params);
  void require_master(const char* what) const;
  void check_running() const;
  std::string rosrpc_uri() const;

  NodeConfig config_;
  RegistryPtr registry_;
  std::string uri_;
  xmlrpc::Client master_client_;
  xmlrpc::Server slave_;
  net::TcpServer tcpros_;

  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Publisher>> publishers_;
  std::map<std::string, std::shared_ptr<Subscription>> subscriptions_;
  std::map<std::string, std::shared_ptr<const tcpros::ServiceBinding>> services_;
  std::map<std::string, ParamCallback> param_callbacks_;

  std::atomic<bool> shut_{false};
  std::atomic<bool> shutdown_requested_{false};
  std::mutex shutdown_mu_;
  std::condition_variable shutdown_cv_;
};

}  // namespace roslite::node

#endif  // ROSLITE_NODE_NODE_H_

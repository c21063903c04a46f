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

#ifndef ROSLITE_BRIDGE_SERVER_H_
#define ROSLITE_BRIDGE_SERVER_H_

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "roslite/bridge/json_mapping.h"
#include "roslite/net/tcp_server.h"
#include "roslite/node/node.h"
#include "roslite/tf/frame_tree.h"

// Websocket JSON bridge over a node. Client ops (text frames, one JSON
// object each):
//   {"op":"auth","token":...}                       first frame when a token is set
//   {"op":"subscribe","id","topic","type"?,"throttle_ms"?}
//   {"op":"unsubscribe","id","topic"}
//   {"op":"advertise","id","topic","type","latch"?}
//   {"op":"publish","id","topic","type"?,"msg"}
//   {"op":"call_service","id","service","type"?,"args"}
//   {"op":"topics","id"}
//   {"op":"tf_lookup","id","target","source"}
//   {"op":"status","id"}
// Server frames:
//   {"op":"message","topic","msg","recvStampMs"}
//   {"op":"service_response","id","service","type","values"}
//   {"op":"topics","id","topics":[{"topic","type"}]}
//   {"op":"tf_lookup","id","target","source","translation":{x,y,z},"rotation":{x,y,z,w}}
//   {"op":"status","id"?,"level":"info"|"warning"|"error","text",...}
// Every op carrying an id gets at least one reply with that id.
namespace roslite::bridge {

class BridgeConfigError : public Error {
 public:
  using Error::Error;
};

struct BridgeOptions {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = 0;
  // Required for a non-loopback bind.
  std::string auth_token;
  // Static files served to plain HTTP GETs; empty disables.
  std::filesystem::path console_dir;
  // Source for tf_lookup; optional.
  std::shared_ptr<const tf::FrameTree> frames;
  // Unthrottled subscriptions hold at most this many undelivered messages;
  // newer ones are dropped while the client is busy.
  std::size_t max_pending = 64;
  std::size_t max_message = 16u << 20;
  node::Millis auth_timeout{5000};
  node::Millis send_timeout{10000};
  node::Millis service_timeout{10000};
};

struct BridgeStats {
  std::size_t connections = 0;
  // Client subscriptions across all connections.
  std::size_t subscriptions = 0;
  // Node-level subscriptions held by the bridge.
  std::size_t node_subscriptions = 0;
  std::uint64_t frames_sent = 0;
  std::uint64_t frames_dropped = 0;
};

bool is_loopback_address(const std::string& host);

class BridgeServer {
 public:
  // Binds and starts serving. BridgeConfigError for a non-loopback bind
  // without a token; net::BindError.
  BridgeServer(std::shared_ptr<node::Node> node, BridgeOptions options);
  ~BridgeServer();
  BridgeServer(const BridgeServer&) = delete;
  BridgeServer& operator=(const BridgeServer&) = delete;

  std::uint16_t port() const { return server_.port(); }
  const BridgeOptions& options() const { return options_; }
  BridgeStats stats() const;
  // Closes every connection (tearing down its subscriptions) and stops.
  void stop();

  class Session;
  struct Hub;

 private:
  friend class Session;

  void serve(net::Socket& socket);
  void serve_static(net::Socket& socket, const http::Message& request);

  // Subscription fan-out: one node subscription per topic shared by every
  // session that asked for it.
  void attach(const std::shared_ptr<Session>& session, const std::string& topic, const std::string& type);
  void detach(const std::shared_ptr<Session>& session, const std::string& topic);
  std::shared_ptr<node::Publisher> acquire_publisher(const std::string& topic, const std::string& type, bool latch);
  void release_publisher(const std::string& topic);

  std::shared_ptr<node::Node> node_;
  BridgeOptions options_;
  net::TcpServer server_;

  // Held across node subscribe/unsubscribe calls; never taken from a
  // delivery callback.
  mutable std::mutex topology_mu_;
  std::map<std::string, std::shared_ptr<Hub>> hubs_;
  struct BridgePublisher {
    std::shared_ptr<node::Publisher> publisher;
    std::size_t users = 0;
    bool owned = false;  // advertised by the bridge, unadvertised when unused
  };
  std::map<std::string, BridgePublisher> publishers_;

  mutable std::mutex sessions_mu_;
  std::set<Session*> sessions_;
  std::atomic<std::uint64_t> frames_sent_{0};
  std::atomic<std::uint64_t> frames_dropped_{0};
};

}  // namespace roslite::bridge

#endif  // ROSLITE_BRIDGE_SERVER_H_

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

#ifndef ROSLITE_NODE_MASTER_H_
#define ROSLITE_NODE_MASTER_H_

#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "roslite/node/param_tree.h"
#include "roslite/xmlrpc/client.h"
#include "roslite/xmlrpc/server.h"

namespace roslite::node {

// A ROS master: name registry plus parameter server over XML-RPC. Serves the
// `run master` subcommand and gives tests a real master to talk to.
class Master {
 public:
  Master() = default;
  ~Master() { stop(); }
  Master(const Master&) = delete;
  Master& operator=(const Master&) = delete;

  // Port 0 binds an ephemeral port. `advertised_host` defaults to the bind
  // host, or the system hostname for wildcard binds.
  void start(const std::string& bind_host = "0.0.0.0", std::uint16_t port = 0, std::string advertised_host = "");
  void stop();

  std::uint16_t port() const { return server_.port(); }
  const std::string& uri() const { return uri_; }
  std::uint64_t notifications_sent() const;

 private:
  struct Registration {
    std::string caller_id;
    std::string api;
  };
  struct ServiceEntry {
    std::string caller_id;
    std::string service_api;
    std::string caller_api;
  };
  struct Notification {
    std::string api;
    std::string method;
    xmlrpc::Params params;
  };

  void install();
  void note_node(const std::string& caller_id, const std::string& api);
  void queue_publisher_update(const std::string& topic);
  void queue_param_update(const std::string& changed_key);
  void notify_loop();
  xmlrpc::XrValue publisher_apis(const std::string& topic) const;

  mutable std::mutex mu_;
  std::map<std::string, std::vector<Registration>> publishers_;
  std::map<std::string, std::vector<Registration>> subscribers_;
  std::map<std::string, std::string> topic_types_;
  std::map<std::string, ServiceEntry> services_;
  std::map<std::string, std::string> nodes_;
  std::map<std::string, std::vector<Registration>> param_subscribers_;
  ParamTree params_;

  mutable std::mutex notify_mu_;
  std::condition_variable notify_cv_;
  std::deque<Notification> pending_;
  bool notify_stop_ = false;
  std::uint64_t notified_ = 0;
  std::thread notifier_;

  xmlrpc::Server server_;
  std::string uri_;
  bool running_ = false;
};

}  // namespace roslite::node

#endif  // ROSLITE_NODE_MASTER_H_

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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <condition_variable>
#include <deque>
#include <mutex>
#include <sstream>

#include "roslite/bridge/json_mapping.h"
#include "roslite/bridge/server.h"
#include "roslite/cli/cli.h"
#include "roslite/node/master.h"
#include "roslite/node/node.h"
#include "roslite/serde/codec.h"

namespace py = pybind11;
using namespace roslite;
using bridge::Json;

namespace {

// Values cross the boundary as JSON text; the Python side wraps json.loads/dumps.
const msg::MsgSpec& message_spec(const std::string& type) { return msg::builtin_corpus().at(type); }

py::bytes serialize(const std::string& type, const std::string& value_json) {
  const auto& reg = msg::builtin_corpus();
  auto bytes = serde::serialize(message_spec(type), bridge::from_json(message_spec(type), Json::parse(value_json), reg), reg);
  return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

std::string deserialize(const std::string& type, const py::bytes& data) {
  std::string_view view = data;
  const auto& reg = msg::builtin_corpus();
  auto value = serde::deserialize(
      message_spec(type), std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(view.data()), view.size()),
      reg);
  return bridge::dump(bridge::to_json(message_spec(type), value, reg));
}

py::dict encoding_overhead(const std::string& type, const std::string& value_json) {
  const auto& reg = msg::builtin_corpus();
  auto o = bridge::measure_encoding_overhead(message_spec(type),
                                             bridge::from_json(message_spec(type), Json::parse(value_json), reg), reg);
  py::dict d;
  d["binary_bytes"] = o.binary_bytes;
  d["json_bytes"] = o.json_bytes;
  d["ratio"] = o.ratio;
  return d;
}

std::string md5(const std::string& type) {
  const auto& reg = msg::builtin_corpus();
  if (const msg::SrvSpec* srv = reg.find_service(type)) return msg::compute_srv_md5(*srv, reg);
  return msg::compute_md5(type, reg);
}

// Subscription whose messages are pulled from Python.
class PySubscription {
 public:
  PySubscription(std::shared_ptr<node::Node> node, const std::string& topic, const std::string& type)
      : node_(std::move(node)) {
    sub_ = node_->subscribe(topic, type, [this](const node::MessageEvent& ev) {
      if (!ev.value || !ev.spec) return;
      std::string text = bridge::dump(bridge::to_json(*ev.spec, *ev.value, *ev.registry));
      {
        std::lock_guard lock(mu_);
        queue_.push_back(std::move(text));
      }
      cv_.notify_all();
    });
  }
  ~PySubscription() { close(); }

  std::optional<std::string> next(double timeout) {
    std::unique_lock lock(mu_);
    if (!cv_.wait_for(lock, std::chrono::duration<double>(timeout), [&] { return !queue_.empty(); })) return std::nullopt;
    std::string text = std::move(queue_.front());
    queue_.pop_front();
    return text;
  }
  std::string type() const { return sub_->type(); }
  std::uint64_t received() const { return sub_->received(); }
  void close() {
    if (!sub_) return;
    try {
      node_->unsubscribe(sub_->topic());
    } catch (const std::exception&) {
    }
    sub_.reset();
  }

 private:
  std::shared_ptr<node::Node> node_;
  std::shared_ptr<node::Subscription> sub_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::string> queue_;
};

std::shared_ptr<node::Node> start_node(const std::string& name, const std::string& master_uri, const std::string& host,
                                       double call_timeout) {
  node::NodeConfig cfg = node::NodeConfig::from_environment(name);
  if (!master_uri.empty()) cfg.master_uri = master_uri;
  if (!host.empty()) cfg.advertised_host = host;
  cfg.call_timeout = node::Millis(static_cast<std::int64_t>(call_timeout * 1000));
  return node::Node::start(cfg);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "ROS 1 client network layer";

  // Later registrations are tried first, so the base class goes first.
  py::register_exception<Error>(m, "Error");
  py::register_exception<node::MasterUnreachable>(m, "MasterUnreachable");
  py::register_exception<node::ServiceNotFound>(m, "ServiceNotFound");
  py::register_exception<node::ParamNotFound>(m, "ParamNotFound", PyExc_KeyError);
  py::register_exception<serde::SchemaMismatch>(m, "SchemaMismatch", PyExc_ValueError);
  py::register_exception<msg::UnresolvedType>(m, "UnresolvedType", PyExc_KeyError);
  py::register_exception<TimeoutError>(m, "TimeoutError", PyExc_TimeoutError);

  m.def("md5", &md5, py::arg("type"));
  m.def("message_types", [] { return msg::builtin_corpus().message_names(); });
  m.def("service_types", [] { return msg::builtin_corpus().service_names(); });
  m.def("_serialize", &serialize);
  m.def("_deserialize", &deserialize);
  m.def("_encoding_overhead", &encoding_overhead);
  m.def("_default_json", [](const std::string& type) {
    const auto& reg = msg::builtin_corpus();
    return bridge::dump(bridge::to_json(message_spec(type), serde::default_value(message_spec(type), reg), reg));
  });

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one roslite command; returns (exit_code, stdout, stderr).");

  py::class_<node::Master>(m, "Master")
      .def(py::init<>())
      .def("start", &node::Master::start, py::arg("bind_host") = "127.0.0.1", py::arg("port") = 0,
           py::arg("advertised_host") = "", py::call_guard<py::gil_scoped_release>())
      .def("stop", &node::Master::stop, py::call_guard<py::gil_scoped_release>())
      .def_property_readonly("uri", &node::Master::uri)
      .def_property_readonly("port", &node::Master::port);

  py::class_<node::Publisher, std::shared_ptr<node::Publisher>>(m, "Publisher")
      .def_property_readonly("topic", &node::Publisher::topic)
      .def_property_readonly("type", &node::Publisher::type)
      .def_property_readonly("md5", &node::Publisher::md5)
      .def("num_subscribers", &node::Publisher::num_subscribers)
      .def("_publish", [](node::Publisher& p, const std::string& value_json) {
        const auto& reg = msg::builtin_corpus();
        auto value = bridge::from_json(message_spec(p.type()), Json::parse(value_json), reg);
        py::gil_scoped_release release;
        return p.publish(value);
      });

  py::class_<PySubscription, std::shared_ptr<PySubscription>>(m, "Subscription")
      .def("_next", &PySubscription::next, py::arg("timeout"), py::call_guard<py::gil_scoped_release>())
      .def_property_readonly("type", &PySubscription::type)
      .def_property_readonly("received", &PySubscription::received)
      .def("close", &PySubscription::close, py::call_guard<py::gil_scoped_release>());

  py::class_<node::Node, std::shared_ptr<node::Node>>(m, "Node")
      .def(py::init(&start_node), py::arg("name"), py::arg("master_uri") = "", py::arg("host") = "",
           py::arg("call_timeout") = 3.0, py::call_guard<py::gil_scoped_release>())
      .def_property_readonly("name", &node::Node::name)
      .def_property_readonly("uri", &node::Node::uri)
      .def("advertise", &node::Node::advertise, py::arg("topic"), py::arg("type"), py::arg("latch") = false,
           py::call_guard<py::gil_scoped_release>())
      .def(
          "subscribe",
          [](std::shared_ptr<node::Node> n, const std::string& topic, const std::string& type) {
            return std::make_shared<PySubscription>(std::move(n), topic, type);
          },
          py::arg("topic"), py::arg("type") = "*", py::call_guard<py::gil_scoped_release>())
      .def(
          "_advertise_service",
          [](node::Node& n, const std::string& name, const std::string& type, py::function handler) {
            // Released under the GIL whichever thread drops the last reference.
            std::shared_ptr<py::function> fn(new py::function(std::move(handler)), [](py::function* f) {
              py::gil_scoped_acquire gil;
              delete f;
            });
            const msg::SrvSpec& srv = msg::builtin_corpus().service_at(type);
            n.advertise_service(name, type, [fn, &srv](const serde::DynamicValue& req) {
              const auto& reg = msg::builtin_corpus();
              std::string req_text = bridge::dump(bridge::to_json(srv.request, req, reg));
              std::string resp_text;
              {
                py::gil_scoped_acquire gil;
                resp_text = (*fn)(req_text).cast<std::string>();
              }
              return bridge::from_json(srv.response, Json::parse(resp_text), reg);
            });
          })
      .def("_call_service",
           [](node::Node& n, const std::string& name, const std::string& type, const std::string& args_json,
              double timeout) {
             py::gil_scoped_release release;
             const auto& reg = msg::builtin_corpus();
             std::string srv_type = type.empty() ? n.service_type(name) : type;
             const msg::SrvSpec& srv = reg.service_at(srv_type);
             auto resp = n.call_service(name, srv_type, bridge::from_json(srv.request, Json::parse(args_json), reg),
                                        node::Millis(static_cast<std::int64_t>(timeout * 1000)));
             return bridge::dump(bridge::to_json(srv.response, resp, reg));
           })
      .def("_param_get",
           [](node::Node& n, const std::string& key) {
             py::gil_scoped_release release;
             return bridge::dump(cli::param_to_json(n.param_get(key)));
           })
      .def("_param_set",
           [](node::Node& n, const std::string& key, const std::string& value_json) {
             py::gil_scoped_release release;
             n.param_set(key, cli::json_to_param(Json::parse(value_json)));
           })
      .def("param_delete", &node::Node::param_delete, py::call_guard<py::gil_scoped_release>())
      .def("param_names", &node::Node::param_names, py::call_guard<py::gil_scoped_release>())
      .def("topic_types", &node::Node::topic_types, py::call_guard<py::gil_scoped_release>())
      .def("lookup_node", &node::Node::lookup_node, py::call_guard<py::gil_scoped_release>())
      .def("shutdown", &node::Node::shutdown, py::call_guard<py::gil_scoped_release>());

  py::class_<bridge::BridgeServer, std::shared_ptr<bridge::BridgeServer>>(m, "BridgeServer")
      .def(py::init([](std::shared_ptr<node::Node> n, std::uint16_t port, const std::string& bind,
                       const std::string& token, const std::string& console_dir) {
             bridge::BridgeOptions o;
             o.port = port;
             o.bind_address = bind;
             o.auth_token = token;
             o.console_dir = console_dir;
             return std::make_shared<bridge::BridgeServer>(std::move(n), o);
           }),
           py::arg("node"), py::arg("port") = 0, py::arg("bind") = "127.0.0.1", py::arg("token") = "",
           py::arg("console_dir") = "", py::call_guard<py::gil_scoped_release>())
      .def_property_readonly("port", &bridge::BridgeServer::port)
      .def("stats",
           [](const bridge::BridgeServer& s) {
             auto st = s.stats();
             py::dict d;
             d["connections"] = st.connections;
             d["subscriptions"] = st.subscriptions;
             d["node_subscriptions"] = st.node_subscriptions;
             d["frames_sent"] = st.frames_sent;
             d["frames_dropped"] = st.frames_dropped;
             return d;
           })
      .def("stop", &bridge::BridgeServer::stop, py::call_guard<py::gil_scoped_release>());
}

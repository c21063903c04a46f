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

#include "roslite/cli/cli.h"

#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "roslite/asset/resolver.h"
#include "roslite/asset/service.h"
#include "roslite/bridge/server.h"
#include "roslite/msg/codegen.h"
#include "roslite/node/master.h"
#include "roslite/node/names.h"
#include "roslite/node/node.h"
#include "roslite/serde/codec.h"
#include "roslite/tcpros/handshake.h"
#include "roslite/tf/listener.h"
#include "roslite/util/digest.h"

namespace roslite::cli {

namespace {

using bridge::Json;
using Clock = std::chrono::steady_clock;
using Seconds = std::chrono::duration<double>;

struct Globals {
  std::string master_uri;
  std::string host;
  std::string name;
  bool json = false;
  double timeout = 0;  // seconds, 0 = unset
  std::vector<std::string> msg_paths;
};

std::atomic<std::uint64_t> g_invocations{0};

std::optional<Clock::time_point> deadline_for(double seconds) {
  if (seconds <= 0) return std::nullopt;
  return Clock::now() + std::chrono::duration_cast<Clock::duration>(Seconds(seconds));
}

class Runner {
 public:
  Runner(Globals& g, std::ostream& out, std::ostream& err, const std::atomic<bool>* stop)
      : g_(g), out_(out), err_(err), stop_(stop) {}

  bool stopped() const { return stop_ && stop_->load(); }

  // Polls until `pred`, a stop request, or `deadline`. True when pred held.
  template <typename Pred>
  bool wait_until(std::optional<Clock::time_point> deadline, Pred pred) {
    for (;;) {
      if (pred()) return true;
      if (stopped()) return false;
      if (deadline && Clock::now() >= *deadline) return false;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
  }

  std::shared_ptr<msg::SchemaRegistry> registry(const std::vector<msg::MsgSpec>& extra = {}) {
    msg::SchemaRegistry::Builder b;
    for (const auto& spec : extra) b.add(spec);
    for (const auto& p : g_.msg_paths) b.add_root(p);
    b.add_builtin_corpus();
    return std::make_shared<msg::SchemaRegistry>(b.build());
  }

  std::string node_name(const std::string& fallback = {}) const {
    if (!g_.name.empty()) return g_.name;
    if (!fallback.empty()) return fallback;
    return "/roslite_cli_" + std::to_string(::getpid()) + "_" + std::to_string(g_invocations.fetch_add(1));
  }

  std::shared_ptr<node::Node> start_node(node::RegistryPtr reg = nullptr, const std::string& name = {}) {
    node::NodeConfig cfg = node::NodeConfig::from_environment(name.empty() ? node_name() : name);
    if (!g_.master_uri.empty()) cfg.master_uri = g_.master_uri;
    if (!g_.host.empty()) cfg.advertised_host = g_.host;
    if (g_.timeout > 0) {
      auto ms = node::Millis(static_cast<std::int64_t>(g_.timeout * 1000));
      cfg.call_timeout = ms;
      cfg.service_timeout = ms;
    }
    auto n = node::Node::start(std::move(cfg), reg ? reg : node::RegistryPtr(registry()));
    nodes_.push_back(n);
    return n;
  }

  ~Runner() {
    for (auto& n : nodes_) n->shutdown();
  }

  void emit(const Json& j) { out_ << j.dump(2) << "\n" << std::flush; }

  int topic_list();
  int topic_type(const std::string& topic);
  int topic_echo(const std::string& topic, const std::string& type, std::int64_t count);
  int topic_pub(const std::string& topic, const std::string& type, const std::string& literal, double rate,
                bool latch, std::int64_t count, double duration, const std::string& definition_file);
  int topic_rate(const std::string& topic, bool bandwidth, double window, double duration);
  int node_list();
  int node_info(const std::string& name);
  int service_list();
  int service_call(const std::string& name, const std::string& args, const std::string& type);
  int param_get(const std::string& key);
  int param_set(const std::string& key, const std::string& value);
  int param_list(const std::string& ns);
  int param_delete(const std::string& key);
  int tf_lookup(const std::string& target, const std::string& source);
  int msg_md5(const std::vector<std::string>& types);
  int msg_deps(const std::string& type);
  int msg_gen(const std::string& out_dir, const std::vector<std::string>& types);
  int bench_overhead(const std::vector<std::string>& names);
  int run_master(const std::string& bind, std::uint16_t port);
  int run_loader(const std::vector<std::string>& roots, const std::string& service);
  int run_bridge(const std::string& bind, std::uint16_t port, const std::string& token, bool serve_console,
                 const std::string& console_dir, bool with_tf);

 private:
  void wait_for_stop() {
    while (!stopped()) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }

  Globals& g_;
  std::ostream& out_;
  std::ostream& err_;
  const std::atomic<bool>* stop_;
  std::vector<std::shared_ptr<node::Node>> nodes_;
};

// Drops a subscription before the state its callback touches goes away.
struct SubscriptionGuard {
  std::shared_ptr<node::Node> node;
  std::string topic;
  ~SubscriptionGuard() {
    try {
      node->unsubscribe(topic);
    } catch (const std::exception&) {
    }
  }
};

Json parse_literal(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw CliFailure(exit_code::kUsage, std::string("malformed JSON ") + what + ": " + e.what());
  }
}

// ---- topic ----

int Runner::topic_list() {
  auto n = start_node();
  node::SystemState st = n->system_state();
  std::map<std::string, std::string> types;
  for (auto& [topic, type] : n->topic_types()) types[topic] = type;
  struct Entry {
    std::vector<std::string> pubs, subs;
  };
  std::map<std::string, Entry> topics;
  for (auto& [topic, nodes] : st.publishers) topics[topic].pubs = nodes;
  for (auto& [topic, nodes] : st.subscribers) topics[topic].subs = nodes;
  if (g_.json) {
    Json arr = Json::array();
    for (auto& [topic, e] : topics) {
      auto it = types.find(topic);
      arr.push_back({{"topic", topic},
                     {"type", it == types.end() ? "" : it->second},
                     {"publishers", e.pubs},
                     {"subscribers", e.subs}});
    }
    emit(arr);
  } else {
    for (auto& [topic, e] : topics) out_ << topic << "\n";
  }
  return exit_code::kOk;
}

int Runner::topic_type(const std::string& topic) {
  auto n = start_node();
  std::string resolved = n->resolve(topic);
  for (auto& [t, type] : n->topic_types()) {
    if (t != resolved) continue;
    if (g_.json) {
      emit({{"topic", t}, {"type", type}});
    } else {
      out_ << type << "\n";
    }
    return exit_code::kOk;
  }
  throw CliFailure(exit_code::kFailure, "unknown topic " + resolved);
}

int Runner::topic_echo(const std::string& topic, const std::string& type, std::int64_t count) {
  auto n = start_node();
  std::mutex mu;
  std::deque<node::MessageEvent> queue;
  auto sub = n->subscribe(
      topic, type.empty() ? tcpros::kAnyMd5 : type,
      [&](const node::MessageEvent& ev) {
        std::lock_guard lock(mu);
        queue.push_back(ev);
      },
      {});
  SubscriptionGuard guard{n, sub->topic()};
  auto deadline = deadline_for(g_.timeout);
  Json collected = Json::array();
  std::int64_t printed = 0;
  auto limit_reached = [&] { return count > 0 && printed >= count; };
  while (!limit_reached()) {
    bool got = wait_until(deadline, [&] {
      std::lock_guard lock(mu);
      return !queue.empty() || (printed == 0 && sub->handshake_failures() > 0 && sub->received() == 0);
    });
    if (!got) break;
    std::deque<node::MessageEvent> batch;
    {
      std::lock_guard lock(mu);
      batch.swap(queue);
    }
    if (batch.empty()) {
      throw CliFailure(exit_code::kHandshake, sub->last_handshake_error());
    }
    for (auto& ev : batch) {
      if (limit_reached()) break;
      if (!ev.value || !ev.spec) {
        err_ << "warning: undecodable message on " << sub->topic() << ": "
             << (ev.decode_error.empty() ? "schema unknown" : ev.decode_error) << "\n";
        continue;
      }
      Json j = bridge::to_json(*ev.spec, *ev.value, *ev.registry);
      ++printed;
      if (g_.json) {
        collected.push_back(std::move(j));
      } else {
        out_ << to_yaml(j) << "---\n" << std::flush;
      }
    }
  }
  if (!stopped() && printed == 0 && sub->handshake_failures() > 0) {
    throw CliFailure(exit_code::kHandshake, sub->last_handshake_error());
  }
  bool timed_out = !stopped() && ((count > 0 && printed < count) || printed == 0);
  if (timed_out && deadline) {
    throw TimeoutError("received " + std::to_string(printed) + " message(s) on " + sub->topic() + " before timeout");
  }
  if (g_.json) emit(collected);
  return exit_code::kOk;
}

int Runner::topic_pub(const std::string& topic, const std::string& type, const std::string& literal, double rate,
                      bool latch, std::int64_t count, double duration, const std::string& definition_file) {
  std::vector<msg::MsgSpec> extra;
  std::shared_ptr<msg::SchemaRegistry> reg;
  if (!definition_file.empty()) {
    std::ifstream in(definition_file, std::ios::binary);
    if (!in) throw CliFailure(exit_code::kUsage, "cannot read " + definition_file);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    msg::NamedType nt = msg::split_type_name(type);
    if (text.find("\nMSG: ") != std::string::npos) {
      msg::SchemaRegistry::Builder b;
      b.add_all(msg::parse_definition_bundle(text, type));
      for (const auto& p : g_.msg_paths) b.add_root(p);
      b.add_builtin_corpus();
      reg = std::make_shared<msg::SchemaRegistry>(b.build());
    } else {
      extra.push_back(msg::parse_msg(text, nt.package, nt.name));
    }
  }
  if (!reg) reg = registry(extra);
  const msg::MsgSpec& spec = reg->at(type);
  serde::DynamicValue value = bridge::from_json(spec, parse_literal(literal.empty() ? "{}" : literal, "value"), *reg);

  auto n = start_node(reg);
  auto pub = n->advertise(topic, type, latch);
  auto end = deadline_for(duration);
  std::uint64_t sent = 0;
  if (rate <= 0) {
    pub->publish(value);
    ++sent;
    wait_until(end, [] { return false; });
  } else {
    auto period = std::chrono::duration_cast<Clock::duration>(Seconds(1.0 / rate));
    auto next = Clock::now();
    while (!stopped() && !(end && Clock::now() >= *end) && !(count > 0 && static_cast<std::int64_t>(sent) >= count)) {
      pub->publish(value);
      ++sent;
      next += period;
      wait_until(next, [] { return false; });
    }
    // Let the last frames leave before the links close.
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  if (g_.json) {
    emit({{"topic", pub->topic()}, {"type", type}, {"published", sent}});
  } else {
    out_ << "published " << sent << " message(s) on " << pub->topic() << "\n";
  }
  return exit_code::kOk;
}

int Runner::topic_rate(const std::string& topic, bool bandwidth, double window, double duration) {
  auto n = start_node();
  struct Sample {
    Clock::time_point t;
    std::size_t bytes;
  };
  std::mutex mu;
  std::deque<Sample> samples;
  std::uint64_t total = 0;
  node::SubscribeOptions opts;
  opts.decode = false;
  auto sub = n->subscribe(
      topic, tcpros::kAnyMd5,
      [&](const node::MessageEvent& ev) {
        std::lock_guard lock(mu);
        samples.push_back({Clock::now(), ev.bytes ? ev.bytes->size() : 0});
        ++total;
      },
      opts);
  SubscriptionGuard guard{n, sub->topic()};
  auto win = std::chrono::duration_cast<Clock::duration>(Seconds(window));

  auto report = [&]() -> Json {
    std::lock_guard lock(mu);
    auto now = Clock::now();
    while (!samples.empty() && samples.front().t < now - win) samples.pop_front();
    Json j = {{"topic", sub->topic()}, {"window_s", window}, {"count", samples.size()}, {"total", total}};
    double span = samples.size() >= 2 ? Seconds(samples.back().t - samples.front().t).count() : 0;
    if (!bandwidth) {
      if (samples.size() < 2 || span <= 0) {
        j["rate"] = nullptr;
        j["min_interval"] = nullptr;
        j["max_interval"] = nullptr;
        j["std_dev"] = nullptr;
      } else {
        std::vector<double> gaps;
        for (std::size_t i = 1; i < samples.size(); ++i) gaps.push_back(Seconds(samples[i].t - samples[i - 1].t).count());
        double mean = span / static_cast<double>(gaps.size());
        double var = 0;
        for (double g : gaps) var += (g - mean) * (g - mean);
        j["rate"] = 1.0 / mean;
        j["min_interval"] = *std::min_element(gaps.begin(), gaps.end());
        j["max_interval"] = *std::max_element(gaps.begin(), gaps.end());
        j["std_dev"] = std::sqrt(var / static_cast<double>(gaps.size()));
      }
    } else {
      std::size_t sum = 0, lo = SIZE_MAX, hi = 0;
      for (auto& s : samples) {
        sum += s.bytes;
        lo = std::min(lo, s.bytes);
        hi = std::max(hi, s.bytes);
      }
      if (samples.size() < 2 || span <= 0) {
        j["bytes_per_sec"] = nullptr;
      } else {
        j["bytes_per_sec"] = static_cast<double>(sum - samples.front().bytes) / span;
      }
      if (samples.empty()) {
        j["mean_size"] = nullptr;
        j["min_size"] = nullptr;
        j["max_size"] = nullptr;
      } else {
        j["mean_size"] = static_cast<double>(sum) / static_cast<double>(samples.size());
        j["min_size"] = lo;
        j["max_size"] = hi;
      }
    }
    return j;
  };
  auto print_human = [&](const Json& j) {
    std::ostringstream os;
    os << std::fixed;
    if (!bandwidth) {
      if (j["rate"].is_null()) {
        os << "count: " << j["count"].get<std::size_t>() << ", rate unreported\n";
      } else {
        os << "average rate: " << std::setprecision(3) << j["rate"].get<double>() << "\n\tmin: " << std::setprecision(4)
           << j["min_interval"].get<double>() << "s max: " << j["max_interval"].get<double>()
           << "s std dev: " << std::setprecision(5) << j["std_dev"].get<double>() << "s window: " << j["count"] << "\n";
      }
    } else {
      if (j["bytes_per_sec"].is_null()) {
        os << "count: " << j["count"].get<std::size_t>() << ", bandwidth unreported\n";
      } else {
        os << "average: " << std::setprecision(2) << j["bytes_per_sec"].get<double>() / 1024.0 << " KiB/s\n\tmean: "
           << j["mean_size"].get<double>() / 1024.0 << " KiB min: " << j["min_size"].get<double>() / 1024.0
           << " KiB max: " << j["max_size"].get<double>() / 1024.0 << " KiB window: " << j["count"] << "\n";
      }
    }
    out_ << os.str() << std::flush;
  };

  auto first_deadline = deadline_for(g_.timeout);
  auto end = deadline_for(duration);
  auto first_wait = first_deadline;
  if (end && (!first_wait || *end < *first_wait)) first_wait = end;
  if (!wait_until(first_wait, [&] { return sub->received() > 0; }) && !stopped()) {
    throw TimeoutError("no message on " + sub->topic());
  }
  auto next_report = Clock::now() + std::chrono::seconds(1);
  while (!stopped() && !(end && Clock::now() >= *end)) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
    if (!g_.json && Clock::now() >= next_report) {
      print_human(report());
      next_report += std::chrono::seconds(1);
    }
  }
  Json final_report = report();
  if (g_.json) {
    emit(final_report);
  } else {
    print_human(final_report);
  }
  return exit_code::kOk;
}

// ---- node / service ----

std::set<std::string> all_nodes(const node::SystemState& st) {
  std::set<std::string> nodes;
  for (const auto* entries : {&st.publishers, &st.subscribers, &st.services}) {
    for (auto& [name, ns] : *entries) nodes.insert(ns.begin(), ns.end());
  }
  return nodes;
}

int Runner::node_list() {
  auto n = start_node();
  auto nodes = all_nodes(n->system_state());
  // Our own short-lived query node is not part of the graph being listed.
  nodes.erase(n->name());
  if (g_.json) {
    emit(Json(std::vector<std::string>(nodes.begin(), nodes.end())));
  } else {
    for (auto& name : nodes) out_ << name << "\n";
  }
  return exit_code::kOk;
}

int Runner::node_info(const std::string& name) {
  auto n = start_node();
  std::string resolved = n->resolve(name);
  std::string uri;
  try {
    uri = n->lookup_node(resolved);
  } catch (const node::MasterError& e) {
    throw CliFailure(exit_code::kFailure, "unknown node " + resolved);
  }
  node::SystemState st = n->system_state();
  std::map<std::string, std::string> types;
  for (auto& [topic, type] : n->topic_types()) types[topic] = type;
  auto pick = [&](const node::SystemState::Entries& entries) {
    std::vector<std::string> out;
    for (auto& [topic, nodes] : entries) {
      if (std::find(nodes.begin(), nodes.end(), resolved) != nodes.end()) out.push_back(topic);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto pubs = pick(st.publishers), subs = pick(st.subscribers), srvs = pick(st.services);
  auto with_types = [&](const std::vector<std::string>& topics) {
    Json arr = Json::array();
    for (auto& t : topics) arr.push_back({{"topic", t}, {"type", types.count(t) ? types[t] : ""}});
    return arr;
  };
  if (g_.json) {
    emit({{"node", resolved},
          {"uri", uri},
          {"publications", with_types(pubs)},
          {"subscriptions", with_types(subs)},
          {"services", srvs}});
  } else {
    out_ << "Node [" << resolved << "]\nURI: " << uri << "\n\nPublications:\n";
    for (auto& t : pubs) out_ << " * " << t << " [" << types[t] << "]\n";
    out_ << "\nSubscriptions:\n";
    for (auto& t : subs) out_ << " * " << t << " [" << types[t] << "]\n";
    out_ << "\nServices:\n";
    for (auto& s : srvs) out_ << " * " << s << "\n";
  }
  return exit_code::kOk;
}

int Runner::service_list() {
  auto n = start_node();
  node::SystemState st = n->system_state();
  std::map<std::string, std::vector<std::string>> services(st.services.begin(), st.services.end());
  if (g_.json) {
    Json arr = Json::array();
    for (auto& [name, providers] : services) arr.push_back({{"service", name}, {"providers", providers}});
    emit(arr);
  } else {
    for (auto& [name, providers] : services) out_ << name << "\n";
  }
  return exit_code::kOk;
}

int Runner::service_call(const std::string& name, const std::string& args, const std::string& type) {
  auto reg = registry();
  auto n = start_node(reg);
  std::string srv_type = type.empty() ? n->service_type(name) : type;
  const msg::SrvSpec& spec = reg->service_at(srv_type);
  serde::DynamicValue request = bridge::from_json(spec.request, parse_literal(args.empty() ? "{}" : args, "args"), *reg);
  serde::DynamicValue response = n->call_service(name, srv_type, request);
  Json j = bridge::to_json(spec.response, response, *reg);
  if (g_.json) {
    emit(j);
  } else {
    out_ << to_yaml(j);
  }
  return exit_code::kOk;
}

// ---- param ----

int Runner::param_get(const std::string& key) {
  auto n = start_node();
  Json j = param_to_json(n->param_get(key));
  if (g_.json) {
    emit(j);
  } else if (j.is_string()) {
    out_ << j.get<std::string>() << "\n";
  } else if (j.is_object()) {
    out_ << to_yaml(j);
  } else {
    out_ << j.dump() << "\n";
  }
  return exit_code::kOk;
}

int Runner::param_set(const std::string& key, const std::string& value) {
  auto n = start_node();
  // Plain words are strings; anything that parses as JSON keeps its type.
  Json j;
  try {
    j = Json::parse(value);
  } catch (const Json::parse_error&) {
    j = value;
  }
  n->param_set(key, json_to_param(j));
  if (g_.json) emit({{"key", n->resolve(key)}, {"value", j}});
  return exit_code::kOk;
}

int Runner::param_list(const std::string& ns) {
  auto n = start_node();
  std::vector<std::string> names = n->param_names();
  std::string prefix = ns.empty() ? "" : n->resolve(ns);
  if (!prefix.empty() && prefix != "/") {
    std::erase_if(names, [&](const std::string& k) {
      return !(k == prefix || (k.size() > prefix.size() && k.compare(0, prefix.size(), prefix) == 0 &&
                               k[prefix.size()] == '/'));
    });
  }
  std::sort(names.begin(), names.end());
  if (g_.json) {
    emit(Json(names));
  } else {
    for (auto& k : names) out_ << k << "\n";
  }
  return exit_code::kOk;
}

int Runner::param_delete(const std::string& key) {
  auto n = start_node();
  if (!n->param_has(key)) throw node::ParamNotFound("parameter " + n->resolve(key) + " is not set");
  n->param_delete(key);
  if (g_.json) emit({{"key", n->resolve(key)}, {"deleted", true}});
  return exit_code::kOk;
}

// ---- tf ----

int Runner::tf_lookup(const std::string& target, const std::string& source) {
  auto n = start_node();
  tf::TfListener listener(n);
  std::optional<tf::Transform> found;
  std::string last_error;
  auto deadline = deadline_for(g_.timeout > 0 ? g_.timeout : 3.0);
  wait_until(deadline, [&] {
    try {
      found = listener.tree()->lookup(target, source);
      return true;
    } catch (const tf::TfError& e) {
      last_error = e.what();
      return false;
    }
  });
  if (!found) throw TimeoutError("no transform " + target + " <- " + source + ": " + last_error);
  const auto& t = found->translation;
  const auto& q = found->rotation;
  Json j = {{"target", target},
            {"source", source},
            {"translation", {{"x", t.x}, {"y", t.y}, {"z", t.z}}},
            {"rotation", {{"x", q.x}, {"y", q.y}, {"z", q.z}, {"w", q.w}}}};
  if (g_.json) {
    emit(j);
  } else {
    out_ << to_yaml(j);
  }
  return exit_code::kOk;
}

// ---- msg ----

int Runner::msg_md5(const std::vector<std::string>& types) {
  auto reg = registry();
  Json j = Json::object();
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& type : types) {
    std::string md5;
    if (const msg::SrvSpec* srv = reg->find_service(type)) {
      md5 = msg::compute_srv_md5(*srv, *reg);
    } else {
      md5 = msg::compute_md5(type, *reg);
    }
    rows.emplace_back(type, md5);
    j[type] = md5;
  }
  if (g_.json) {
    emit(j);
  } else if (rows.size() == 1) {
    out_ << rows[0].second << "\n";
  } else {
    for (auto& [type, md5] : rows) out_ << type << " " << md5 << "\n";
  }
  return exit_code::kOk;
}

int Runner::msg_deps(const std::string& type) {
  auto reg = registry();
  std::vector<std::string> deps;
  if (const msg::SrvSpec* srv = reg->find_service(type)) {
    std::set<std::string> seen;
    for (const msg::MsgSpec* part : {&srv->request, &srv->response}) {
      for (auto& d : msg::dependency_order(*part, *reg)) {
        if (seen.insert(d).second) deps.push_back(d);
      }
    }
  } else {
    deps = msg::dependency_order(reg->at(type), *reg);
  }
  if (g_.json) {
    emit({{"type", type}, {"deps", deps}});
  } else {
    for (auto& d : deps) out_ << d << "\n";
  }
  return exit_code::kOk;
}

int Runner::msg_gen(const std::string& out_dir, const std::vector<std::string>& types) {
  auto reg = registry();
  std::vector<std::string> written;
  if (types.empty()) {
    std::size_t count = msg::emit_all(*reg, out_dir);
    if (g_.json) {
      emit({{"out", out_dir}, {"files", count}});
    } else {
      out_ << "wrote " << count << " header(s) to " << out_dir << "\n";
    }
    return exit_code::kOk;
  }
  for (const auto& type : types) {
    std::string text;
    std::filesystem::path rel;
    if (const msg::SrvSpec* srv = reg->find_service(type)) {
      text = msg::emit_source(*srv, *reg);
      rel = msg::generated_header_path(srv->package, srv->name);
    } else {
      const msg::MsgSpec& spec = reg->at(type);
      text = msg::emit_source(spec, *reg);
      rel = msg::generated_header_path(spec.package, spec.name);
    }
    std::filesystem::path path = std::filesystem::path(out_dir) / rel;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw IoError("cannot write " + path.string());
    written.push_back(path.string());
  }
  if (g_.json) {
    emit({{"out", out_dir}, {"files", written.size()}, {"paths", written}});
  } else {
    for (auto& p : written) out_ << p << "\n";
  }
  return exit_code::kOk;
}

// ---- bench ----

struct BenchCase {
  std::string name;
  std::string type;
  serde::DynamicValue value;
};

BenchCase make_bench_case(const std::string& name, const msg::SchemaRegistry& reg) {
  if (name == "bytes3mb") {
    serde::DynamicValue v = serde::default_value(reg.at("std_msgs/UInt8MultiArray"), reg);
    std::vector<std::uint8_t> data(3'000'000);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<std::uint8_t>(i * 31 + 7);
    v.set("data", serde::DynamicValue::PackedArray(std::move(data)));
    return {name, "std_msgs/UInt8MultiArray", std::move(v)};
  }
  if (name == "float64x1000") {
    serde::DynamicValue v = serde::default_value(reg.at("std_msgs/Float64MultiArray"), reg);
    std::vector<double> data(1000);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = std::sin(static_cast<double>(i)) * 100.0;
    v.set("data", serde::DynamicValue::PackedArray(std::move(data)));
    return {name, "std_msgs/Float64MultiArray", std::move(v)};
  }
  if (name == "empty") {
    return {name, "std_msgs/Empty", serde::default_value(reg.at("std_msgs/Empty"), reg)};
  }
  throw CliFailure(exit_code::kUsage, "unknown bench type " + name + " (bytes3mb, float64x1000, empty)");
}

int Runner::bench_overhead(const std::vector<std::string>& names) {
  auto reg = registry();
  std::vector<std::string> selected = names;
  if (selected.empty()) selected = {"bytes3mb", "float64x1000", "empty"};
  Json results = Json::array();
  std::ostringstream human;
  for (const auto& name : selected) {
    BenchCase c = make_bench_case(name, *reg);
    bridge::EncodingOverhead o = bridge::measure_encoding_overhead(reg->at(c.type), c.value, *reg);
    Json row = {{"name", c.name}, {"type", c.type}, {"binary_bytes", o.binary_bytes}, {"json_bytes", o.json_bytes}};
    row["ratio"] = std::isfinite(o.ratio) ? Json(o.ratio) : Json(nullptr);
    results.push_back(row);
    human << std::left << std::setw(14) << c.name << " " << std::setw(28) << c.type << " binary " << std::setw(9)
          << o.binary_bytes << " json " << std::setw(9) << o.json_bytes << " ratio ";
    if (std::isfinite(o.ratio)) {
      human << std::fixed << std::setprecision(4) << o.ratio << "\n";
    } else {
      human << "inf\n";
    }
  }
  if (g_.json) {
    emit({{"results", results}});
  } else {
    out_ << human.str();
  }
  return exit_code::kOk;
}

// ---- run ----

int Runner::run_master(const std::string& bind, std::uint16_t port) {
  node::Master master;
  master.start(bind, port, g_.host);
  if (g_.json) {
    emit({{"uri", master.uri()}, {"port", master.port()}});
  } else {
    out_ << "master running at " << master.uri() << "\n" << std::flush;
  }
  wait_for_stop();
  master.stop();
  return exit_code::kOk;
}

int Runner::run_loader(const std::vector<std::string>& roots, const std::string& service) {
  asset::LoaderOptions options;
  for (const auto& r : roots) options.roots.emplace_back(r);
  if (options.roots.empty()) options.roots = asset::package_roots_from_env();
  if (options.roots.empty()) throw CliFailure(exit_code::kUsage, "no package roots: pass --root or set ROS_PACKAGE_PATH");
  options.service_name = service;
  auto n = start_node(nullptr, node_name("/asset_loader"));
  {
    asset::LoaderService loader(n, options);
    if (g_.json) {
      Json rs = Json::array();
      for (auto& r : options.roots) rs.push_back(r.string());
      emit({{"node", n->name()}, {"service", loader.name()}, {"roots", rs}});
    } else {
      out_ << "serving " << loader.name() << " from " << options.roots.size() << " root(s)\n" << std::flush;
    }
    while (!stopped() && !n->shutdown_requested()) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  n->shutdown();
  return exit_code::kOk;
}

std::filesystem::path default_console_dir() {
  if (const char* env = std::getenv("ROSLITE_CONSOLE_DIR"); env && *env) return env;
  return std::filesystem::current_path() / "web_console" / "dist";
}

int Runner::run_bridge(const std::string& bind, std::uint16_t port, const std::string& token, bool serve_console,
                       const std::string& console_dir, bool with_tf) {
  bridge::BridgeOptions options;
  options.bind_address = bind;
  options.port = port;
  options.auth_token = token;
  if (serve_console) options.console_dir = console_dir.empty() ? default_console_dir() : std::filesystem::path(console_dir);
  auto n = start_node(nullptr, node_name("/roslite_bridge"));
  std::unique_ptr<tf::TfListener> listener;
  if (with_tf) {
    // /tf gets its own node so bridge clients can still subscribe to it.
    auto tf_node = start_node(nullptr, n->name() + "_tf");
    listener = std::make_unique<tf::TfListener>(tf_node);
    options.frames = listener->tree();
  }
  bridge::BridgeServer server(n, options);
  if (g_.json) {
    emit({{"port", server.port()},
          {"url", "ws://" + bind + ":" + std::to_string(server.port()) + "/"},
          {"console", options.console_dir.string()}});
  } else {
    out_ << "bridge listening on ws://" << bind << ":" << server.port() << "/\n" << std::flush;
  }
  while (!stopped() && !n->shutdown_requested()) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  server.stop();
  listener.reset();
  return exit_code::kOk;
}

void yaml_into(std::ostream& os, const Json& j, int indent);

std::string scalar_text(const Json& j) {
  if (j.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) s += ", ";
      s += scalar_text(j[i]);
    }
    return s + "]";
  }
  if (j.is_object() && j.empty()) return "{}";
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

bool array_of_objects(const Json& j) {
  return j.is_array() && !j.empty() && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_object(); });
}

void yaml_into(std::ostream& os, const Json& j, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    if (v.is_object() && !v.empty()) {
      os << pad << it.key() << ":\n";
      yaml_into(os, v, indent + 2);
    } else if (array_of_objects(v)) {
      os << pad << it.key() << ":\n";
      for (const Json& e : v) {
        os << pad << "  -\n";
        yaml_into(os, e, indent + 4);
      }
    } else {
      os << pad << it.key() << ": " << scalar_text(v) << "\n";
    }
  }
}

}  // namespace

std::string to_yaml(const Json& json) {
  if (!json.is_object()) return scalar_text(json) + "\n";
  std::ostringstream os;
  yaml_into(os, json, 0);
  return os.str();
}

Json param_to_json(const xmlrpc::XrValue& value) {
  using K = xmlrpc::XrValue::Kind;
  switch (value.kind()) {
    case K::kInt:
      return value.as_int();
    case K::kBool:
      return value.as_bool();
    case K::kStr:
      return value.as_str();
    case K::kDouble:
      return value.as_double();
    case K::kSeq: {
      Json arr = Json::array();
      for (const auto& e : value.as_seq()) arr.push_back(param_to_json(e));
      return arr;
    }
    case K::kRecord: {
      Json obj = Json::object();
      for (const auto& [k, v] : value.as_record()) obj[k] = param_to_json(v);
      return obj;
    }
    case K::kBinary: {
      const auto& b = value.as_binary().bytes;
      return util::base64_encode(std::span<const std::uint8_t>(b.data(), b.size()));
    }
  }
  return nullptr;
}

xmlrpc::XrValue json_to_param(const Json& json) {
  if (json.is_boolean()) return xmlrpc::XrValue(json.get<bool>());
  if (json.is_number_integer()) {
    std::int64_t v = json.is_number_unsigned() && json.get<std::uint64_t>() > INT64_MAX ? INT64_MAX : json.get<std::int64_t>();
    if (v >= INT32_MIN && v <= INT32_MAX) return xmlrpc::XrValue(static_cast<std::int32_t>(v));
    return xmlrpc::XrValue(json.get<double>());
  }
  if (json.is_number()) return xmlrpc::XrValue(json.get<double>());
  if (json.is_string()) return xmlrpc::XrValue(json.get<std::string>());
  if (json.is_array()) {
    xmlrpc::XrValue::Seq seq;
    for (const auto& e : json) seq.push_back(json_to_param(e));
    return xmlrpc::XrValue(std::move(seq));
  }
  if (json.is_object()) {
    xmlrpc::XrValue::Record rec;
    for (auto it = json.begin(); it != json.end(); ++it) rec.emplace_back(it.key(), json_to_param(it.value()));
    return xmlrpc::XrValue(std::move(rec));
  }
  throw CliFailure(exit_code::kUsage, "null is not a parameter value");
}

int exit_code_for(const std::exception& e) {
  if (auto* f = dynamic_cast<const CliFailure*>(&e)) return f->code();
  if (dynamic_cast<const node::MasterUnreachable*>(&e) || dynamic_cast<const node::MasterError*>(&e)) {
    return exit_code::kMaster;
  }
  if (dynamic_cast<const tcpros::HandshakeRejected*>(&e) || dynamic_cast<const tcpros::Md5Mismatch*>(&e)) {
    return exit_code::kHandshake;
  }
  if (dynamic_cast<const TimeoutError*>(&e)) return exit_code::kTimeout;
  if (dynamic_cast<const node::ServiceNotFound*>(&e) || dynamic_cast<const node::RemoteFailure*>(&e) ||
      dynamic_cast<const tcpros::TcprosError*>(&e)) {
    return exit_code::kService;
  }
  if (dynamic_cast<const node::ParamNotFound*>(&e)) return exit_code::kParam;
  if (dynamic_cast<const serde::SchemaMismatch*>(&e) || dynamic_cast<const msg::UnresolvedType*>(&e) ||
      dynamic_cast<const msg::SyntaxError*>(&e) || dynamic_cast<const msg::RangeError*>(&e) ||
      dynamic_cast<const bridge::BridgeConfigError*>(&e) || dynamic_cast<const node::InvalidName*>(&e) ||
      dynamic_cast<const Json::exception*>(&e)) {
    return exit_code::kUsage;
  }
  return exit_code::kFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const std::atomic<bool>* stop) {
  Globals g;
  CLI::App app{"ROS 1 client tools: graph inspection, publishing, services, parameters, bridge", "roslite"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--master-uri", g.master_uri, "Master XML-RPC URI (default: ROS_MASTER_URI)");
  app.add_option("--host", g.host, "Advertised host (default: ROS_HOSTNAME / ROS_IP)");
  app.add_option("--name", g.name, "Node name used by the command");
  app.add_flag("--json", g.json, "Emit one JSON document on stdout");
  app.add_option("--timeout", g.timeout, "Seconds to wait for the master, messages or services")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--msg-path", g.msg_paths, "Extra message roots (<root>/<pkg>/msg/*.msg)");

  std::function<int(Runner&)> action;

  // topic
  auto* topic = app.add_subcommand("topic", "Topics")->require_subcommand(1);
  topic->add_subcommand("list", "List topics")->callback([&] { action = [](Runner& r) { return r.topic_list(); }; });
  {
    auto* c = topic->add_subcommand("type", "Print a topic's type");
    auto name = std::make_shared<std::string>();
    c->add_option("topic", *name)->required();
    c->callback([&, name] { action = [name](Runner& r) { return r.topic_type(*name); }; });
  }
  {
    auto* c = topic->add_subcommand("echo", "Print messages (schema from the publisher)");
    struct A {
      std::string topic, type;
      std::int64_t count = 0;
    };
    auto a = std::make_shared<A>();
    c->add_option("topic", a->topic)->required();
    c->add_option("--count,-n", a->count, "Exit after this many messages")->check(CLI::NonNegativeNumber);
    c->add_option("--type", a->type, "Require this type instead of accepting any");
    c->callback([&, a] { action = [a](Runner& r) { return r.topic_echo(a->topic, a->type, a->count); }; });
  }
  {
    auto* c = topic->add_subcommand("pub", "Publish a JSON value");
    struct A {
      std::string topic, type, literal, definition_file;
      double rate = 0, duration = 0;
      std::int64_t count = 0;
      bool no_latch = false;
    };
    auto a = std::make_shared<A>();
    c->add_option("topic", a->topic)->required();
    c->add_option("type", a->type)->required();
    c->add_option("value", a->literal, "JSON object; missing fields take defaults");
    c->add_option("--rate,-r", a->rate, "Publish repeatedly at this rate (Hz)")->check(CLI::NonNegativeNumber);
    c->add_option("--count", a->count, "With --rate, stop after this many messages")->check(CLI::NonNegativeNumber);
    c->add_option("--duration", a->duration, "Exit after this many seconds")->check(CLI::NonNegativeNumber);
    c->add_flag("--no-latch", a->no_latch, "Do not latch the last message");
    c->add_option("--definition-file", a->definition_file, ".msg text or a message_definition bundle for the type");
    c->callback([&, a] {
      action = [a](Runner& r) {
        return r.topic_pub(a->topic, a->type, a->literal, a->rate, !a->no_latch, a->count, a->duration,
                           a->definition_file);
      };
    });
  }
  for (bool bandwidth : {false, true}) {
    auto* c = topic->add_subcommand(bandwidth ? "bw" : "hz", bandwidth ? "Bandwidth of a topic" : "Rate of a topic");
    struct A {
      std::string topic;
      double window = 5, duration = 0;
    };
    auto a = std::make_shared<A>();
    c->add_option("topic", a->topic)->required();
    c->add_option("--window,-w", a->window, "Sliding window in seconds")->check(CLI::PositiveNumber);
    c->add_option("--duration", a->duration, "Exit after this many seconds")->check(CLI::NonNegativeNumber);
    c->callback([&, a, bandwidth] {
      action = [a, bandwidth](Runner& r) { return r.topic_rate(a->topic, bandwidth, a->window, a->duration); };
    });
  }

  // node
  auto* node_cmd = app.add_subcommand("node", "Nodes")->require_subcommand(1);
  node_cmd->add_subcommand("list", "List nodes")->callback([&] { action = [](Runner& r) { return r.node_list(); }; });
  {
    auto* c = node_cmd->add_subcommand("info", "Publications, subscriptions and services of a node");
    auto name = std::make_shared<std::string>();
    c->add_option("node", *name)->required();
    c->callback([&, name] { action = [name](Runner& r) { return r.node_info(*name); }; });
  }

  // service
  auto* service = app.add_subcommand("service", "Services")->require_subcommand(1);
  service->add_subcommand("list", "List services")->callback([&] {
    action = [](Runner& r) { return r.service_list(); };
  });
  {
    auto* c = service->add_subcommand("call", "Call a service with JSON arguments");
    struct A {
      std::string name, args, type;
    };
    auto a = std::make_shared<A>();
    c->add_option("service", a->name)->required();
    c->add_option("args", a->args, "JSON request object");
    c->add_option("--type", a->type, "Service type (default: asked from the server)");
    c->callback([&, a] { action = [a](Runner& r) { return r.service_call(a->name, a->args, a->type); }; });
  }

  // param
  auto* param = app.add_subcommand("param", "Parameter server")->require_subcommand(1);
  {
    auto key = std::make_shared<std::string>();
    auto* c = param->add_subcommand("get", "Print a parameter");
    c->add_option("key", *key)->required();
    c->callback([&, key] { action = [key](Runner& r) { return r.param_get(*key); }; });
  }
  {
    auto kv = std::make_shared<std::pair<std::string, std::string>>();
    auto* c = param->add_subcommand("set", "Set a parameter (JSON, or a plain string)");
    c->add_option("key", kv->first)->required();
    c->add_option("value", kv->second)->required();
    c->callback([&, kv] { action = [kv](Runner& r) { return r.param_set(kv->first, kv->second); }; });
  }
  {
    auto ns = std::make_shared<std::string>();
    auto* c = param->add_subcommand("list", "List parameter names");
    c->add_option("namespace", *ns);
    c->callback([&, ns] { action = [ns](Runner& r) { return r.param_list(*ns); }; });
  }
  {
    auto key = std::make_shared<std::string>();
    auto* c = param->add_subcommand("delete", "Delete a parameter");
    c->add_option("key", *key)->required();
    c->callback([&, key] { action = [key](Runner& r) { return r.param_delete(*key); }; });
  }

  // tf
  auto* tf_cmd = app.add_subcommand("tf", "Transforms")->require_subcommand(1);
  {
    auto frames = std::make_shared<std::pair<std::string, std::string>>();
    auto* c = tf_cmd->add_subcommand("lookup", "Pose of SOURCE in TARGET from /tf and /tf_static");
    c->add_option("target", frames->first)->required();
    c->add_option("source", frames->second)->required();
    c->callback([&, frames] { action = [frames](Runner& r) { return r.tf_lookup(frames->first, frames->second); }; });
  }

  // msg
  auto* msg_cmd = app.add_subcommand("msg", "Message definitions")->require_subcommand(1);
  {
    auto types = std::make_shared<std::vector<std::string>>();
    auto* c = msg_cmd->add_subcommand("md5", "Print type checksums");
    c->add_option("types", *types)->required();
    c->callback([&, types] { action = [types](Runner& r) { return r.msg_md5(*types); }; });
  }
  {
    auto type = std::make_shared<std::string>();
    auto* c = msg_cmd->add_subcommand("deps", "Print transitive dependencies");
    c->add_option("type", *type)->required();
    c->callback([&, type] { action = [type](Runner& r) { return r.msg_deps(*type); }; });
  }
  {
    struct A {
      std::string out;
      std::vector<std::string> types;
    };
    auto a = std::make_shared<A>();
    auto* c = msg_cmd->add_subcommand("gen", "Generate C++ headers");
    c->add_option("--out,-o", a->out, "Output directory")->required();
    c->add_option("types", a->types, "Types to generate (default: all known)");
    c->callback([&, a] { action = [a](Runner& r) { return r.msg_gen(a->out, a->types); }; });
  }

  // bench
  auto* bench = app.add_subcommand("bench", "Measurements")->require_subcommand(1);
  {
    auto names = std::make_shared<std::vector<std::string>>();
    auto* c = bench->add_subcommand("overhead", "JSON vs binary size for named payloads");
    c->add_option("--type", *names, "bytes3mb, float64x1000 or empty (default: all)");
    c->callback([&, names] { action = [names](Runner& r) { return r.bench_overhead(*names); }; });
  }

  // run
  auto* run_cmd = app.add_subcommand("run", "Long-running services")->require_subcommand(1);
  {
    struct A {
      std::string bind = "0.0.0.0";
      std::uint16_t port = 11311;
    };
    auto a = std::make_shared<A>();
    auto* c = run_cmd->add_subcommand("master", "A ROS master with parameter server");
    c->add_option("--bind", a->bind, "Listen address");
    c->add_option("--port,-p", a->port, "Listen port (0 picks one)");
    c->callback([&, a] { action = [a](Runner& r) { return r.run_master(a->bind, a->port); }; });
  }
  {
    struct A {
      std::vector<std::string> roots;
      std::string service{asset::kDefaultServiceName};
    };
    auto a = std::make_shared<A>();
    auto* c = run_cmd->add_subcommand("loader-service", "Serve meshes and assets over asset_msgs/GetModel");
    c->add_option("--root", a->roots, "Package root (default: ROS_PACKAGE_PATH)");
    c->add_option("--service", a->service, "Service name");
    c->callback([&, a] { action = [a](Runner& r) { return r.run_loader(a->roots, a->service); }; });
  }
  {
    struct A {
      std::string bind = "127.0.0.1", token, console_dir;
      std::uint16_t port = 9090;
      bool no_tf = false;
      CLI::Option* console = nullptr;
    };
    auto a = std::make_shared<A>();
    auto* c = run_cmd->add_subcommand("bridge", "Websocket JSON bridge");
    c->add_option("--bind", a->bind, "Listen address (non-loopback needs --token)");
    c->add_option("--port,-p", a->port, "Listen port (0 picks one)");
    c->add_option("--token", a->token, "Shared secret clients must send first");
    a->console = c->add_option("--serve-console", a->console_dir,
                               "Serve the web console from DIR (default: ROSLITE_CONSOLE_DIR or ./web_console/dist)")
                     ->expected(0, 1);
    c->add_flag("--no-tf", a->no_tf, "Do not listen to /tf for tf_lookup");
    c->callback([&, a] {
      bool serve = a->console->count() > 0;
      action = [a, serve](Runner& r) {
        return r.run_bridge(a->bind, a->port, a->token, serve, a->console_dir, !a->no_tf);
      };
    });
  }

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("roslite");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kUsage;
  }
  if (!action) {
    err << app.help();
    return exit_code::kUsage;
  }
  try {
    Runner runner(g, out, err, stop);
    return action(runner);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace roslite::cli

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

#include "roslite/bridge/server.h"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <iterator>
#include <thread>

#include "roslite/bridge/websocket.h"
#include "roslite/node/names.h"
#include "roslite/util/strings.h"

namespace roslite::bridge {

namespace fs = std::filesystem;
using net::Clock;
using serde::DynamicValue;

namespace {

// Malformed op: missing or mistyped op fields.
class BadRequest : public Error {
 public:
  using Error::Error;
};

std::int64_t wall_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string string_field(const Json& op, const char* key, bool required = true) {
  auto it = op.find(key);
  if (it == op.end() || it->is_null()) {
    if (required) throw BadRequest(std::string("missing '") + key + "'");
    return {};
  }
  if (!it->is_string()) throw BadRequest(std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

// Constant time for equal lengths.
bool tokens_equal(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  unsigned diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff |= static_cast<unsigned char>(a[i] ^ b[i]);
  return diff == 0;
}

std::string content_type(const fs::path& p) {
  std::string ext = util::to_lower(p.extension().string());
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript; charset=utf-8";
  if (ext == ".css") return "text/css; charset=utf-8";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".wasm") return "application/wasm";
  if (ext == ".txt") return "text/plain; charset=utf-8";
  return "application/octet-stream";
}

std::optional<std::string> percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out.push_back(s[i]);
      continue;
    }
    if (i + 2 >= s.size()) return std::nullopt;
    int v = 0;
    for (int k = 1; k <= 2; ++k) {
      char c = s[i + k];
      v <<= 4;
      if (c >= '0' && c <= '9') v |= c - '0';
      else if (c >= 'a' && c <= 'f') v |= c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v |= c - 'A' + 10;
      else return std::nullopt;
    }
    if (v == 0) return std::nullopt;
    out.push_back(static_cast<char>(v));
    i += 2;
  }
  return out;
}

Json vec_json(const tf::Vec3& v) { return Json{{"x", v.x}, {"y", v.y}, {"z", v.z}}; }
Json quat_json(const tf::Quat& q) { return Json{{"x", q.x}, {"y", q.y}, {"z", q.z}, {"w", q.w}}; }

}  // namespace

bool is_loopback_address(const std::string& host) {
  return host == "localhost" || host == "::1" || host == "[::1]" || host.rfind("127.", 0) == 0;
}

struct Delivered {
  node::MessageEvent event;
  std::int64_t recv_ms = 0;
  std::string topic;
  // JSON text, built once by whichever session sends first.
  mutable std::once_flag once;
  mutable std::string text;

  const std::string& encoded() const {
    std::call_once(once, [this] {
      if (!event.value || !event.spec || !event.registry) {
        text = dump(Json{{"op", "status"},
                         {"level", "warning"},
                         {"topic", topic},
                         {"text", "cannot decode message on " + topic + ": " +
                                      (event.decode_error.empty() ? "schema unknown" : event.decode_error)}});
        return;
      }
      Json j = Json::object();
      j["op"] = "message";
      j["topic"] = topic;
      j["msg"] = to_json(*event.spec, *event.value, *event.registry);
      j["recvStampMs"] = recv_ms;
      text = dump(j);
    });
    return text;
  }
};

struct BridgeServer::Hub {
  std::string topic;
  std::shared_ptr<node::Subscription> subscription;
  std::mutex mu;
  std::vector<std::shared_ptr<Session>> listeners;
};

class BridgeServer::Session : public std::enable_shared_from_this<Session> {
 public:
  Session(BridgeServer& server, net::Socket& socket, ws::Connection& conn)
      : server_(server), socket_(socket), conn_(conn) {}

  void run();
  void offer(const std::shared_ptr<const Delivered>& d);

  std::size_t subscription_count() {
    std::lock_guard lock(mu_);
    return subs_.size();
  }

 private:
  struct ClientSub {
    node::Millis throttle{0};
    std::deque<std::shared_ptr<const Delivered>> pending;
    Clock::time_point last_sent{};
  };

  bool authenticate();
  void handle(const std::string& text);
  void dispatch(const std::string& op, const Json& j, const Json& id);
  void op_subscribe(const Json& j, const Json& id);
  void op_unsubscribe(const Json& j, const Json& id);
  void op_advertise(const Json& j, const Json& id);
  void op_publish(const Json& j, const Json& id);
  void op_call_service(const Json& j, const Json& id);
  void op_topics(const Json& id);
  void op_tf_lookup(const Json& j, const Json& id);
  void op_status(const Json& id);

  std::shared_ptr<node::Publisher> ensure_advertised(const std::string& topic, const std::string& type, bool latch);
  void reply(Json frame);
  void status(const Json& id, const char* level, const std::string& text, Json extra = Json::object());
  void writer_loop();
  void teardown();

  BridgeServer& server_;
  net::Socket& socket_;
  ws::Connection& conn_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::string> control_;
  std::map<std::string, ClientSub> subs_;
  bool stop_ = false;
  std::uint64_t sent_ = 0, dropped_ = 0, coalesced_ = 0;
  std::thread writer_;

  // Touched only by the reader thread.
  std::map<std::string, std::shared_ptr<node::Publisher>> advertised_;
};

void BridgeServer::Session::run() {
  writer_ = std::thread([this] { writer_loop(); });
  try {
    if (authenticate()) {
      for (;;) {
        ws::Message m = conn_.receive();
        if (m.opcode == ws::Opcode::kClose) break;
        if (m.opcode == ws::Opcode::kBinary) {
          status(nullptr, "error", "binary frames are not supported; send JSON text");
          continue;
        }
        handle(m.data);
      }
    }
  } catch (const std::exception&) {
    // Disconnect, protocol violation or server stop.
  }
  teardown();
}

bool BridgeServer::Session::authenticate() {
  const std::string& token = server_.options_.auth_token;
  if (token.empty()) return true;
  bool ok = false;
  Json id;
  try {
    ws::Message m = conn_.receive(Clock::now() + server_.options_.auth_timeout);
    if (m.opcode == ws::Opcode::kText) {
      Json j = Json::parse(m.data);
      if (j.is_object()) {
        if (j.contains("id")) id = j["id"];
        ok = j.value("op", "") == "auth" && j.contains("token") && j["token"].is_string() &&
             tokens_equal(j["token"].get<std::string>(), token);
      }
    }
  } catch (const Json::exception&) {
  } catch (const TimeoutError&) {
  }
  Json frame{{"op", "status"}, {"level", ok ? "info" : "error"}, {"text", ok ? "authenticated" : "unauthorized"}};
  if (!id.is_null()) frame["id"] = id;
  if (ok) {
    reply(std::move(frame));
    return true;
  }
  try {
    conn_.send_text(dump(frame), Clock::now() + node::Millis(1000));
  } catch (const std::exception&) {
  }
  conn_.close(ws::close_code::kPolicyViolation, "unauthorized");
  return false;
}

void BridgeServer::Session::handle(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    status(nullptr, "error", std::string("malformed JSON: ") + e.what());
    return;
  }
  if (!j.is_object()) {
    status(nullptr, "error", "an op must be a JSON object");
    return;
  }
  Json id = j.contains("id") ? j["id"] : Json();
  try {
    std::string op = string_field(j, "op");
    dispatch(op, j, id);
  } catch (const serde::SchemaMismatch& e) {
    status(id, "error", e.what(), Json{{"path", e.field_path()}});
  } catch (const std::exception& e) {
    status(id, "error", e.what());
  }
}

void BridgeServer::Session::dispatch(const std::string& op, const Json& j, const Json& id) {
  if (op == "subscribe") return op_subscribe(j, id);
  if (op == "unsubscribe") return op_unsubscribe(j, id);
  if (op == "advertise") return op_advertise(j, id);
  if (op == "publish") return op_publish(j, id);
  if (op == "call_service") return op_call_service(j, id);
  if (op == "topics") return op_topics(id);
  if (op == "tf_lookup") return op_tf_lookup(j, id);
  if (op == "status") return op_status(id);
  if (op == "auth") return status(id, "info", "already authenticated");
  throw BadRequest("unknown op '" + op + "'");
}

void BridgeServer::Session::op_subscribe(const Json& j, const Json& id) {
  std::string topic = server_.node_->resolve(string_field(j, "topic"));
  std::string type = string_field(j, "type", false);
  std::int64_t throttle = 0;
  if (auto it = j.find("throttle_ms"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) throw BadRequest("'throttle_ms' must be a non-negative integer");
    throttle = it->get<std::int64_t>();
  }
  bool existing = false;
  {
    std::lock_guard lock(mu_);
    auto [it, inserted] = subs_.try_emplace(topic);
    it->second.throttle = node::Millis(throttle);
    existing = !inserted;
  }
  if (!existing) {
    try {
      server_.attach(shared_from_this(), topic, type);
    } catch (...) {
      std::lock_guard lock(mu_);
      subs_.erase(topic);
      throw;
    }
  }
  if (!id.is_null()) status(id, "info", (existing ? "updated subscription to " : "subscribed to ") + topic);
}

void BridgeServer::Session::op_unsubscribe(const Json& j, const Json& id) {
  std::string topic = server_.node_->resolve(string_field(j, "topic"));
  bool had = false;
  {
    std::lock_guard lock(mu_);
    had = subs_.erase(topic) > 0;
  }
  if (!had) {
    status(id, "warning", "not subscribed to " + topic);
    return;
  }
  server_.detach(shared_from_this(), topic);
  if (!id.is_null()) status(id, "info", "unsubscribed from " + topic);
}

std::shared_ptr<node::Publisher> BridgeServer::Session::ensure_advertised(const std::string& topic,
                                                                          const std::string& type, bool latch) {
  if (auto it = advertised_.find(topic); it != advertised_.end()) {
    if (!type.empty() && type != it->second->type()) {
      throw node::TypeConflict(topic + " is advertised as " + it->second->type() + ", not " + type);
    }
    return it->second;
  }
  auto pub = server_.acquire_publisher(topic, type, latch);
  advertised_[topic] = pub;
  return pub;
}

void BridgeServer::Session::op_advertise(const Json& j, const Json& id) {
  std::string topic = server_.node_->resolve(string_field(j, "topic"));
  std::string type = string_field(j, "type");
  bool latch = j.contains("latch") && j["latch"].is_boolean() && j["latch"].get<bool>();
  ensure_advertised(topic, type, latch);
  if (!id.is_null()) status(id, "info", "advertised " + topic + " [" + type + "]");
}

void BridgeServer::Session::op_publish(const Json& j, const Json& id) {
  std::string topic = server_.node_->resolve(string_field(j, "topic"));
  std::string type = string_field(j, "type", false);
  auto pub = ensure_advertised(topic, type, false);
  const auto& registry = *server_.node_->registry();
  const msg::MsgSpec* spec = registry.find(pub->type());
  if (!spec) throw BadRequest("unknown message type " + pub->type());
  auto it = j.find("msg");
  DynamicValue value = from_json(*spec, it == j.end() || it->is_null() ? Json::object() : *it, registry);
  pub->publish(value);
  if (!id.is_null()) status(id, "info", "published to " + topic);
}

void BridgeServer::Session::op_call_service(const Json& j, const Json& id) {
  auto& node = *server_.node_;
  std::string service = node.resolve(string_field(j, "service"));
  std::string type = string_field(j, "type", false);
  if (type.empty()) type = node.service_type(service);
  const auto& registry = *node.registry();
  const msg::SrvSpec* srv = registry.find_service(type);
  if (!srv) throw BadRequest("unknown service type '" + type + "'");
  auto it = j.find("args");
  DynamicValue request = from_json(srv->request, it == j.end() || it->is_null() ? Json::object() : *it, registry);
  DynamicValue response;
  try {
    response = node.call_service(service, type, request, server_.options_.service_timeout);
  } catch (const node::RemoteFailure& e) {
    throw node::RemoteFailure(std::string("service call failed: ") + e.what());
  }
  Json frame = Json::object();
  frame["op"] = "service_response";
  frame["id"] = id;
  frame["service"] = service;
  frame["type"] = type;
  frame["values"] = to_json(srv->response, response, registry);
  reply(std::move(frame));
}

void BridgeServer::Session::op_topics(const Json& id) {
  Json topics = Json::array();
  for (const auto& [name, type] : server_.node_->published_topics()) topics.push_back(Json{{"topic", name}, {"type", type}});
  Json frame = Json::object();
  frame["op"] = "topics";
  frame["id"] = id;
  frame["topics"] = std::move(topics);
  reply(std::move(frame));
}

void BridgeServer::Session::op_tf_lookup(const Json& j, const Json& id) {
  std::string target = string_field(j, "target");
  std::string source = string_field(j, "source");
  if (!server_.options_.frames) throw BadRequest("tf_lookup unavailable: the bridge has no frame tree");
  tf::Transform t = server_.options_.frames->lookup(target, source);
  Json frame = Json::object();
  frame["op"] = "tf_lookup";
  frame["id"] = id;
  frame["target"] = target;
  frame["source"] = source;
  frame["translation"] = vec_json(t.translation);
  frame["rotation"] = quat_json(t.rotation);
  reply(std::move(frame));
}

void BridgeServer::Session::op_status(const Json& id) {
  BridgeStats s = server_.stats();
  std::uint64_t sent, dropped, coalesced;
  std::size_t subs;
  {
    std::lock_guard lock(mu_);
    sent = sent_;
    dropped = dropped_;
    coalesced = coalesced_;
    subs = subs_.size();
  }
  status(id, "info", "ok",
         Json{{"subscriptions", subs},
              {"sent", sent},
              {"dropped", dropped},
              {"coalesced", coalesced},
              {"bridge",
               {{"connections", s.connections},
                {"subscriptions", s.subscriptions},
                {"node_subscriptions", s.node_subscriptions},
                {"frames_sent", s.frames_sent},
                {"frames_dropped", s.frames_dropped}}}});
}

void BridgeServer::Session::reply(Json frame) {
  std::string text = dump(frame);
  {
    std::lock_guard lock(mu_);
    if (stop_) return;
    control_.push_back(std::move(text));
  }
  cv_.notify_one();
}

void BridgeServer::Session::status(const Json& id, const char* level, const std::string& text, Json extra) {
  Json frame = Json::object();
  frame["op"] = "status";
  if (!id.is_null()) frame["id"] = id;
  frame["level"] = level;
  frame["text"] = text;
  for (auto& [k, v] : extra.items()) frame[k] = v;
  reply(std::move(frame));
}

void BridgeServer::Session::offer(const std::shared_ptr<const Delivered>& d) {
  {
    std::lock_guard lock(mu_);
    if (stop_) return;
    auto it = subs_.find(d->topic);
    if (it == subs_.end()) return;
    ClientSub& s = it->second;
    if (s.throttle.count() > 0) {
      // Latest wins inside a throttle window.
      if (!s.pending.empty()) {
        s.pending.clear();
        ++coalesced_;
      }
    } else if (s.pending.size() >= server_.options_.max_pending) {
      ++dropped_;
      server_.frames_dropped_.fetch_add(1);
      return;
    }
    s.pending.push_back(d);
  }
  cv_.notify_one();
}

void BridgeServer::Session::writer_loop() {
  std::unique_lock lock(mu_);
  while (!stop_) {
    auto now = Clock::now();
    std::optional<Clock::time_point> next_due;
    std::vector<std::string> controls(std::make_move_iterator(control_.begin()), std::make_move_iterator(control_.end()));
    control_.clear();
    std::vector<std::shared_ptr<const Delivered>> messages;
    for (auto& [topic, s] : subs_) {
      if (s.pending.empty()) continue;
      auto due = s.last_sent + s.throttle;
      if (s.throttle.count() == 0 || due <= now) {
        messages.push_back(std::move(s.pending.front()));
        s.pending.pop_front();
        s.last_sent = now;
        due = now + s.throttle;
      }
      if (!s.pending.empty() && (!next_due || due < *next_due)) next_due = due;
    }
    if (controls.empty() && messages.empty()) {
      if (next_due) {
        cv_.wait_until(lock, *next_due);
      } else {
        cv_.wait(lock);
      }
      continue;
    }
    lock.unlock();
    std::size_t n = 0;
    try {
      for (const auto& text : controls) {
        conn_.send_text(text, Clock::now() + server_.options_.send_timeout);
        ++n;
      }
      for (const auto& d : messages) {
        conn_.send_text(d->encoded(), Clock::now() + server_.options_.send_timeout);
        ++n;
      }
    } catch (const std::exception&) {
      // Dead or stuck client: wake the reader so the session ends.
      socket_.shutdown();
      lock.lock();
      stop_ = true;
      break;
    }
    server_.frames_sent_.fetch_add(n);
    lock.lock();
    sent_ += n;
  }
}

void BridgeServer::Session::teardown() {
  std::vector<std::string> topics;
  {
    std::lock_guard lock(mu_);
    for (const auto& entry : subs_) topics.push_back(entry.first);
    subs_.clear();
  }
  auto self = shared_from_this();
  for (const auto& topic : topics) server_.detach(self, topic);
  for (const auto& entry : advertised_) server_.release_publisher(entry.first);
  advertised_.clear();
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  if (writer_.joinable()) writer_.join();
}

// ---- BridgeServer ----

BridgeServer::BridgeServer(std::shared_ptr<node::Node> node, BridgeOptions options)
    : node_(std::move(node)), options_(std::move(options)) {
  if (!is_loopback_address(options_.bind_address) && options_.auth_token.empty()) {
    throw BridgeConfigError("binding the bridge to " + options_.bind_address + " requires an auth token");
  }
  if (!options_.console_dir.empty() && !fs::is_directory(options_.console_dir)) {
    throw BridgeConfigError("console directory " + options_.console_dir.string() + " does not exist");
  }
  server_.start(options_.bind_address, options_.port, [this](net::Socket& s) { serve(s); });
}

BridgeServer::~BridgeServer() { stop(); }

void BridgeServer::stop() { server_.stop(); }

BridgeStats BridgeServer::stats() const {
  BridgeStats s;
  {
    std::lock_guard lock(sessions_mu_);
    s.connections = sessions_.size();
    for (Session* session : sessions_) s.subscriptions += session->subscription_count();
  }
  {
    std::lock_guard lock(topology_mu_);
    s.node_subscriptions = hubs_.size();
  }
  s.frames_sent = frames_sent_.load();
  s.frames_dropped = frames_dropped_.load();
  return s;
}

void BridgeServer::serve(net::Socket& socket) {
  http::Message request;
  try {
    request = ws::read_http_head(socket, Clock::now() + node::Millis(10000));
  } catch (const std::exception&) {
    return;
  }
  try {
    if (!ws::is_upgrade_request(request)) {
      serve_static(socket, request);
      return;
    }
    std::string response;
    try {
      response = ws::handshake_response(request);
    } catch (const http::HttpError& e) {
      socket.send_all(http::make_response(400, "Bad Request", "text/plain", e.what()));
      return;
    }
    socket.send_all(response);
  } catch (const std::exception&) {
    return;
  }
  socket.set_nodelay(true);
  ws::Connection conn(socket, false, options_.max_message);
  auto session = std::make_shared<Session>(*this, socket, conn);
  {
    std::lock_guard lock(sessions_mu_);
    sessions_.insert(session.get());
  }
  session->run();
  {
    std::lock_guard lock(sessions_mu_);
    sessions_.erase(session.get());
  }
}

void BridgeServer::serve_static(net::Socket& socket, const http::Message& request) {
  auto respond = [&](int code, const char* reason, const std::string& type, std::string_view body) {
    socket.send_all(http::make_response(code, reason, type, body), Clock::now() + options_.send_timeout);
  };
  if (options_.console_dir.empty()) return respond(404, "Not Found", "text/plain", "console not enabled\n");
  if (request.method() != "GET") return respond(405, "Method Not Allowed", "text/plain", "GET only\n");
  std::string target = request.target();
  target = target.substr(0, target.find_first_of("?#"));
  auto decoded = percent_decode(target);
  if (!decoded || decoded->empty() || decoded->front() != '/') return respond(400, "Bad Request", "text/plain", "bad path\n");
  fs::path rel;
  for (std::string_view part : util::split(std::string_view(*decoded).substr(1), '/')) {
    if (part.empty() || part == ".") continue;
    if (part == ".." || part.find('\\') != std::string_view::npos) {
      return respond(403, "Forbidden", "text/plain", "path escapes the console root\n");
    }
    rel /= std::string(part);
  }
  std::error_code ec;
  fs::path root = fs::weakly_canonical(options_.console_dir, ec);
  fs::path path = fs::weakly_canonical(root / rel, ec);
  if (fs::is_directory(path)) path /= "index.html";
  auto [root_end, _] = std::mismatch(root.begin(), root.end(), path.begin(), path.end());
  if (ec || root_end != root.end()) return respond(403, "Forbidden", "text/plain", "path escapes the console root\n");
  std::ifstream in(path, std::ios::binary);
  if (!fs::is_regular_file(path) || !in) return respond(404, "Not Found", "text/plain", "not found\n");
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  respond(200, "OK", content_type(path), body);
}

void BridgeServer::attach(const std::shared_ptr<Session>& session, const std::string& topic, const std::string& type) {
  std::lock_guard lock(topology_mu_);
  std::shared_ptr<Hub> hub;
  if (auto it = hubs_.find(topic); it != hubs_.end()) {
    hub = it->second;
    std::string resolved = hub->subscription->type();
    if (!type.empty() && type != "*" && resolved != "*" && resolved != type) {
      throw node::TypeConflict(topic + " is subscribed as " + resolved + ", not " + type);
    }
  } else {
    hub = std::make_shared<Hub>();
    hub->topic = topic;
    std::weak_ptr<Hub> weak = hub;
    hub->subscription = node_->subscribe(topic, type.empty() ? "*" : type, [weak](const node::MessageEvent& ev) {
      auto h = weak.lock();
      if (!h) return;
      auto d = std::make_shared<Delivered>();
      d->event = ev;
      d->recv_ms = wall_ms();
      d->topic = h->topic;
      std::vector<std::shared_ptr<Session>> listeners;
      {
        std::lock_guard hl(h->mu);
        listeners = h->listeners;
      }
      for (const auto& l : listeners) l->offer(d);
    });
    hubs_[topic] = hub;
  }
  std::lock_guard hl(hub->mu);
  if (std::find(hub->listeners.begin(), hub->listeners.end(), session) == hub->listeners.end()) {
    hub->listeners.push_back(session);
  }
}

void BridgeServer::detach(const std::shared_ptr<Session>& session, const std::string& topic) {
  std::lock_guard lock(topology_mu_);
  auto it = hubs_.find(topic);
  if (it == hubs_.end()) return;
  std::shared_ptr<Hub> hub = it->second;
  bool empty;
  {
    std::lock_guard hl(hub->mu);
    std::erase(hub->listeners, session);
    empty = hub->listeners.empty();
  }
  if (!empty) return;
  hubs_.erase(it);
  try {
    node_->unsubscribe(topic);
  } catch (const std::exception&) {
  }
}

std::shared_ptr<node::Publisher> BridgeServer::acquire_publisher(const std::string& topic, const std::string& type,
                                                                 bool latch) {
  std::lock_guard lock(topology_mu_);
  auto it = publishers_.find(topic);
  if (it == publishers_.end()) {
    BridgePublisher entry;
    if (auto existing = node_->find_publisher(topic)) {
      entry.publisher = existing;
    } else {
      if (type.empty()) throw BadRequest("'type' is required for the first publish on " + topic);
      entry.publisher = node_->advertise(topic, type, latch);
      entry.owned = true;
    }
    it = publishers_.emplace(topic, std::move(entry)).first;
  }
  if (!type.empty() && type != it->second.publisher->type()) {
    std::string message = topic + " is advertised as " + it->second.publisher->type() + ", not " + type;
    if (it->second.users == 0) publishers_.erase(it);
    throw node::TypeConflict(message);
  }
  ++it->second.users;
  return it->second.publisher;
}

void BridgeServer::release_publisher(const std::string& topic) {
  std::lock_guard lock(topology_mu_);
  auto it = publishers_.find(topic);
  if (it == publishers_.end() || --it->second.users > 0) return;
  bool owned = it->second.owned;
  publishers_.erase(it);
  if (!owned) return;
  try {
    node_->unadvertise(topic);
  } catch (const std::exception&) {
  }
}

}  // namespace roslite::bridge

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

#include "roslite/tf/listener.h"

namespace roslite::tf {

TfListener::TfListener(std::shared_ptr<node::Node> node, std::shared_ptr<FrameTree> tree)
    : node_(std::move(node)), tree_(tree ? std::move(tree) : std::make_shared<FrameTree>()) {
  dynamic_ = node_->subscribe("/tf", "tf2_msgs/TFMessage",
                              [this](const node::MessageEvent& ev) { on_message(ev, false); });
  static_ = node_->subscribe("/tf_static", "tf2_msgs/TFMessage",
                             [this](const node::MessageEvent& ev) { on_message(ev, true); });
}

TfListener::~TfListener() {
  node_->unsubscribe("/tf");
  node_->unsubscribe("/tf_static");
}

void TfListener::on_message(const node::MessageEvent& ev, bool is_static) {
  messages_.fetch_add(1);
  if (!ev.value) {
    malformed_.fetch_add(1);
    return;
  }
  try {
    tree_->ingest(*ev.value, is_static);
  } catch (const std::exception&) {
    malformed_.fetch_add(1);
  }
}

RobotTracker::RobotTracker(std::shared_ptr<node::Node> node, const std::string& description_param,
                           const std::string& joint_topic)
    : node_(std::move(node)) {
  xmlrpc::XrValue desc = node_->param_get(description_param);
  if (!desc.is_str()) throw UrdfError("parameter " + description_param + " is not a string");
  model_ = parse_urdf(desc.as_str());
  joint_topic_ = node_->resolve(joint_topic);
  sub_ = node_->subscribe(joint_topic_, "sensor_msgs/JointState", [this](const node::MessageEvent& ev) {
    joint_messages_.fetch_add(1);
    if (!ev.value) return;
    FkStats s;
    JointConfiguration update;
    try {
      update = joint_state_apply(model_, *ev.value, &s);
    } catch (const std::exception&) {
      return;
    }
    std::lock_guard lock(mu_);
    for (auto& [k, v] : update) config_[k] = v;
    stats_.unknown_joints += s.unknown_joints;
  });
}

RobotTracker::~RobotTracker() { node_->unsubscribe(joint_topic_); }

JointConfiguration RobotTracker::configuration() const {
  std::lock_guard lock(mu_);
  return config_;
}

std::map<std::string, Transform> RobotTracker::link_poses() const {
  JointConfiguration config = configuration();
  return forward_kinematics(model_, config);
}

FkStats RobotTracker::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

}  // namespace roslite::tf

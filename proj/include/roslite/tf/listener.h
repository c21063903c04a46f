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

#ifndef ROSLITE_TF_LISTENER_H_
#define ROSLITE_TF_LISTENER_H_

#include <memory>
#include <mutex>
#include <string>

#include "roslite/node/node.h"
#include "roslite/tf/frame_tree.h"
#include "roslite/tf/urdf.h"

namespace roslite::tf {

// Feeds /tf and /tf_static into a FrameTree.
class TfListener {
 public:
  TfListener(std::shared_ptr<node::Node> node, std::shared_ptr<FrameTree> tree = nullptr);
  ~TfListener();

  const std::shared_ptr<FrameTree>& tree() const { return tree_; }
  std::uint64_t messages() const { return messages_.load(); }
  std::uint64_t malformed() const { return malformed_.load(); }

 private:
  void on_message(const node::MessageEvent& ev, bool is_static);

  std::shared_ptr<node::Node> node_;
  std::shared_ptr<FrameTree> tree_;
  std::shared_ptr<node::Subscription> dynamic_, static_;
  std::atomic<std::uint64_t> messages_{0};
  std::atomic<std::uint64_t> malformed_{0};
};

// Robot description from the parameter server plus live joint states.
class RobotTracker {
 public:
  // Throws node::ParamNotFound, UrdfError, XmlSyntaxError.
  RobotTracker(std::shared_ptr<node::Node> node, const std::string& description_param = "robot_description",
               const std::string& joint_topic = "joint_states");
  ~RobotTracker();

  const RobotModel& model() const { return model_; }
  JointConfiguration configuration() const;
  std::map<std::string, Transform> link_poses() const;
  FkStats stats() const;
  std::uint64_t joint_messages() const { return joint_messages_.load(); }

 private:
  std::shared_ptr<node::Node> node_;
  RobotModel model_;
  std::string joint_topic_;
  mutable std::mutex mu_;
  JointConfiguration config_;
  FkStats stats_;
  std::atomic<std::uint64_t> joint_messages_{0};
  std::shared_ptr<node::Subscription> sub_;
};

}  // namespace roslite::tf

#endif  // ROSLITE_TF_LISTENER_H_

# Copyright 2026 The roslite Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Reference ROS1 wire encodings produced by the rosbags serializer.

The printed hex strings are frozen into tests/wire_serde_test.cc.
"""

import numpy as np
from rosbags.typesys import Stores, get_typestore

store = get_typestore(Stores.ROS1_NOETIC)
Vector3 = store.types['geometry_msgs/msg/Vector3']
Twist = store.types['geometry_msgs/msg/Twist']
Header = store.types['std_msgs/msg/Header']
Time = store.types['builtin_interfaces/msg/Time']
TransformStamped = store.types['geometry_msgs/msg/TransformStamped']
Transform = store.types['geometry_msgs/msg/Transform']
Quaternion = store.types['geometry_msgs/msg/Quaternion']
LaserScan = store.types['sensor_msgs/msg/LaserScan']

twist = Twist(linear=Vector3(x=1.5, y=-2.0, z=0.25), angular=Vector3(x=0.0, y=0.5, z=-3.0))
print('twist', bytes(store.serialize_ros1(twist, Twist.__msgtype__)).hex())

tfs = TransformStamped(
    header=Header(seq=7, stamp=Time(sec=1600000000, nanosec=250), frame_id='map'),
    child_frame_id='base_link',
    transform=Transform(translation=Vector3(x=1.0, y=2.0, z=3.0),
                        rotation=Quaternion(x=0.0, y=0.0, z=0.0, w=1.0)))
print('transform_stamped', bytes(store.serialize_ros1(tfs, TransformStamped.__msgtype__)).hex())

scan = LaserScan(header=Header(seq=0, stamp=Time(sec=0, nanosec=0), frame_id=''),
                 angle_min=0.0, angle_max=0.0, angle_increment=0.0, time_increment=0.0,
                 scan_time=0.0, range_min=0.0, range_max=0.0,
                 ranges=np.zeros(360, dtype=np.float32), intensities=np.zeros(0, dtype=np.float32))
print('laserscan360_size', len(store.serialize_ros1(scan, LaserScan.__msgtype__)))

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

"""Computes golden MD5 sums for the vendored corpus with the rosbags type system.

rosbags ships its own ROS1 Noetic type store built from the upstream message
packages, so its hashes do not depend on the .msg text vendored in this repo.
Types absent from that store (asset_msgs, tf2_msgs) are registered from their .msg text.

Usage: python3 golden_md5.py <share/msgs dir>
"""

import hashlib
import pathlib
import sys

from rosbags.typesys import Stores, get_typestore, get_types_from_msg

# Service md5s as shipped in every ROS 1 distribution (rosservice info).
KNOWN_SRV = {
    'std_srvs/Empty': 'd41d8cd98f00b204e9800998ecf8427e',
    'std_srvs/Trigger': '937c9679a518e3a18d831e57125ea522',
    'std_srvs/SetBool': '09fb03525b03e7ea1fd3992bafd87e16',
    'roscpp_tutorials/TwoInts': '6a2e34150c00229791cc89ff309fff21',
}


def main() -> None:
    root = pathlib.Path(sys.argv[1])
    store = get_typestore(Stores.ROS1_NOETIC)
    extra = {}
    for path in sorted(root.glob('*/msg/*.msg')):
        name = f'{path.parent.parent.name}/msg/{path.stem}'
        if name not in store.fielddefs:
            extra.update(get_types_from_msg(path.read_text(), name))
    store.register(extra)

    for path in sorted(root.glob('*/msg/*.msg')):
        pkg = path.parent.parent.name
        name = f'{pkg}/msg/{path.stem}'
        _, md5 = store.generate_msgdef(name)
        print(f'{pkg}/{path.stem} {md5}')

    for name, md5 in KNOWN_SRV.items():
        print(f'{name} {md5}')

    # GetModel: request and response hash texts concatenated without separator.
    mesh_md5 = store.generate_msgdef('asset_msgs/msg/NormalizedMesh')[1]
    req = 'string uri\nbool want_raw'
    res = ('bool success\nstring message\nstring format\nstring checksum\n'
           f'{mesh_md5} mesh\nuint8[] raw')
    print('asset_msgs/GetModel', hashlib.md5((req + res).encode()).hexdigest())


if __name__ == '__main__':
    main()

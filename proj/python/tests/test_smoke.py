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

import base64
import json
import os
import socket
import time

import pytest

import roslite


@pytest.fixture
def master():
    m = roslite.Master()
    m.start('127.0.0.1', 0, '127.0.0.1')
    yield m
    m.stop()


def make_node(master, name):
    return roslite.Node(name, master.uri, '127.0.0.1', 1.0)


def test_md5_of_standard_types():
    assert roslite.md5('std_msgs/String') == '992ce8a1687cec8c8bd883ec73ca41d1'
    assert roslite.md5('geometry_msgs/Twist') == '9f195f881246fdfa2798d1d3eebca84a'
    assert roslite.md5('std_srvs/Trigger') == '937c9679a518e3a18d831e57125ea522'
    assert 'sensor_msgs/LaserScan' in roslite.message_types()
    with pytest.raises(roslite.UnresolvedType):
        roslite.md5('std_msgs/Nope')


def test_serialize_round_trip():
    twist = {'linear': {'x': 1.5, 'y': 0.0, 'z': -2.0}, 'angular': {'x': 0.0, 'y': 0.0, 'z': 0.25}}
    data = roslite.serialize('geometry_msgs/Twist', twist)
    assert len(data) == 48
    assert roslite.deserialize('geometry_msgs/Twist', data) == twist
    assert roslite.serialize('std_msgs/String', {'data': 'hi'}) == b'\x02\x00\x00\x00hi'
    assert roslite.default_value('std_msgs/Int32') == {'data': 0}
    with pytest.raises(roslite.SchemaMismatch):
        roslite.serialize('geometry_msgs/Twist', {'linear': {'q': 1}})


def test_encoding_overhead_of_byte_array():
    payload = base64.b64encode(bytes(range(256)) * 1000).decode()
    r = roslite.encoding_overhead('std_msgs/UInt8MultiArray', {'data': payload})
    assert r['binary_bytes'] == 256000 + 12
    assert r['ratio'] >= 1.33


def test_cli_bench_and_usage():
    code, out, err = roslite.cli('--json', 'bench', 'overhead', '--type', 'bytes3mb')
    assert code == 0, err
    assert json.loads(out)['results'][0]['ratio'] >= 1.33
    assert roslite.cli('no-such-command')[0] == 64


def test_pub_sub_and_latch(master):
    talker = make_node(master, '/py_talker')
    listener = make_node(master, '/py_listener')
    try:
        pub = talker.advertise('/chatter', 'std_msgs/String', latch=True)
        pub.publish({'data': 'hello'})
        sub = listener.subscribe('/chatter')
        assert sub.next(5.0) == {'data': 'hello'}
        assert sub.type == 'std_msgs/String'
        assert listener.topic_types()['/chatter'] == 'std_msgs/String'
        for i in range(5):
            pub.publish({'data': str(i)})
        assert [sub.next(5.0)['data'] for _ in range(5)] == ['0', '1', '2', '3', '4']
        sub.close()
    finally:
        talker.shutdown()
        listener.shutdown()


def test_services_and_params(master):
    server = make_node(master, '/py_server')
    client = make_node(master, '/py_client')
    try:
        server.advertise_service('/add', 'roscpp_tutorials/TwoInts', lambda req: {'sum': req['a'] + req['b']})
        assert client.call_service('/add', {'a': 2, 'b': 40}) == {'sum': 42}
        with pytest.raises(roslite.ServiceNotFound):
            client.call_service('/missing', {}, 'std_srvs/Empty', timeout=1.0)

        client.set_param('/limits', {'max': 2.5, 'names': ['a', 'b'], 'on': True})
        assert server.get_param('/limits') == {'max': 2.5, 'names': ['a', 'b'], 'on': True}
        assert '/limits/max' in client.param_names()
        client.delete_param('/limits')
        with pytest.raises(roslite.ParamNotFound):
            client.get_param('/limits')
    finally:
        server.shutdown()
        client.shutdown()


def test_master_unreachable():
    with pytest.raises(roslite.MasterUnreachable):
        roslite.Node('/lonely', 'http://127.0.0.1:1/', '127.0.0.1', 0.5)


def test_bridge_serves_console(master, tmp_path):
    (tmp_path / 'index.html').write_text('<html>console</html>')
    node = make_node(master, '/py_bridge')
    try:
        bridge = roslite.BridgeServer(node, port=0, console_dir=str(tmp_path))
        with socket.create_connection(('127.0.0.1', bridge.port), timeout=5) as s:
            s.sendall(b'GET /index.html HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n')
            reply = b''
            while chunk := s.recv(4096):
                reply += chunk
        assert b'200' in reply.split(b'\r\n', 1)[0]
        assert reply.endswith(b'<html>console</html>')
        assert bridge.stats()['connections'] == 0 or bridge.stats()['connections'] == 1
        bridge.stop()
        with pytest.raises(roslite.Error):
            roslite.BridgeServer(node, port=0, bind='0.0.0.0')
    finally:
        node.shutdown()

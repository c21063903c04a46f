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

"""ROS 1 client network layer: messages, nodes, services, parameters and the bridge."""

import json as _json

from . import _core
from ._core import (  # noqa: F401
    Error,
    Master,
    MasterUnreachable,
    ParamNotFound,
    SchemaMismatch,
    ServiceNotFound,
    TimeoutError,
    UnresolvedType,
    md5,
    message_types,
    service_types,
)

__all__ = [
    'BridgeServer', 'Error', 'Master', 'MasterUnreachable', 'Node', 'ParamNotFound', 'SchemaMismatch',
    'ServiceNotFound', 'TimeoutError', 'UnresolvedType', 'cli', 'default_value', 'deserialize',
    'encoding_overhead', 'md5', 'message_types', 'serialize', 'service_types',
]


def serialize(type_name, value):
    """Wire bytes of a message given as a dict (missing fields take defaults)."""
    return _core._serialize(type_name, _json.dumps(value))


def deserialize(type_name, data):
    return _json.loads(_core._deserialize(type_name, bytes(data)))


def default_value(type_name):
    return _json.loads(_core._default_json(type_name))


def encoding_overhead(type_name, value):
    """Binary vs bridge JSON size for one value."""
    return _core._encoding_overhead(type_name, _json.dumps(value))


def cli(*args):
    """Runs a roslite command in-process; returns (exit_code, stdout, stderr)."""
    return _core.cli([str(a) for a in args])


class Subscription:
    def __init__(self, raw):
        self._raw = raw

    @property
    def type(self):
        return self._raw.type

    @property
    def received(self):
        return self._raw.received

    def next(self, timeout=5.0):
        """Next message as a dict, or None after `timeout` seconds."""
        text = self._raw._next(timeout)
        return None if text is None else _json.loads(text)

    def close(self):
        self._raw.close()


class Publisher:
    def __init__(self, raw):
        self._raw = raw

    @property
    def topic(self):
        return self._raw.topic

    def num_subscribers(self):
        return self._raw.num_subscribers()

    def publish(self, value):
        return self._raw._publish(_json.dumps(value))


class Node:
    """A node registered with a master. Call shutdown() when done."""

    def __init__(self, name, master_uri='', host='', call_timeout=3.0):
        self._raw = _core.Node(name, master_uri, host, call_timeout)

    @property
    def name(self):
        return self._raw.name

    @property
    def raw(self):
        return self._raw

    def advertise(self, topic, type_name, latch=False):
        return Publisher(self._raw.advertise(topic, type_name, latch))

    def subscribe(self, topic, type_name='*'):
        return Subscription(self._raw.subscribe(topic, type_name))

    def advertise_service(self, name, type_name, handler):
        """`handler` maps a request dict to a response dict."""
        self._raw._advertise_service(name, type_name, lambda req: _json.dumps(handler(_json.loads(req))))

    def call_service(self, name, args=None, type_name='', timeout=10.0):
        return _json.loads(self._raw._call_service(name, type_name, _json.dumps(args or {}), timeout))

    def get_param(self, key):
        return _json.loads(self._raw._param_get(key))

    def set_param(self, key, value):
        self._raw._param_set(key, _json.dumps(value))

    def delete_param(self, key):
        self._raw.param_delete(key)

    def param_names(self):
        return self._raw.param_names()

    def topic_types(self):
        return dict(self._raw.topic_types())

    def shutdown(self):
        self._raw.shutdown()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.shutdown()


class BridgeServer:
    """Websocket JSON bridge over `node`, optionally serving a static console."""

    def __init__(self, node, port=0, bind='127.0.0.1', token='', console_dir=''):
        self._raw = _core.BridgeServer(node.raw, port, bind, token, str(console_dir))

    @property
    def port(self):
        return self._raw.port

    def stats(self):
        return self._raw.stats()

    def stop(self):
        self._raw.stop()

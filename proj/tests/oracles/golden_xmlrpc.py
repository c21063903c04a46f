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

"""Freezes XML-RPC fixtures produced by Python's stdlib xmlrpc (the library
rosmaster and rospy answer with). Run from the repo root."""
import xmlrpc.client as xc
from pathlib import Path

out = Path("tests/data/xmlrpc")
out.mkdir(parents=True, exist_ok=True)

# getSystemState as rosmaster returns it: [code, msg, [pubs, subs, srvs]].
state = [
    [["/rosout_agg", ["/rosout"]], ["/chatter", ["/talker", "/talker2"]]],
    [["/rosout", ["/rosout"]], ["/chatter", ["/listener"]]],
    [["/rosout/get_loggers", ["/rosout"]], ["/talker/set_logger_level", ["/talker"]]],
]
body = xc.dumps(((1, "current system state", state),), methodresponse=True)
head = "HTTP/1.0 200 OK\r\nServer: BaseHTTP/0.6 Python/3.8.10\r\nContent-type: text/xml\r\nContent-length: %d\r\n\r\n" % len(body.encode())
(out / "getSystemState.http").write_bytes((head + body).encode())

fault = xc.dumps(xc.Fault(-1, "method \"bogus\" is not supported"), methodresponse=True)
(out / "fault.xml").write_text(fault)

call = xc.dumps((3, True, "a<b&c", 2.5, [1, [2, "x"]], {"k": "v", "n": -7}, xc.Binary(b"\x00\xff\x10")), "mixed")
(out / "mixed_call.xml").write_text(call)
print("wrote", sorted(p.name for p in out.iterdir()))

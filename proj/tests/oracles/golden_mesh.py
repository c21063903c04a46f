#!/usr/bin/env python3
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

# Copyright 2026 The roslite Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes the demo cube meshes and freezes mesh counts with trimesh.

Vertex count = distinct (position, normal) index pairs among kept faces;
faces with |cross| < 1e-12 are degenerate and dropped.
Output: tests/data/mesh/golden.json
"""
import json
import pathlib

import numpy as np
import trimesh

ROOT = pathlib.Path(__file__).resolve().parents[2]
ASSETS = ROOT / "share" / "assets"
OUT = ROOT / "tests" / "data" / "mesh"


def write_cubes():
    demo = ASSETS / "demo" / "meshes"
    demo.mkdir(parents=True, exist_ok=True)
    cube = trimesh.creation.box(extents=(1.0, 1.0, 1.0))
    (demo / "cube.stl").write_bytes(trimesh.exchange.stl.export_stl(cube))
    (demo / "cube_ascii.stl").write_text(trimesh.exchange.stl.export_stl_ascii(cube))
    (demo / "cube.obj").write_text(trimesh.exchange.obj.export_obj(cube, include_normals=False))


def obj_counts(path):
    m = trimesh.load(path, process=False, force="mesh")
    tri = m.vertices[m.faces].astype(np.float32).astype(np.float64)
    cross = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
    keep = np.linalg.norm(cross, axis=1) >= 1e-12
    used = np.unique(m.faces[keep])
    return {
        "triangles": int(keep.sum()),
        "vertices": int(len(used)),
        "degenerate": int((~keep).sum()),
        "area": float(np.linalg.norm(cross[keep], axis=1).sum() / 2),
        "bounds": m.vertices[used].min(axis=0).tolist() + m.vertices[used].max(axis=0).tolist(),
    }


def stl_counts(path):
    m = trimesh.load(path, process=False, force="mesh")
    return {"triangles": int(len(m.faces)), "vertices": int(len(m.faces) * 3), "area": float(m.area)}


def main():
    write_cubes()
    OUT.mkdir(parents=True, exist_ok=True)
    golden = {}
    for p in sorted((ASSETS / "franka_panda" / "meshes" / "collision").glob("*.obj")):
        golden["franka_panda/meshes/collision/" + p.name] = obj_counts(p)
    for name in ("cube.stl", "cube_ascii.stl"):
        golden["demo/meshes/" + name] = stl_counts(ASSETS / "demo" / "meshes" / name)
    golden["demo/meshes/cube.obj"] = obj_counts(ASSETS / "demo" / "meshes" / "cube.obj")
    (OUT / "golden.json").write_text(json.dumps(golden, indent=1, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()

"""Mesh vertex loading (binary/ASCII STL, OBJ) and bounding boxes.

Only vertices matter here; faces are read for validation, never stored.
Primitive shapes get analytic local bounds; link bounds are the union of
per-geom bounds after transforming the 8 corners by the geom origin.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import urdf
from .errors import CorruptMesh, EmptyGeometry, UnsupportedFormat
from .geometry import Aabb, Transform

_STL_RECORD = 50  # 12 floats + uint16 attribute


def _load_stl_binary(data: bytes, path: str) -> np.ndarray:
    n = int.from_bytes(data[80:84], "little")
    if len(data) != 84 + n * _STL_RECORD:
        raise CorruptMesh(f"{path}: binary STL length mismatch ({n} triangles)")
    records = np.frombuffer(data[84:], dtype=np.uint8).reshape(n, _STL_RECORD)
    floats = records[:, :48].copy().view("<f4").reshape(n, 12)
    return floats[:, 3:12].reshape(-1, 3).astype(float)


def _load_stl_ascii(text: str, path: str) -> np.ndarray:
    verts = []
    for line in text.splitlines():
        parts = line.split()
        if len(parts) == 4 and parts[0] == "vertex":
            verts.append([float(v) for v in parts[1:4]])
    if not verts:
        raise CorruptMesh(f"{path}: ASCII STL has no vertices")
    if len(verts) % 3 != 0:
        raise CorruptMesh(f"{path}: vertex count {len(verts)} not a multiple of 3")
    return np.asarray(verts, dtype=float)


def _load_stl(path: Path) -> np.ndarray:
    data = path.read_bytes()
    if len(data) < 84:
        # too short for binary; may still be a tiny ASCII file
        return _load_stl_ascii(data.decode("utf-8", errors="replace"), str(path))
    if data[:5] == b"solid":
        # "solid" header is legal for binary too; prefer whichever is coherent
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError:
            text = None
        if text is not None and "facet" in text:
            return _load_stl_ascii(text, str(path))
    return _load_stl_binary(data, str(path))


def _load_obj(path: Path) -> np.ndarray:
    verts = []
    n_faces = 0
    for line in path.read_text().splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            if len(parts) < 4:
                raise CorruptMesh(f"{path}: bad vertex record {line!r}")
            verts.append([float(v) for v in parts[1:4]])
        elif parts[0] == "f":
            n_faces += 1
            for token in parts[1:]:
                idx = int(token.split("/")[0])
                ref = idx - 1 if idx > 0 else len(verts) + idx
                if not 0 <= ref < len(verts):
                    raise CorruptMesh(f"{path}: face index {idx} out of range")
    if not verts:
        raise CorruptMesh(f"{path}: OBJ has no vertices")
    return np.asarray(verts, dtype=float)


def load_mesh_vertices(mesh_path) -> np.ndarray:
    path = Path(mesh_path)
    suffix = path.suffix.lower()
    if suffix == ".stl":
        verts = _load_stl(path)
    elif suffix == ".obj":
        verts = _load_obj(path)
    else:
        raise UnsupportedFormat(f"{path}: only STL and OBJ are supported")
    if not np.all(np.isfinite(verts)):
        raise CorruptMesh(f"{path}: non-finite vertex coordinates")
    return verts


def load_mesh_aabb(mesh_path, scale=(1.0, 1.0, 1.0)) -> Aabb:
    """Bounds over all vertices after componentwise scaling, mesh frame."""
    verts = load_mesh_vertices(mesh_path) * np.asarray(scale, dtype=float)
    return Aabb.of_points(verts)


def geom_local_aabb(geom: urdf.Geom) -> Aabb:
    """Analytic bounds of a geom in its own frame (before the geom origin)."""
    if geom.kind == urdf.BOX:
        half = np.asarray(geom.size, dtype=float) / 2.0
        return Aabb(-half, half)
    if geom.kind == urdf.SPHERE:
        r = float(geom.radius)
        return Aabb(-r * np.ones(3), r * np.ones(3))
    if geom.kind == urdf.CYLINDER:
        r, h = float(geom.radius), float(geom.length) / 2.0
        return Aabb(np.array([-r, -r, -h]), np.array([r, r, h]))
    if geom.kind == urdf.CAPSULE:
        r, h = float(geom.radius), float(geom.length) / 2.0
        return Aabb(np.array([-r, -r, -h - r]), np.array([r, r, h + r]))
    return load_mesh_aabb(geom.mesh_path, geom.scale)


def geom_aabb(geom: urdf.Geom) -> Aabb:
    """Bounds in the link frame: local bounds re-bounded through the origin."""
    return geom_local_aabb(geom).transformed(geom.origin())


def link_aabb(model: urdf.UrdfModel, link_name: str) -> Aabb:
    """Union of per-geom bounds for a link, expressed in the link frame."""
    link = model.link(link_name)
    if not link.geoms:
        raise EmptyGeometry(link_name)
    boxes = [geom_aabb(g) for g in link.geoms]
    out = boxes[0]
    for b in boxes[1:]:
        out = out.union(b)
    return out


def aabb_in_frame(box: Aabb, link_pose: Transform, frame: Transform) -> Aabb:
    """Re-express a link-frame box in another frame via corner transform."""
    return box.transformed(frame.inverse() @ link_pose)

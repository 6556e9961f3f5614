"""Mesh loading and bounding boxes, checked against independent readers."""

import struct

import numpy as np
import pytest

from canonhand import link_aabb, load_mesh_aabb, parse_urdf
from canonhand.errors import CorruptMesh, EmptyGeometry, UnsupportedFormat

CUBE_TRIS = []
for axis in range(3):
    for side in (-0.5, 0.5):
        a = [side] * 3
        b = [side] * 3
        c = [side] * 3
        i, j = (axis + 1) % 3, (axis + 2) % 3
        a[i], a[j] = -0.5, -0.5
        b[i], b[j] = 0.5, -0.5
        c[i], c[j] = 0.5, 0.5
        d = [side] * 3
        d[i], d[j] = -0.5, 0.5
        CUBE_TRIS.append((tuple(a), tuple(b), tuple(c)))
        CUBE_TRIS.append((tuple(a), tuple(c), tuple(d)))


def write_binary_stl(path, triangles):
    with open(path, "wb") as fh:
        fh.write(b"\x00" * 80)
        fh.write(struct.pack("<I", len(triangles)))
        for tri in triangles:
            fh.write(struct.pack("<3f", 0.0, 0.0, 0.0))
            for v in tri:
                fh.write(struct.pack("<3f", *v))
            fh.write(struct.pack("<H", 0))


def write_ascii_stl(path, triangles):
    lines = ["solid test"]
    for tri in triangles:
        lines.append(" facet normal 0 0 0")
        lines.append("  outer loop")
        for v in tri:
            lines.append(f"   vertex {v[0]} {v[1]} {v[2]}")
        lines.append("  endloop")
        lines.append(" endfacet")
    lines.append("endsolid test")
    path.write_text("\n".join(lines))


def read_stl_vertices_independently(path):
    """Struct-based oracle reader, element by element."""
    data = path.read_bytes()
    (n,) = struct.unpack_from("<I", data, 80)
    verts = []
    off = 84
    for _ in range(n):
        off += 12  # normal
        for _ in range(3):
            verts.append(struct.unpack_from("<3f", data, off))
            off += 12
        off += 2
    return np.array(verts, dtype=float)


def test_unit_cube_binary_stl(tmp_path):
    path = tmp_path / "cube.stl"
    write_binary_stl(path, CUBE_TRIS)
    box = load_mesh_aabb(path)
    assert np.allclose(box.lo, [-0.5, -0.5, -0.5], atol=0)
    assert np.allclose(box.hi, [0.5, 0.5, 0.5], atol=0)


def test_cube_with_anisotropic_scale(tmp_path):
    path = tmp_path / "cube.stl"
    write_binary_stl(path, CUBE_TRIS)
    box = load_mesh_aabb(path, scale=(2.0, 1.0, 1.0))
    assert np.allclose(box.lo, [-1.0, -0.5, -0.5], atol=0)
    assert np.allclose(box.hi, [1.0, 0.5, 0.5], atol=0)


def test_ascii_stl_matches_binary(tmp_path):
    bin_path = tmp_path / "a.stl"
    txt_path = tmp_path / "b.stl"
    write_binary_stl(bin_path, CUBE_TRIS)
    write_ascii_stl(txt_path, CUBE_TRIS)
    a = load_mesh_aabb(bin_path)
    b = load_mesh_aabb(txt_path)
    assert np.array_equal(a.lo, b.lo) and np.array_equal(a.hi, b.hi)


def test_random_mesh_equals_bruteforce_vertex_scan(tmp_path):
    rng = np.random.default_rng(5)
    tris = [tuple(map(tuple, rng.normal(size=(3, 3)).astype(np.float32)))
            for _ in range(500)]
    path = tmp_path / "blob.stl"
    write_binary_stl(path, tris)
    box = load_mesh_aabb(path)
    verts = read_stl_vertices_independently(path)
    assert np.array_equal(box.lo, verts.min(axis=0))
    assert np.array_equal(box.hi, verts.max(axis=0))


def test_aabb_invariant_under_triangle_reordering(tmp_path):
    rng = np.random.default_rng(6)
    tris = [tuple(map(tuple, rng.normal(size=(3, 3)).astype(np.float32)))
            for _ in range(60)]
    a_path, b_path = tmp_path / "a.stl", tmp_path / "b.stl"
    write_binary_stl(a_path, tris)
    write_binary_stl(b_path, list(reversed(tris)))
    a, b = load_mesh_aabb(a_path), load_mesh_aabb(b_path)
    assert np.array_equal(a.lo, b.lo) and np.array_equal(a.hi, b.hi)


def test_obj_vertices_and_faces(tmp_path):
    path = tmp_path / "tri.obj"
    path.write_text("# comment\nv 0 0 0\nv 1 0 0\nv 0 2 0\nvn 0 0 1\nf 1/1 2/2 3/3\n")
    box = load_mesh_aabb(path)
    assert np.array_equal(box.lo, [0, 0, 0])
    assert np.array_equal(box.hi, [1, 2, 0])


def test_corrupt_meshes(tmp_path):
    short = tmp_path / "short.stl"
    write_binary_stl(short, CUBE_TRIS)
    short.write_bytes(short.read_bytes()[:-10])  # truncated record
    with pytest.raises(CorruptMesh):
        load_mesh_aabb(short)

    nan_path = tmp_path / "nan.stl"
    write_binary_stl(nan_path, [((0, 0, 0), (1, 0, 0), (0, float("nan"), 0))])
    with pytest.raises(CorruptMesh):
        load_mesh_aabb(nan_path)

    bad_face = tmp_path / "bad.obj"
    bad_face.write_text("v 0 0 0\nf 1 2 3\n")
    with pytest.raises(CorruptMesh):
        load_mesh_aabb(bad_face)


def test_unsupported_format(tmp_path):
    path = tmp_path / "mesh.dae"
    path.write_text("<COLLADA/>")
    with pytest.raises(UnsupportedFormat):
        load_mesh_aabb(path)


# -- link-level bounds -------------------------------------------------------------


def _model_with_link(body: str):
    return parse_urdf(f'<robot name="t"><link name="l">{body}</link></robot>')


def test_link_aabb_sphere():
    model = _model_with_link(
        '<collision><geometry><sphere radius="0.03"/></geometry></collision>')
    box = link_aabb(model, "l")
    assert np.allclose(box.lo, [-0.03] * 3, atol=0)
    assert np.allclose(box.hi, [0.03] * 3, atol=0)


def test_link_aabb_two_offset_boxes_matches_corner_oracle():
    model = _model_with_link(
        '<collision><origin xyz="0 0 0.05" rpy="0.4 -0.2 0.9"/>'
        '<geometry><box size="0.02 0.04 0.06"/></geometry></collision>'
        '<collision><origin xyz="0 0 -0.03" rpy="0 0 0"/>'
        '<geometry><box size="0.05 0.01 0.02"/></geometry></collision>')
    box = link_aabb(model, "l")

    # oracle: enumerate all 8+8 corners of both boxes directly
    def corners(size, xyz, rpy):
        from canonhand.geometry import rpy_to_matrix
        rot = rpy_to_matrix(rpy)
        out = []
        for sx in (-0.5, 0.5):
            for sy in (-0.5, 0.5):
                for sz in (-0.5, 0.5):
                    local = np.array([sx * size[0], sy * size[1], sz * size[2]])
                    out.append(rot @ local + xyz)
        return out

    pts = np.array(corners((0.02, 0.04, 0.06), (0, 0, 0.05), (0.4, -0.2, 0.9))
                   + corners((0.05, 0.01, 0.02), (0, 0, -0.03), (0, 0, 0)))
    assert np.allclose(box.lo, pts.min(axis=0), atol=1e-15)
    assert np.allclose(box.hi, pts.max(axis=0), atol=1e-15)


def test_link_aabb_cylinder_and_capsule():
    model = _model_with_link(
        '<collision><geometry><cylinder radius="0.01" length="0.08"/></geometry></collision>')
    box = link_aabb(model, "l")
    assert np.allclose(box.lo, [-0.01, -0.01, -0.04], atol=0)
    model = _model_with_link(
        '<collision><geometry><capsule radius="0.01" length="0.08"/></geometry></collision>')
    box = link_aabb(model, "l")
    assert np.allclose(box.hi, [0.01, 0.01, 0.05], atol=0)


def test_link_without_geometry_raises():
    model = parse_urdf('<robot name="t"><link name="bare"/></robot>')
    with pytest.raises(EmptyGeometry):
        link_aabb(model, "bare")


def test_unknown_link():
    from canonhand.errors import UnknownLink
    model = parse_urdf('<robot name="t"><link name="a"/></robot>')
    with pytest.raises(UnknownLink):
        link_aabb(model, "nope")


def test_mesh_geometry_inside_link(tmp_path):
    write_binary_stl(tmp_path / "cube.stl", CUBE_TRIS)
    text = ('<robot name="t"><link name="l"><collision>'
            '<geometry><mesh filename="cube.stl" scale="0.1 0.1 0.1"/></geometry>'
            '</collision></link></robot>')
    model = parse_urdf(text, asset_root=tmp_path)
    box = link_aabb(model, "l")
    assert np.allclose(box.lo, [-0.05] * 3)
    assert np.allclose(box.hi, [0.05] * 3)

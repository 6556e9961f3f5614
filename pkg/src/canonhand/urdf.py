"""URDF ingestion: XML -> validated kinematic tree.

Only the subset needed for hand analysis is modeled: links with collision /
visual geometry (collision preferred) and revolute / continuous / prismatic /
fixed joints. Unknown elements are ignored. Continuous joints receive [-pi,
pi] limits so downstream extraction can treat them as revolute.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    CycleDetected,
    MalformedXml,
    MeshNotFound,
    MultipleRoots,
    UnknownLink,
    UnresolvedLinkRef,
)
from .geometry import Transform

MESH, BOX, CYLINDER, SPHERE, CAPSULE = "mesh", "box", "cylinder", "sphere", "capsule"

REVOLUTE_KINDS = ("revolute", "continuous")


@dataclass(frozen=True)
class Geom:
    kind: str
    xyz: tuple = (0.0, 0.0, 0.0)
    rpy: tuple = (0.0, 0.0, 0.0)
    size: tuple | None = None        # box
    radius: float | None = None      # cylinder / sphere / capsule
    length: float | None = None      # cylinder / capsule
    mesh_path: str | None = None     # resolved absolute path
    scale: tuple = (1.0, 1.0, 1.0)

    def origin(self) -> Transform:
        return Transform.from_xyz_rpy(self.xyz, self.rpy)


@dataclass(frozen=True)
class UrdfLink:
    name: str
    geoms: tuple = ()


@dataclass(frozen=True)
class UrdfJoint:
    name: str
    kind: str
    parent: str
    child: str
    xyz: tuple = (0.0, 0.0, 0.0)
    rpy: tuple = (0.0, 0.0, 0.0)
    axis: tuple = (0.0, 0.0, 1.0)
    lower: float | None = None
    upper: float | None = None
    effort: float | None = None
    velocity: float | None = None

    def origin(self) -> Transform:
        return Transform.from_xyz_rpy(self.xyz, self.rpy)

    def is_revolute(self) -> bool:
        return self.kind in REVOLUTE_KINDS


@dataclass(frozen=True)
class UrdfModel:
    name: str
    links: tuple
    joints: tuple
    root_link: str
    _by_link: dict = field(default_factory=dict, compare=False, repr=False)
    _by_joint: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_link", {l.name: l for l in self.links})
        object.__setattr__(self, "_by_joint", {j.name: j for j in self.joints})

    def link(self, name: str) -> UrdfLink:
        try:
            return self._by_link[name]
        except KeyError:
            raise UnknownLink(name) from None

    def joint(self, name: str) -> UrdfJoint:
        return self._by_joint[name]

    def has_joint(self, name: str) -> bool:
        return name in self._by_joint

    def parent_joint(self, link: str) -> UrdfJoint | None:
        for j in self.joints:
            if j.child == link:
                return j
        return None

    def child_joints(self, link: str) -> list[UrdfJoint]:
        return [j for j in self.joints if j.parent == link]

    def revolute_joints(self) -> list[UrdfJoint]:
        return [j for j in self.joints if j.is_revolute()]

    def descendants(self, link: str) -> list[str]:
        """All links strictly below `link`, depth-first."""
        out, stack = [], [link]
        while stack:
            cur = stack.pop()
            for j in self.child_joints(cur):
                out.append(j.child)
                stack.append(j.child)
        return out


def _floats(text: str | None, n: int, default) -> tuple:
    if text is None:
        return tuple(default)
    vals = tuple(float(v) for v in text.split())
    if len(vals) != n:
        raise MalformedXml(f"expected {n} numbers, got {text!r}")
    return vals


def _parse_origin(elem) -> tuple[tuple, tuple]:
    origin = elem.find("origin")
    if origin is None:
        return (0.0, 0.0, 0.0), (0.0, 0.0, 0.0)
    return (_floats(origin.get("xyz"), 3, (0.0, 0.0, 0.0)),
            _floats(origin.get("rpy"), 3, (0.0, 0.0, 0.0)))


def _resolve_mesh_path(filename: str, asset_root) -> str:
    if filename.startswith("package://"):
        rest = filename[len("package://"):]
        # drop the package name, keep the in-package path
        rest = rest.split("/", 1)[1] if "/" in rest else rest
        if asset_root is None:
            raise MeshNotFound(f"package URI {filename!r} needs an asset root")
        candidate = Path(asset_root) / rest
    elif Path(filename).is_absolute():
        candidate = Path(filename)
    else:
        if asset_root is None:
            raise MeshNotFound(f"relative mesh path {filename!r} needs an asset root")
        candidate = Path(asset_root) / filename
    if not candidate.exists():
        raise MeshNotFound(str(candidate))
    return str(candidate)


def _parse_geom(elem, asset_root) -> Geom | None:
    geometry = elem.find("geometry")
    if geometry is None:
        return None
    xyz, rpy = _parse_origin(elem)
    box = geometry.find("box")
    if box is not None:
        return Geom(BOX, xyz, rpy, size=_floats(box.get("size"), 3, (0, 0, 0)))
    cyl = geometry.find("cylinder")
    if cyl is not None:
        return Geom(CYLINDER, xyz, rpy, radius=float(cyl.get("radius")),
                    length=float(cyl.get("length")))
    sph = geometry.find("sphere")
    if sph is not None:
        return Geom(SPHERE, xyz, rpy, radius=float(sph.get("radius")))
    cap = geometry.find("capsule")
    if cap is not None:
        return Geom(CAPSULE, xyz, rpy, radius=float(cap.get("radius")),
                    length=float(cap.get("length")))
    mesh = geometry.find("mesh")
    if mesh is not None:
        scale = _floats(mesh.get("scale"), 3, (1.0, 1.0, 1.0))
        path = _resolve_mesh_path(mesh.get("filename", ""), asset_root)
        return Geom(MESH, xyz, rpy, mesh_path=path, scale=scale)
    return None


def _parse_link(elem, asset_root) -> UrdfLink:
    geoms = []
    sources = elem.findall("collision") or elem.findall("visual")
    for g in sources:
        geom = _parse_geom(g, asset_root)
        if geom is not None:
            geoms.append(geom)
    return UrdfLink(elem.get("name"), tuple(geoms))


def _parse_joint(elem) -> UrdfJoint:
    name = elem.get("name", "<unnamed>")
    kind = elem.get("type")
    parent = elem.find("parent")
    child = elem.find("child")
    if parent is None or child is None:
        raise MalformedXml(f"joint {name!r} missing parent or child")
    xyz, rpy = _parse_origin(elem)
    axis_elem = elem.find("axis")
    axis = np.asarray(_floats(axis_elem.get("xyz") if axis_elem is not None else None,
                              3, (0.0, 0.0, 1.0)))
    norm = float(np.linalg.norm(axis))
    if kind in REVOLUTE_KINDS or kind == "prismatic":
        if norm == 0.0:
            raise MalformedXml(f"joint {name!r} has zero axis")
        if abs(norm - 1.0) > 1e-9:  # keep already-unit axes bitwise intact
            axis = axis / norm
    limit = elem.find("limit")
    lower = upper = effort = velocity = None
    if limit is not None:
        lower = float(limit.get("lower", 0.0))
        upper = float(limit.get("upper", 0.0))
        effort = float(limit.get("effort")) if limit.get("effort") else None
        velocity = float(limit.get("velocity")) if limit.get("velocity") else None
    if kind == "continuous" and lower is None:
        lower, upper = -np.pi, np.pi
    if kind == "revolute" and lower is None:
        raise MalformedXml(f"revolute joint {name!r} has no limit")
    return UrdfJoint(name, kind, parent.get("link"), child.get("link"),
                     xyz, rpy, tuple(float(a) for a in axis),
                     lower, upper, effort, velocity)


def parse_urdf(xml_text: str, asset_root=None) -> UrdfModel:
    """Parse URDF XML into a validated tree.

    asset_root resolves both relative mesh paths and package:// URIs; mesh
    files must exist (hard error). Raises MalformedXml, MultipleRoots,
    CycleDetected or UnresolvedLinkRef on structural problems.
    """
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise MalformedXml(str(exc)) from exc
    if root.tag != "robot":
        raise MalformedXml(f"top element is <{root.tag}>, not <robot>")

    links = tuple(_parse_link(e, asset_root) for e in root.findall("link"))
    joints = tuple(_parse_joint(e) for e in root.findall("joint"))

    link_names = {l.name for l in links}
    if len(link_names) != len(links):
        raise MalformedXml("duplicate link names")
    for j in joints:
        for ref in (j.parent, j.child):
            if ref not in link_names:
                raise UnresolvedLinkRef(ref)

    parents: dict[str, str] = {}
    for j in joints:
        if j.child in parents:
            raise CycleDetected(f"link {j.child!r} has multiple parent joints")
        parents[j.child] = j.parent
    roots = [l.name for l in links if l.name not in parents]
    if not links:
        raise MalformedXml("no links")
    if len(roots) > 1:
        raise MultipleRoots(", ".join(sorted(roots)))
    if not roots:
        raise CycleDetected("every link has a parent; joint graph is cyclic")
    # walking up from any link must reach the root
    for l in links:
        seen, cur = set(), l.name
        while cur in parents:
            if cur in seen:
                raise CycleDetected(f"cycle through link {cur!r}")
            seen.add(cur)
            cur = parents[cur]
        if cur != roots[0]:
            raise CycleDetected(f"link {l.name!r} is not connected to the root")

    return UrdfModel(root.get("name", "robot"), links, joints, roots[0])


def load_urdf(path, asset_root=None) -> UrdfModel:
    """Read a URDF file; asset_root defaults to the file's directory."""
    p = Path(path)
    if asset_root is None:
        asset_root = p.parent
    return parse_urdf(p.read_text(), asset_root)


# -- serialization ----------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def _vec(v) -> str:
    return " ".join(_fmt(x) for x in v)


def model_to_xml(model: UrdfModel) -> str:
    """Serialize the model back to URDF (geometry + joints, no inertials)."""
    out = [f'<?xml version="1.0"?>\n<robot name="{model.name}">']
    for link in model.links:
        if not link.geoms:
            out.append(f'  <link name="{link.name}"/>')
            continue
        out.append(f'  <link name="{link.name}">')
        for g in link.geoms:
            out.append('    <collision>')
            out.append(f'      <origin xyz="{_vec(g.xyz)}" rpy="{_vec(g.rpy)}"/>')
            out.append('      <geometry>')
            if g.kind == BOX:
                out.append(f'        <box size="{_vec(g.size)}"/>')
            elif g.kind == CYLINDER:
                out.append(f'        <cylinder radius="{_fmt(g.radius)}" length="{_fmt(g.length)}"/>')
            elif g.kind == SPHERE:
                out.append(f'        <sphere radius="{_fmt(g.radius)}"/>')
            elif g.kind == CAPSULE:
                out.append(f'        <capsule radius="{_fmt(g.radius)}" length="{_fmt(g.length)}"/>')
            else:
                out.append(f'        <mesh filename="{g.mesh_path}" scale="{_vec(g.scale)}"/>')
            out.append('      </geometry>')
            out.append('    </collision>')
        out.append('  </link>')
    for j in model.joints:
        out.append(f'  <joint name="{j.name}" type="{j.kind}">')
        out.append(f'    <parent link="{j.parent}"/>')
        out.append(f'    <child link="{j.child}"/>')
        out.append(f'    <origin xyz="{_vec(j.xyz)}" rpy="{_vec(j.rpy)}"/>')
        if j.kind != "fixed":
            out.append(f'    <axis xyz="{_vec(j.axis)}"/>')
        if j.lower is not None and j.kind != "continuous":
            effort = _fmt(j.effort) if j.effort is not None else "1.0"
            velocity = _fmt(j.velocity) if j.velocity is not None else "1.0"
            out.append(f'    <limit lower="{_fmt(j.lower)}" upper="{_fmt(j.upper)}" '
                       f'effort="{effort}" velocity="{velocity}"/>')
        out.append('  </joint>')
    out.append('</robot>\n')
    return "\n".join(out)

"""Canonical parameter extraction from a parsed URDF plus a light annotation.

The annotation supplies only what cannot be inferred: the original-joint to
canonical-slot mapping with signs, the palm root transform, handedness and
(optionally) fingertip link names. Everything else comes from zero-config
forward kinematics and link bounding boxes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import slots
from .errors import (
    AmbiguousPalm,
    DegenerateFrame,
    EmptyGeometry,
    InvalidParams,
    MissingChain,
    NoPalmFound,
)
from .geometry import Transform, matrix_to_rpy, normalized, snap_rotation
from .kinematics import fk_urdf
from .mesh import link_aabb
from .params import DEFAULT_THUMB_AXIS, RIGHT, CanonicalHandParams, require_valid
from .urdf import UrdfModel

_PARALLEL_TOL = 1e-6


@dataclass(frozen=True)
class HandAnnotation:
    """Manual inputs for extraction.

    joint_map rows are (original joint name, canonical slot 0..21, sign +-1),
    listed in the source URDF's declaration order. palm_* give the canonical
    palm frame expressed in the URDF root frame. fingertip_links maps finger
    index -> link name.
    """

    joint_map: tuple
    palm_xyz: tuple = (0.0, 0.0, 0.0)
    palm_rpy: tuple = (0.0, 0.0, 0.0)
    handedness: str = RIGHT
    fingertip_links: dict = field(default_factory=dict)

    def palm_origin(self) -> Transform:
        return Transform.from_xyz_rpy(self.palm_xyz, self.palm_rpy)

    def slot_to_joint(self) -> dict:
        return {slot: (name, sign) for name, slot, sign in self.joint_map}

    def finger_ranks(self, finger: int) -> dict:
        """rank -> (joint name, sign) for one finger's mapped slots."""
        out = {}
        for name, slot, sign in self.joint_map:
            s = slots.SLOTS[slot]
            if s.finger == finger:
                out[s.rank] = (name, sign)
        return out

    def to_json_dict(self) -> dict:
        return {
            "joint_map": [[name, slot, sign] for name, slot, sign in self.joint_map],
            "palm_origin": {"xyz": list(self.palm_xyz), "rpy": list(self.palm_rpy)},
            "handedness": self.handedness,
            "fingertip_links": {slots.FINGERS[f]: link
                                for f, link in sorted(self.fingertip_links.items())},
        }

    @staticmethod
    def from_json_dict(data: dict) -> "HandAnnotation":
        finger_index = {name: i for i, name in enumerate(slots.FINGERS)}
        tips = {finger_index[k]: v
                for k, v in data.get("fingertip_links", {}).items()}
        palm = data.get("palm_origin", {})
        return HandAnnotation(
            joint_map=tuple((str(n), int(s), int(g)) for n, s, g in data["joint_map"]),
            palm_xyz=tuple(palm.get("xyz", (0.0, 0.0, 0.0))),
            palm_rpy=tuple(palm.get("rpy", (0.0, 0.0, 0.0))),
            handedness=data.get("handedness", RIGHT),
            fingertip_links=tips,
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2) + "\n")

    @staticmethod
    def load(path) -> "HandAnnotation":
        return HandAnnotation.from_json_dict(json.loads(Path(path).read_text()))


def validate_annotation(model: UrdfModel, a: HandAnnotation) -> None:
    seen = set()
    for name, slot, sign in a.joint_map:
        if not 0 <= slot < slots.N_SLOTS:
            raise InvalidParams(f"slot {slot} out of range for joint {name!r}")
        if slot in seen:
            raise InvalidParams(f"slot {slot} mapped more than once")
        seen.add(slot)
        if sign not in (-1, 1):
            raise InvalidParams(f"sign for joint {name!r} must be +-1, got {sign}")
        if not model.has_joint(name):
            raise MissingChain(f"annotated joint {name!r} not in model")
        if not model.joint(name).is_revolute():
            raise InvalidParams(f"annotated joint {name!r} is not revolute")
    for finger, link in a.fingertip_links.items():
        model.link(link)  # raises UnknownLink


def auto_annotation(p: CanonicalHandParams) -> HandAnnotation:
    """Annotation for a URDF generated from p (deterministic naming scheme)."""
    from .params import active_mask

    mask = active_mask(p)
    joint_map = tuple((slots.slot_name(i), i, 1)
                      for i in range(slots.N_SLOTS) if mask[i])
    tips = {}
    for finger in range(slots.N_FINGERS):
        if any(mask[i] for i in slots.finger_slots(finger)):
            tips[finger] = f"{slots.FINGERS[finger]}_tip"
    return HandAnnotation(joint_map, handedness=p.handedness,
                          fingertip_links=tips)


# -- palm detection -------------------------------------------------------------------

def find_palm_link(model: UrdfModel) -> str:
    """The unique link parenting >= 2 revolute joints.

    Candidacy is decided on the fixed-collapsed tree (finger chains may hang
    off fixed mounting brackets); within the winning rigid component the link
    that directly parents the most revolute joints is returned, so the palm
    plate wins over wrist or bracket links.
    """
    rep: dict[str, str] = {}

    def representative(link: str) -> str:
        if link in rep:
            return rep[link]
        chain = []
        cur = link
        while True:
            parent = model.parent_joint(cur)
            if parent is None or parent.kind != "fixed":
                break
            chain.append(cur)
            cur = parent.parent
        for l in chain:
            rep[l] = cur
        rep[link] = cur
        return cur

    comp_counts: dict[str, int] = {}
    direct_counts: dict[str, int] = {}
    for joint in model.revolute_joints():
        r = representative(joint.parent)
        comp_counts[r] = comp_counts.get(r, 0) + 1
        direct_counts[joint.parent] = direct_counts.get(joint.parent, 0) + 1
    candidates = sorted(name for name, n in comp_counts.items() if n >= 2)
    if not candidates:
        raise NoPalmFound("no link parents two or more revolute joints")
    if len(candidates) > 1:
        raise AmbiguousPalm(", ".join(candidates))
    component = candidates[0]
    members = [(n, link) for link, n in direct_counts.items()
               if representative(link) == component]
    best = max(n for n, _link in members)
    return sorted(link for n, link in members if n == best)[0]


# -- geometry estimators ----------------------------------------------------------------

def estimate_palm_radius(model: UrdfModel, palm_link: str,
                         palm_origin: Transform,
                         poses=None) -> float:
    """Mean of the palm-plane (y, z) AABB extents over two."""
    box = link_aabb(model, palm_link)  # EmptyGeometry when bare
    poses = poses or fk_urdf(model)
    in_palm = box.transformed(palm_origin.inverse() @ poses[palm_link])
    ext = in_palm.extents()
    return float(ext[1] + ext[2]) / 4.0


def finger_chain_links(model: UrdfModel, a: HandAnnotation) -> list[list[str]]:
    """Per-finger link lists: the tree-first mapped joint's child + descendants."""
    chains = []
    for finger in range(slots.N_FINGERS):
        ranks = a.finger_ranks(finger)
        if not ranks:
            chains.append([])
            continue
        base_joint = model.joint(ranks[_tree_first_rank(model, ranks)][0])
        chains.append([base_joint.child] + model.descendants(base_joint.child))
    return chains


def estimate_finger_radius(model: UrdfModel, chains) -> float:
    """Mean over geometry-bearing finger links of (min AABB extent) / 2."""
    halves = []
    for chain in chains:
        for link in chain:
            if not model.link(link).geoms:
                continue
            halves.append(float(link_aabb(model, link).extents().min()) / 2.0)
    if not halves:
        raise EmptyGeometry("no finger link carries geometry")
    return float(np.mean(halves))


# -- chain measurements -------------------------------------------------------------------

# rank groups whose joints share an origin in the canonical template; the
# little finger's extra joint (rank 1) is measured separately
_RANK_GROUPS = {
    slots.THUMB: ((1, 2), (3, 4), (5,)),
    slots.INDEX: ((1, 2), (3,), (4,)),
    slots.MIDDLE: ((1, 2), (3,), (4,)),
    slots.RING: ((1, 2), (3,), (4,)),
    slots.LITTLE: ((2, 3), (4,), (5,)),
}


def _joint_child_pose(model, poses, name) -> Transform:
    return poses[model.joint(name).child]


def _joint_depth(model: UrdfModel, name: str) -> int:
    """Number of joints between the root link and this joint's child."""
    depth = 0
    link = model.joint(name).parent
    while True:
        parent = model.parent_joint(link)
        if parent is None:
            return depth
        depth += 1
        link = parent.parent


def _tree_first_rank(model: UrdfModel, ranks: dict) -> int:
    """The mapped rank whose joint sits most proximal in the kinematic tree.

    Rank order usually equals tree order, but hands that swap the proximal
    joint pair (flexion before abduction) put the finger's base joint at a
    higher canonical rank; the base joint is a tree notion, not a rank one.
    """
    return min(ranks, key=lambda r: (_joint_depth(model, ranks[r][0]), r))


def _chain_points(model, poses, a, finger):
    """Positions of the three rank groups (None when unmapped) plus the tip."""
    ranks = a.finger_ranks(finger)
    points = []
    for group in _RANK_GROUPS[finger]:
        mapped = [r for r in group if r in ranks]
        if mapped:
            pose = _joint_child_pose(model, poses, ranks[max(mapped)][0])
            points.append(pose.translation)
        else:
            points.append(None)
    tip = None
    if finger in a.fingertip_links:
        tip = poses[a.fingertip_links[finger]].translation
    return points, tip


def _segment_lengths(points, tip):
    """Per-link contributions (L1, L2, L3), None where unobservable."""
    out = [None, None, None]
    present = [(i, p) for i, p in enumerate(points) if p is not None]
    for (i, p), (_j, q) in zip(present, present[1:]):
        out[i] = float(np.linalg.norm(q - p))
    if tip is not None and present:
        last = present[-1][0]
        out[last] = float(np.linalg.norm(tip - present[-1][1]))
    return out


def extract_finger_lengths(model: UrdfModel, a: HandAnnotation,
                           poses=None) -> np.ndarray:
    """Six lengths: thumb L1..L3 then non-thumb L1..L3 (averaged across fingers).

    Joint-to-joint distances along each chain; the distal length falls back to
    the mean of the two proximal ones when no fingertip frame marks it.
    """
    if not a.joint_map:
        raise MissingChain("annotation maps no joints")
    poses = poses or fk_urdf(model)

    def resolve(contribs):
        l1 = float(np.mean(contribs[0])) if contribs[0] else 0.0
        l2 = float(np.mean(contribs[1])) if contribs[1] else 0.0
        l3 = float(np.mean(contribs[2])) if contribs[2] else (l1 + l2) / 2.0
        return l1, l2, l3

    thumb_contrib = [[], [], []]
    shared_contrib = [[], [], []]
    for finger in range(slots.N_FINGERS):
        if not a.finger_ranks(finger):
            continue
        points, tip = _chain_points(model, poses, a, finger)
        segs = _segment_lengths(points, tip)
        target = thumb_contrib if finger == slots.THUMB else shared_contrib
        for i, s in enumerate(segs):
            if s is not None:
                target[i].append(s)

    lt = resolve(thumb_contrib) if any(thumb_contrib) else (0.0, 0.0, 0.0)
    ln = resolve(shared_contrib) if any(shared_contrib) else (0.0, 0.0, 0.0)
    return np.array([*lt, *ln])


def extract_finger_bases(model: UrdfModel, a: HandAnnotation,
                         poses=None) -> np.ndarray:
    """Knuckle translations in the palm frame; absent fingers give zeros."""
    poses = poses or fk_urdf(model)
    palm_inv = a.palm_origin().inverse()
    out = np.zeros((5, 3))
    for finger in range(slots.N_FINGERS):
        ranks = a.finger_ranks(finger)
        if not ranks:
            continue
        usable = {r: j for r, j in ranks.items()
                  if not (finger == slots.LITTLE and r == 1)}
        base_rank = _tree_first_rank(model, usable or ranks)
        pose = _joint_child_pose(model, poses, ranks[base_rank][0])
        out[finger] = (palm_inv @ pose).translation
    return out


def _thumb_tip_position(model, poses, a):
    ranks = a.finger_ranks(slots.THUMB)
    if slots.THUMB in a.fingertip_links:
        return poses[a.fingertip_links[slots.THUMB]].translation
    deepest = max(ranks, key=lambda r: (_joint_depth(model, ranks[r][0]), r))
    return _joint_child_pose(model, poses, ranks[deepest][0]).translation


def extract_thumb_frame(model: UrdfModel, a: HandAnnotation,
                        poses=None) -> tuple[np.ndarray, np.ndarray]:
    """Canonical thumb frame: rpy in the palm frame plus the rotation itself.

    Local +z follows the base->tip direction, local +y the base joint axis
    projected off it.
    """
    ranks = a.finger_ranks(slots.THUMB)
    if len(ranks) < 2:
        raise MissingChain("thumb chain needs at least two mapped joints")
    poses = poses or fk_urdf(model)
    base_joint = model.joint(ranks[_tree_first_rank(model, ranks)][0])
    base_pose = poses[base_joint.child]
    tip = _thumb_tip_position(model, poses, a)
    direction = tip - base_pose.translation
    if np.linalg.norm(direction) < 1e-9:
        raise DegenerateFrame("thumb tip coincides with its base")
    z = normalized(direction)
    axis_world = base_pose.rotation @ np.asarray(base_joint.axis)
    proj = axis_world - (axis_world @ z) * z
    if np.linalg.norm(proj) < _PARALLEL_TOL:
        raise DegenerateFrame("thumb base axis is parallel to the chain")
    y = normalized(proj)
    x = np.cross(y, z)
    rot_world = np.column_stack([x, y, z])
    palm = a.palm_origin()
    rot_palm = palm.rotation.T @ rot_world
    return np.array(matrix_to_rpy(rot_palm)), rot_palm


def extract_thumb_axes(model: UrdfModel, a: HandAnnotation,
                       thumb_rot_palm: np.ndarray, poses=None) -> np.ndarray:
    """Original rank 1-2 axes re-expressed in the canonical thumb frame."""
    ranks = a.finger_ranks(slots.THUMB)
    if 1 not in ranks and 2 not in ranks:
        raise MissingChain("thumb ranks 1-2 are unmapped")
    poses = poses or fk_urdf(model)
    palm = a.palm_origin()
    thumb_rot_world = palm.rotation @ thumb_rot_palm
    axes = np.tile(np.asarray(DEFAULT_THUMB_AXIS, dtype=float), (2, 1))
    for k, rank in enumerate((1, 2)):
        if rank not in ranks:
            continue
        joint = model.joint(ranks[rank][0])
        rel = snap_rotation(thumb_rot_world.T @ poses[joint.child].rotation)
        axes[k] = rel @ np.asarray(joint.axis)
    return axes


def extract_little_extra_origin(model: UrdfModel, a: HandAnnotation,
                                poses=None) -> np.ndarray:
    """Reordered extra-joint frame (xyz + rpy) in the palm frame, else zeros."""
    ranks = a.finger_ranks(slots.LITTLE)
    if 1 not in ranks:
        return np.zeros(6)
    poses = poses or fk_urdf(model)
    palm = a.palm_origin()
    joint = model.joint(ranks[1][0])
    pose_palm = palm.inverse() @ poses[joint.child]
    axis_palm = pose_palm.rotation @ np.asarray(joint.axis)
    y = normalized(axis_palm)
    palm_up = np.array([1.0, 0.0, 0.0])
    proj = palm_up - (palm_up @ y) * y
    if np.linalg.norm(proj) < _PARALLEL_TOL:
        raise DegenerateFrame("little extra axis is parallel to the palm normal")
    x = normalized(proj)
    z = np.cross(x, y)
    rot = np.column_stack([x, y, z])
    return np.concatenate([pose_palm.translation, matrix_to_rpy(rot)])


def extract_joint_limits(model: UrdfModel, a: HandAnnotation):
    """Mapped slots copy (lower, upper); sign -1 swaps and negates; else (0, 0)."""
    lowers = np.zeros(slots.N_SLOTS)
    uppers = np.zeros(slots.N_SLOTS)
    for name, slot, sign in a.joint_map:
        joint = model.joint(name)
        lo = joint.lower if joint.lower is not None else 0.0
        up = joint.upper if joint.upper is not None else 0.0
        if sign == -1:
            lo, up = -up, -lo
        lowers[slot] = lo
        uppers[slot] = up
    return lowers, uppers


def extract_all(model: UrdfModel, a: HandAnnotation) -> CanonicalHandParams:
    """Run the whole extraction; the result passes validate_params."""
    validate_annotation(model, a)
    poses = fk_urdf(model)
    palm = a.palm_origin()

    try:
        palm_link = find_palm_link(model)
    except NoPalmFound:
        palm_link = model.root_link  # single-chain degenerate hands

    palm_radius = estimate_palm_radius(model, palm_link, palm, poses)
    finger_radius = estimate_finger_radius(model, finger_chain_links(model, a))
    lengths = extract_finger_lengths(model, a, poses)
    bases = extract_finger_bases(model, a, poses)
    lowers, uppers = extract_joint_limits(model, a)

    thumb_ranks = a.finger_ranks(slots.THUMB)
    if len(thumb_ranks) >= 2:
        thumb_rpy, thumb_rot = extract_thumb_frame(model, a, poses)
    else:
        thumb_rpy, thumb_rot = np.zeros(3), np.eye(3)
    if 1 in thumb_ranks or 2 in thumb_ranks:
        thumb_axes = extract_thumb_axes(model, a, thumb_rot, poses)
    else:
        thumb_axes = np.tile(np.asarray(DEFAULT_THUMB_AXIS), (2, 1))

    extra = extract_little_extra_origin(model, a, poses)

    params = CanonicalHandParams(
        palm_radius=palm_radius,
        finger_radius=finger_radius,
        finger_lengths=lengths,
        finger_xyz=bases,
        little_extra_origin=extra,
        thumb_rpy=thumb_rpy,
        thumb_axes=thumb_axes,
        joint_lowers=lowers,
        joint_uppers=uppers,
        handedness=a.handedness,
    )
    require_valid(params)
    return params

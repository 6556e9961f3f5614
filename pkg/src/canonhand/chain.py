"""Finger chain resolution shared by canonical and extended generation.

A finger is a list of joint nodes, each carrying an offset from the previous
node's frame (the first node hangs off the palm). Nodes closer than COLOC_EPS
form a co-location cluster; the capsule between two positions is emitted only
when the cluster at its proximal end contains an active joint, which is what
removes the links of deactivated joints while keeping the frames of everything
that is still active.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import slots
from .geometry import Transform, matrix_to_rpy, normalized, rpy_to_matrix
from .params import CanonicalHandParams, ExtendedHandParams

COLOC_EPS = 1e-12

_X = np.array([1.0, 0.0, 0.0])
_Y = np.array([0.0, 1.0, 0.0])


@dataclass(frozen=True)
class Node:
    slot: int
    xyz: np.ndarray
    rpy: np.ndarray
    axis: np.ndarray
    geom_before: bool = True  # may the segment into this node carry a capsule


@dataclass(frozen=True)
class FingerChain:
    finger: int
    nodes: tuple
    tip_xyz: np.ndarray
    radius: float


@dataclass(frozen=True)
class ResolvedHand:
    palm_radius: float
    palm_thickness: float
    fingers: tuple


def _node(slot, xyz, rpy, axis, geom_before=True) -> Node:
    return Node(slot, np.asarray(xyz, dtype=float), np.asarray(rpy, dtype=float),
                np.asarray(axis, dtype=float), geom_before)


_Z3 = (0.0, 0.0, 0.0)


def resolve_canonical(p: CanonicalHandParams) -> ResolvedHand:
    from .params import PALM_THICKNESS_RATIO

    lt = p.finger_lengths[0:3]
    ln = p.finger_lengths[3:6]
    fingers = []

    s = slots.FINGER_SLOT_START[slots.THUMB]
    fingers.append(FingerChain(slots.THUMB, (
        _node(s, p.finger_xyz[slots.THUMB], p.thumb_rpy, p.thumb_axes[0], False),
        _node(s + 1, _Z3, _Z3, p.thumb_axes[1]),
        _node(s + 2, (0.0, 0.0, lt[0]), _Z3, _X),
        _node(s + 3, _Z3, _Z3, _Y),
        _node(s + 4, (0.0, 0.0, lt[1]), _Z3, _Y),
    ), np.array([0.0, 0.0, lt[2]]), p.finger_radius))

    for finger in (slots.INDEX, slots.MIDDLE, slots.RING):
        s = slots.FINGER_SLOT_START[finger]
        fingers.append(FingerChain(finger, (
            _node(s, p.finger_xyz[finger], _Z3, _X, False),
            _node(s + 1, _Z3, _Z3, _Y),
            _node(s + 2, (0.0, 0.0, ln[0]), _Z3, _Y),
            _node(s + 3, (0.0, 0.0, ln[1]), _Z3, _Y),
        ), np.array([0.0, 0.0, ln[2]]), p.finger_radius))

    le_xyz = p.little_extra_origin[0:3]
    le_rpy = p.little_extra_origin[3:6]
    rel = rpy_to_matrix(le_rpy).T @ (p.finger_xyz[slots.LITTLE] - le_xyz)
    s = slots.FINGER_SLOT_START[slots.LITTLE]
    fingers.append(FingerChain(slots.LITTLE, (
        _node(s, le_xyz, le_rpy, _Y, False),
        # metacarpal connector: kinematic only, never a capsule
        _node(s + 1, rel, _Z3, _X, False),
        _node(s + 2, _Z3, _Z3, _Y),
        _node(s + 3, (0.0, 0.0, ln[0]), _Z3, _Y),
        _node(s + 4, (0.0, 0.0, ln[1]), _Z3, _Y),
    ), np.array([0.0, 0.0, ln[2]]), p.finger_radius))

    return ResolvedHand(p.palm_radius, PALM_THICKNESS_RATIO * p.finger_radius,
                        tuple(fingers))


def resolve_extended(e: ExtendedHandParams) -> ResolvedHand:
    from .params import PALM_THICKNESS_RATIO

    o = e.joint_origins
    a = e.joint_axes
    fingers = []

    def consumed(*ks):
        return sum(float(np.linalg.norm(o[k, 0:3])) for k in ks)

    lt = e.finger_lengths[slots.THUMB]
    s = slots.FINGER_SLOT_START[slots.THUMB]
    z4 = max(lt[0] - consumed(1, 2), 0.0)
    fingers.append(FingerChain(slots.THUMB, (
        _node(s, o[0, 0:3], o[0, 3:6], a[0], False),
        _node(s + 1, o[1, 0:3], o[1, 3:6], a[1]),
        _node(s + 2, o[2, 0:3], o[2, 3:6], a[2]),
        _node(s + 3, (0.0, 0.0, z4), _Z3, _Y),
        _node(s + 4, (0.0, 0.0, lt[1]), _Z3, _Y),
    ), np.array([0.0, 0.0, lt[2]]), e.finger_radii[slots.THUMB]))

    for finger, k0 in ((slots.INDEX, 3), (slots.MIDDLE, 5), (slots.RING, 7)):
        lf = e.finger_lengths[finger]
        s = slots.FINGER_SLOT_START[finger]
        z3 = max(lf[0] - consumed(k0 + 1), 0.0)
        fingers.append(FingerChain(finger, (
            _node(s, o[k0, 0:3], o[k0, 3:6], a[k0], False),
            _node(s + 1, o[k0 + 1, 0:3], o[k0 + 1, 3:6], a[k0 + 1]),
            _node(s + 2, (0.0, 0.0, z3), _Z3, _Y),
            _node(s + 3, (0.0, 0.0, lf[1]), _Z3, _Y),
        ), np.array([0.0, 0.0, lf[2]]), e.finger_radii[finger]))

    lf = e.finger_lengths[slots.LITTLE]
    s = slots.FINGER_SLOT_START[slots.LITTLE]
    z4 = max(lf[0] - consumed(11), 0.0)
    fingers.append(FingerChain(slots.LITTLE, (
        _node(s, o[9, 0:3], o[9, 3:6], a[9], False),
        _node(s + 1, o[10, 0:3], o[10, 3:6], a[10], False),
        _node(s + 2, o[11, 0:3], o[11, 3:6], a[11]),
        _node(s + 3, (0.0, 0.0, z4), _Z3, _Y),
        _node(s + 4, (0.0, 0.0, lf[1]), _Z3, _Y),
    ), np.array([0.0, 0.0, lf[2]]), e.finger_radii[slots.LITTLE]))

    return ResolvedHand(e.palm_radius,
                        PALM_THICKNESS_RATIO * float(np.mean(e.finger_radii)),
                        tuple(fingers))


# -- layout: chains -> URDF element specs ------------------------------------------

@dataclass
class GeomSpec:
    kind: str
    xyz: tuple
    rpy: tuple
    radius: float | None = None
    length: float | None = None


@dataclass
class InertialSpec:
    xyz: tuple
    rpy: tuple
    mass: float
    ixx: float
    iyy: float
    izz: float


@dataclass
class LinkSpec:
    name: str
    geoms: list = field(default_factory=list)
    inertial: InertialSpec | None = None


@dataclass
class JointSpec:
    name: str
    kind: str
    parent: str
    child: str
    xyz: tuple
    rpy: tuple
    axis: tuple | None = None
    lower: float | None = None
    upper: float | None = None
    effort: float | None = None
    velocity: float | None = None


DENSITY = 1000.0  # kg/m^3, uniform capsule/cylinder infill
TINY_MASS = 1e-3
TINY_INERTIA = 1e-7
DEFAULT_EFFORT = 1.0
DEFAULT_VELOCITY = 1.0


def capsule_inertial(radius: float, length: float) -> InertialSpec:
    """Uniform-density capsule inertia about its own center, axis = local z."""
    r, l = float(radius), float(length)
    m_cyl = DENSITY * np.pi * r * r * l
    m_sph = DENSITY * (4.0 / 3.0) * np.pi * r ** 3
    mass = m_cyl + m_sph
    izz = m_cyl * r * r / 2.0 + m_sph * 0.4 * r * r
    ixx = (m_cyl * (l * l / 12.0 + r * r / 4.0)
           + m_sph * (0.4 * r * r + l * l / 4.0 + 3.0 * l * r / 8.0))
    return InertialSpec((0.0, 0.0, l / 2.0), (0.0, 0.0, 0.0), mass, ixx, ixx, izz)


def tiny_inertial() -> InertialSpec:
    return InertialSpec((0.0, 0.0, 0.0), (0.0, 0.0, 0.0), TINY_MASS,
                        TINY_INERTIA, TINY_INERTIA, TINY_INERTIA)


def _capsule_between(p0: np.ndarray, p1: np.ndarray, radius: float,
                     capsule_tag: bool) -> tuple[list[GeomSpec], InertialSpec]:
    """Capsule between two points in the link frame, plus its inertial."""
    d = p1 - p0
    length = float(np.linalg.norm(d))
    center = tuple((p0 + p1) / 2.0)
    if length < COLOC_EPS:
        geoms = [GeomSpec("sphere", center, (0.0, 0.0, 0.0), radius=radius)]
        rpy = (0.0, 0.0, 0.0)
    else:
        direction = d / length
        if direction[2] > 1.0 - 1e-12:
            rpy = (0.0, 0.0, 0.0)
        elif direction[2] < -1.0 + 1e-12:
            rpy = (float(np.pi), 0.0, 0.0)
        else:
            axis = normalized(np.cross([0.0, 0.0, 1.0], direction))
            angle = float(np.arccos(np.clip(direction[2], -1.0, 1.0)))
            c, s = np.cos(angle), np.sin(angle)
            x, y, z = axis
            cross = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
            rot = c * np.eye(3) + s * cross + (1.0 - c) * np.outer(axis, axis)
            rpy = matrix_to_rpy(rot)
        if capsule_tag:
            geoms = [GeomSpec("capsule", center, rpy, radius=radius, length=length)]
        else:
            geoms = [
                GeomSpec("cylinder", center, rpy, radius=radius, length=length),
                GeomSpec("sphere", tuple(p0), (0.0, 0.0, 0.0), radius=radius),
                GeomSpec("sphere", tuple(p1), (0.0, 0.0, 0.0), radius=radius),
            ]
    inertial = capsule_inertial(radius, length)
    inertial.xyz = center
    inertial.rpy = rpy
    return geoms, inertial


def _palm_specs(hand: ResolvedHand) -> LinkSpec:
    r, t = hand.palm_radius, hand.palm_thickness
    mass = DENSITY * np.pi * r * r * t
    ixx = mass * (3.0 * r * r + t * t) / 12.0
    izz = mass * r * r / 2.0
    half_pi = float(np.pi / 2.0)
    # cylinder axis is local z; rotate it onto the palm normal (+x)
    return LinkSpec("palm",
                    [GeomSpec("cylinder", (0.0, 0.0, 0.0), (0.0, half_pi, 0.0),
                              radius=r, length=t)],
                    InertialSpec((0.0, 0.0, 0.0), (0.0, half_pi, 0.0),
                                 mass, ixx, ixx, izz))


def layout_hand(hand: ResolvedHand, lowers: np.ndarray, uppers: np.ndarray,
                capsule_tag: bool = False) -> tuple[list[LinkSpec], list[JointSpec]]:
    """Turn resolved chains + joint limits into URDF element specs.

    A slot is emitted as a revolute joint iff its lower limit is strictly
    below its upper limit; skipped slots fold their frame offsets into the
    next emitted joint's origin.
    """
    mask = np.asarray(lowers) < np.asarray(uppers)
    links = [_palm_specs(hand)]
    joints: list[JointSpec] = []

    for chain in hand.fingers:
        if not any(mask[n.slot] for n in chain.nodes):
            continue
        fname = slots.FINGERS[chain.finger]
        n_nodes = len(chain.nodes)

        # absolute pose of every node in the palm frame; position n_nodes is
        # the full-template fingertip
        abs_tf = []
        cur = Transform.identity()
        for n in chain.nodes:
            cur = cur @ Transform.from_xyz_rpy(n.xyz, n.rpy)
            abs_tf.append(cur)
        abs_tf.append(abs_tf[-1] @ Transform.from_xyz_rpy(chain.tip_xyz))

        # co-location clusters
        cluster = [0]
        for n in chain.nodes[1:]:
            same = float(np.linalg.norm(n.xyz)) < COLOC_EPS
            cluster.append(cluster[-1] if same else cluster[-1] + 1)

        link_names = {n.slot: f"{fname}_link{slots.SLOTS[n.slot].rank}"
                      for n in chain.nodes}

        # joints: fold offsets of inactive nodes into the next active origin
        link_specs = {}
        prev_link = "palm"
        pending = Transform.identity()
        last_active = None
        for i, n in enumerate(chain.nodes):
            pending = pending @ Transform.from_xyz_rpy(n.xyz, n.rpy)
            if not mask[n.slot]:
                continue
            child = link_names[n.slot]
            joints.append(JointSpec(
                slots.slot_name(n.slot), "revolute", prev_link, child,
                tuple(pending.translation), pending.rpy(), tuple(n.axis),
                lower=float(lowers[n.slot]), upper=float(uppers[n.slot]),
                effort=DEFAULT_EFFORT, velocity=DEFAULT_VELOCITY))
            link_specs[n.slot] = LinkSpec(child, [], tiny_inertial())
            prev_link = child
            pending = Transform.identity()
            last_active = i

        # capsules between distinct positions whose proximal cluster is live
        furthest = last_active  # chain position of the fingertip
        for end in range(1, n_nodes + 1):
            off = chain.tip_xyz if end == n_nodes else chain.nodes[end].xyz
            geom_ok = True if end == n_nodes else chain.nodes[end].geom_before
            if not geom_ok or float(np.linalg.norm(off)) < COLOC_EPS:
                continue
            cl = cluster[end - 1]
            actives = [i for i in range(n_nodes)
                       if cluster[i] == cl and mask[chain.nodes[i].slot]]
            if not actives:
                continue
            attach = actives[-1]
            spec = link_specs[chain.nodes[attach].slot]
            inv = abs_tf[attach].inverse()
            geoms, inertial = _capsule_between(
                (inv @ abs_tf[end - 1]).translation,
                (inv @ abs_tf[end]).translation,
                chain.radius, capsule_tag)
            spec.geoms.extend(geoms)
            spec.inertial = inertial
            furthest = max(furthest, end)

        links.extend(link_specs[n.slot] for n in chain.nodes if mask[n.slot])

        # fingertip frame at the far end of the last emitted capsule (or the
        # deepest active joint when nothing distal of it carries geometry)
        anchor_slot = chain.nodes[last_active].slot
        tip_rel = (abs_tf[last_active].inverse() @ abs_tf[furthest]).translation
        tip_name = f"{fname}_tip"
        links.append(LinkSpec(tip_name, [], tiny_inertial()))
        joints.append(JointSpec(f"{fname}_tip_joint", "fixed",
                                link_names[anchor_slot], tip_name,
                                tuple(tip_rel), (0.0, 0.0, 0.0)))

    return links, joints

"""Forward kinematics over URDF trees and canonical parameters.

fk_canonical is a direct analytic composition written against the canonical
conventions; fk_urdf is a generic tree walk. The two are independent
encodings of the same hand and must agree to 1e-9 through the generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import slots
from .actionmap import to_canonical
from .errors import UnknownJointName
from .geometry import Transform, rotation_about, rpy_to_matrix
from .params import CanonicalHandParams, active_mask, require_valid
from .urdf import UrdfModel

_X = np.array([1.0, 0.0, 0.0])
_Y = np.array([0.0, 1.0, 0.0])
_EPS = 1e-12


def fk_urdf(model: UrdfModel, joint_values=None) -> dict[str, Transform]:
    """World pose per link; unassigned joints default to zero."""
    values = dict(joint_values or {})
    for name in values:
        if not model.has_joint(name):
            raise UnknownJointName(name)
    poses = {model.root_link: Transform.identity()}
    stack = [model.root_link]
    while stack:
        parent = stack.pop()
        for joint in model.child_joints(parent):
            tf = poses[parent] @ joint.origin()
            q = values.get(joint.name, 0.0)
            if joint.is_revolute() and q != 0.0:
                tf = tf @ Transform(rotation_about(joint.axis, q), np.zeros(3))
            elif joint.kind == "prismatic" and q != 0.0:
                tf = tf @ Transform(np.eye(3), q * np.asarray(joint.axis))
            poses[joint.child] = tf
            stack.append(joint.child)
    return poses


@dataclass
class CanonicalFk:
    """Link poses in the palm frame plus one fingertip point per finger."""

    link_poses: dict = field(default_factory=dict)
    fingertips: np.ndarray = field(default_factory=lambda: np.zeros((5, 3)))
    finger_present: np.ndarray = field(default_factory=lambda: np.zeros(5, dtype=bool))


def _walk_finger(fk: CanonicalFk, finger: int, entries, tip_len: float,
                 mask, values) -> None:
    """Compose one finger chain.

    entries: (slot, offset_xyz, offset_rpy, axis, geom_before) tuples; offsets
    are relative to the previous joint frame, the first to the palm.
    """
    fname = slots.FINGERS[finger]
    if not any(mask[e[0]] for e in entries):
        # absent finger: report the knuckle translation, flagged not present
        first = entries[0]
        fk.fingertips[finger] = np.asarray(first[1], dtype=float)
        if finger == slots.LITTLE and len(entries) > 1:
            rot = rpy_to_matrix(first[2])
            fk.fingertips[finger] = first[1] + rot @ np.asarray(entries[1][1])
        return

    rot = np.eye(3)
    pos = np.zeros(3)
    positions = []          # frame position after each entry
    last_active = None
    for i, (slot, dxyz, drpy, axis, _geom) in enumerate(entries):
        pos = pos + rot @ np.asarray(dxyz, dtype=float)
        rot = rot @ rpy_to_matrix(drpy)
        if mask[slot]:
            rot = rot @ rotation_about(axis, values[slot])
            rank = slots.SLOTS[slot].rank
            fk.link_poses[f"{fname}_link{rank}"] = Transform(rot, pos)
            last_active = i
        positions.append(pos)
    tip_template = pos + rot @ np.array([0.0, 0.0, tip_len])
    positions.append(tip_template)

    # co-location clusters over the template offsets
    cluster = [0]
    for (_s, dxyz, _r, _a, _g) in entries[1:]:
        same = float(np.linalg.norm(dxyz)) < _EPS
        cluster.append(cluster[-1] if same else cluster[-1] + 1)

    # fingertip = far end of the last segment whose proximal cluster is live
    furthest = last_active
    for end in range(1, len(entries) + 1):
        if end == len(entries):
            off, geom_ok = (0.0, 0.0, tip_len), True
        else:
            off, geom_ok = entries[end][1], entries[end][4]
        if not geom_ok or float(np.linalg.norm(off)) < _EPS:
            continue
        cl = cluster[end - 1]
        if any(mask[entries[i][0]] and cluster[i] == cl for i in range(len(entries))):
            furthest = max(furthest, end)

    fk.fingertips[finger] = positions[furthest]
    fk.finger_present[finger] = True
    fk.link_poses[f"{fname}_tip"] = Transform(
        fk.link_poses[f"{fname}_link{slots.SLOTS[entries[last_active][0]].rank}"].rotation,
        positions[furthest])


def fk_canonical(p: CanonicalHandParams, c) -> CanonicalFk:
    """Analytic FK at a canonical joint vector (inactive slots forced to 0)."""
    require_valid(p)
    mask = active_mask(p)
    values = np.where(mask, np.asarray(c, dtype=float), 0.0)
    zero3 = (0.0, 0.0, 0.0)

    fk = CanonicalFk()
    fk.link_poses["palm"] = Transform.identity()

    lt = p.finger_lengths[0:3]
    ln = p.finger_lengths[3:6]

    s = slots.FINGER_SLOT_START[slots.THUMB]
    _walk_finger(fk, slots.THUMB, (
        (s, p.finger_xyz[slots.THUMB], p.thumb_rpy, p.thumb_axes[0], False),
        (s + 1, zero3, zero3, p.thumb_axes[1], True),
        (s + 2, (0.0, 0.0, lt[0]), zero3, _X, True),
        (s + 3, zero3, zero3, _Y, True),
        (s + 4, (0.0, 0.0, lt[1]), zero3, _Y, True),
    ), lt[2], mask, values)

    for finger in (slots.INDEX, slots.MIDDLE, slots.RING):
        s = slots.FINGER_SLOT_START[finger]
        _walk_finger(fk, finger, (
            (s, p.finger_xyz[finger], zero3, _X, False),
            (s + 1, zero3, zero3, _Y, True),
            (s + 2, (0.0, 0.0, ln[0]), zero3, _Y, True),
            (s + 3, (0.0, 0.0, ln[1]), zero3, _Y, True),
        ), ln[2], mask, values)

    le_xyz = p.little_extra_origin[0:3]
    le_rpy = p.little_extra_origin[3:6]
    rel = rpy_to_matrix(le_rpy).T @ (p.finger_xyz[slots.LITTLE] - le_xyz)
    s = slots.FINGER_SLOT_START[slots.LITTLE]
    _walk_finger(fk, slots.LITTLE, (
        (s, le_xyz, le_rpy, _Y, False),
        (s + 1, rel, zero3, _X, False),
        (s + 2, zero3, zero3, _Y, True),
        (s + 3, (0.0, 0.0, ln[0]), zero3, _Y, True),
        (s + 4, (0.0, 0.0, ln[1]), zero3, _Y, True),
    ), ln[2], mask, values)

    return fk


# -- fidelity -----------------------------------------------------------------------

@dataclass
class FidelityReport:
    fingers: list
    per_config: list            # one dict finger->distance per config
    mean_distance: float
    max_distance: float
    n_configs: int

    def to_json_dict(self) -> dict:
        return {
            "fingers": self.fingers,
            "n_configs": self.n_configs,
            "mean_distance": self.mean_distance,
            "max_distance": self.max_distance,
            "per_config": self.per_config,
        }


def fidelity_report(model: UrdfModel, annotation, p: CanonicalHandParams,
                    configs) -> FidelityReport:
    """Per-fingertip distance between original and canonical FK, palm frame.

    Report only: the comparison has no pass/fail threshold.
    """
    palm = annotation.palm_origin()
    mask = active_mask(p)
    compared = []
    for finger in range(slots.N_FINGERS):
        present = any(mask[i] for i in slots.finger_slots(finger))
        if present and finger in annotation.fingertip_links:
            compared.append(finger)

    per_config = []
    distances = []
    for q in configs:
        qv = np.asarray(q, dtype=float)
        values = {name: float(qv[i])
                  for i, (name, _slot, _sign) in enumerate(annotation.joint_map)}
        orig = fk_urdf(model, values)
        canon = fk_canonical(p, to_canonical(qv, annotation))
        row = {}
        for finger in compared:
            tip_link = annotation.fingertip_links[finger]
            tip_orig = (palm.inverse() @ orig[tip_link]).translation
            d = float(np.linalg.norm(tip_orig - canon.fingertips[finger]))
            row[slots.FINGERS[finger]] = d
            distances.append(d)
        per_config.append(row)

    if distances:
        mean_d, max_d = float(np.mean(distances)), float(np.max(distances))
    else:
        mean_d = max_d = 0.0
    return FidelityReport([slots.FINGERS[f] for f in compared], per_config,
                          mean_d, max_d, len(configs))

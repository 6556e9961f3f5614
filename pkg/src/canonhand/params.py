"""Canonical (82-scalar) and extended (173-scalar) hand parameter sets.

Scalar layouts are fixed and total 82 / 173 excluding the handedness flag:

  canonical: palm_radius 1 | finger_radius 1 | finger_lengths 6
             | finger_xyz 15 | little_extra_origin 6 | thumb_rpy 3
             | thumb_axes 6 | joint_lowers 22 | joint_uppers 22
  extended:  palm_radius 1 | finger_radii 5 | finger_lengths 15
             | joint_origins 72 (12 x xyz+rpy) | joint_axes 36 (12 x xyz)
             | joint_lowers 22 | joint_uppers 22

finger_lengths (canonical) holds [thumb L1..L3, shared non-thumb L1..L3].
The 12 parameterized extended joints are thumb ranks 1-3, index/middle/ring
ranks 1-2 and little ranks 1-3, in that order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import slots
from .errors import InvalidParams
from .geometry import rpy_to_matrix

# Palm cylinder thickness = PALM_THICKNESS_RATIO * finger_radius.
PALM_THICKNESS_RATIO = 2.0

AXIS_NORM_TOL = 1e-9

RIGHT = "right"
LEFT = "left"

N_CANONICAL_SCALARS = 82
N_EXTENDED_SCALARS = 173

# (finger, rank) of the 12 extended parameterized joints.
EXTENDED_JOINTS = (
    (slots.THUMB, 1), (slots.THUMB, 2), (slots.THUMB, 3),
    (slots.INDEX, 1), (slots.INDEX, 2),
    (slots.MIDDLE, 1), (slots.MIDDLE, 2),
    (slots.RING, 1), (slots.RING, 2),
    (slots.LITTLE, 1), (slots.LITTLE, 2), (slots.LITTLE, 3),
)

DEFAULT_THUMB_AXIS = (0.0, 1.0, 0.0)


def _arr(values, shape) -> np.ndarray:
    out = np.array(values, dtype=float).reshape(shape)
    return out


@dataclass(frozen=True)
class CanonicalHandParams:
    palm_radius: float
    finger_radius: float
    finger_lengths: np.ndarray      # (6,)
    finger_xyz: np.ndarray          # (5, 3) knuckle translations, palm frame
    little_extra_origin: np.ndarray  # (6,) xyz + rpy, palm frame
    thumb_rpy: np.ndarray           # (3,)
    thumb_axes: np.ndarray          # (2, 3) thumb ranks 1-2, thumb frame
    joint_lowers: np.ndarray        # (22,)
    joint_uppers: np.ndarray        # (22,)
    handedness: str = RIGHT

    def __post_init__(self):
        object.__setattr__(self, "palm_radius", float(self.palm_radius))
        object.__setattr__(self, "finger_radius", float(self.finger_radius))
        object.__setattr__(self, "finger_lengths", _arr(self.finger_lengths, (6,)))
        object.__setattr__(self, "finger_xyz", _arr(self.finger_xyz, (5, 3)))
        object.__setattr__(self, "little_extra_origin", _arr(self.little_extra_origin, (6,)))
        object.__setattr__(self, "thumb_rpy", _arr(self.thumb_rpy, (3,)))
        object.__setattr__(self, "thumb_axes", _arr(self.thumb_axes, (2, 3)))
        object.__setattr__(self, "joint_lowers", _arr(self.joint_lowers, (22,)))
        object.__setattr__(self, "joint_uppers", _arr(self.joint_uppers, (22,)))

    def lengths_for(self, finger: int) -> np.ndarray:
        """Three link lengths for a finger (thumb has its own set)."""
        return self.finger_lengths[0:3] if finger == slots.THUMB else self.finger_lengths[3:6]

    def to_flat(self) -> np.ndarray:
        """The 82 scalars in layout order (handedness excluded)."""
        return np.concatenate([
            [self.palm_radius, self.finger_radius],
            self.finger_lengths,
            self.finger_xyz.ravel(),
            self.little_extra_origin,
            self.thumb_rpy,
            self.thumb_axes.ravel(),
            self.joint_lowers,
            self.joint_uppers,
        ])

    @staticmethod
    def from_flat(flat, handedness: str = RIGHT) -> "CanonicalHandParams":
        v = np.asarray(flat, dtype=float)
        if v.shape != (N_CANONICAL_SCALARS,):
            raise InvalidParams(f"expected {N_CANONICAL_SCALARS} scalars, got {v.shape}")
        return CanonicalHandParams(
            palm_radius=v[0], finger_radius=v[1],
            finger_lengths=v[2:8], finger_xyz=v[8:23].reshape(5, 3),
            little_extra_origin=v[23:29], thumb_rpy=v[29:32],
            thumb_axes=v[32:38].reshape(2, 3),
            joint_lowers=v[38:60], joint_uppers=v[60:82],
            handedness=handedness,
        )

    def to_json_dict(self) -> dict:
        return {
            "palm_radius": self.palm_radius,
            "finger_radius": self.finger_radius,
            "finger_lengths": self.finger_lengths.tolist(),
            "finger_xyz": self.finger_xyz.ravel().tolist(),
            "little_extra_origin": self.little_extra_origin.tolist(),
            "thumb_rpy": self.thumb_rpy.tolist(),
            "thumb_axes": self.thumb_axes.ravel().tolist(),
            "joint_lowers": self.joint_lowers.tolist(),
            "joint_uppers": self.joint_uppers.tolist(),
            "handedness": self.handedness,
        }

    @staticmethod
    def from_json_dict(data: dict) -> "CanonicalHandParams":
        try:
            return CanonicalHandParams(
                palm_radius=data["palm_radius"],
                finger_radius=data["finger_radius"],
                finger_lengths=data["finger_lengths"],
                finger_xyz=np.asarray(data["finger_xyz"], dtype=float).reshape(5, 3),
                little_extra_origin=data["little_extra_origin"],
                thumb_rpy=data["thumb_rpy"],
                thumb_axes=np.asarray(data["thumb_axes"], dtype=float).reshape(2, 3),
                joint_lowers=data["joint_lowers"],
                joint_uppers=data["joint_uppers"],
                handedness=data.get("handedness", RIGHT),
            )
        except (KeyError, ValueError) as exc:
            raise InvalidParams(f"bad parameter file: {exc}") from exc

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2) + "\n")

    @staticmethod
    def load(path) -> "CanonicalHandParams":
        return CanonicalHandParams.from_json_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class ExtendedHandParams:
    palm_radius: float
    finger_radii: np.ndarray    # (5,)
    finger_lengths: np.ndarray  # (5, 3)
    joint_origins: np.ndarray   # (12, 6) xyz + rpy, parent-relative
    joint_axes: np.ndarray      # (12, 3)
    joint_lowers: np.ndarray    # (22,)
    joint_uppers: np.ndarray    # (22,)
    handedness: str = RIGHT

    def __post_init__(self):
        object.__setattr__(self, "palm_radius", float(self.palm_radius))
        object.__setattr__(self, "finger_radii", _arr(self.finger_radii, (5,)))
        object.__setattr__(self, "finger_lengths", _arr(self.finger_lengths, (5, 3)))
        object.__setattr__(self, "joint_origins", _arr(self.joint_origins, (12, 6)))
        object.__setattr__(self, "joint_axes", _arr(self.joint_axes, (12, 3)))
        object.__setattr__(self, "joint_lowers", _arr(self.joint_lowers, (22,)))
        object.__setattr__(self, "joint_uppers", _arr(self.joint_uppers, (22,)))

    def to_flat(self) -> np.ndarray:
        """The 173 scalars in layout order (handedness excluded)."""
        return np.concatenate([
            [self.palm_radius],
            self.finger_radii,
            self.finger_lengths.ravel(),
            self.joint_origins.ravel(),
            self.joint_axes.ravel(),
            self.joint_lowers,
            self.joint_uppers,
        ])

    def to_json_dict(self) -> dict:
        return {
            "palm_radius": self.palm_radius,
            "finger_radii": self.finger_radii.tolist(),
            "finger_lengths": self.finger_lengths.ravel().tolist(),
            "joint_origins": self.joint_origins.ravel().tolist(),
            "joint_axes": self.joint_axes.ravel().tolist(),
            "joint_lowers": self.joint_lowers.tolist(),
            "joint_uppers": self.joint_uppers.tolist(),
            "handedness": self.handedness,
        }

    @staticmethod
    def from_json_dict(data: dict) -> "ExtendedHandParams":
        try:
            return ExtendedHandParams(
                palm_radius=data["palm_radius"],
                finger_radii=data["finger_radii"],
                finger_lengths=np.asarray(data["finger_lengths"], dtype=float).reshape(5, 3),
                joint_origins=np.asarray(data["joint_origins"], dtype=float).reshape(12, 6),
                joint_axes=np.asarray(data["joint_axes"], dtype=float).reshape(12, 3),
                joint_lowers=data["joint_lowers"],
                joint_uppers=data["joint_uppers"],
                handedness=data.get("handedness", RIGHT),
            )
        except (KeyError, ValueError) as exc:
            raise InvalidParams(f"bad extended parameter file: {exc}") from exc

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2) + "\n")

    @staticmethod
    def load(path) -> "ExtendedHandParams":
        return ExtendedHandParams.from_json_dict(json.loads(Path(path).read_text()))


# -- validation ----------------------------------------------------------------

def validate_params(p: CanonicalHandParams) -> list[str]:
    """Check every invariant; returns violation messages, empty when valid."""
    problems = []
    if p.to_flat().shape != (N_CANONICAL_SCALARS,):
        problems.append("scalar count is not 82")
    if not p.palm_radius > 0.0:
        problems.append("palm_radius must be positive")
    if not p.finger_radius > 0.0:
        problems.append("finger_radius must be positive")
    for i, l in enumerate(p.finger_lengths):
        if l < 0.0 or not np.isfinite(l):
            problems.append(f"finger_lengths[{i}] must be >= 0")
    for i in range(slots.N_SLOTS):
        if p.joint_lowers[i] > p.joint_uppers[i]:
            problems.append(f"limit ordering at slot {i}")
    for k in range(2):
        norm = float(np.linalg.norm(p.thumb_axes[k]))
        if abs(norm - 1.0) > AXIS_NORM_TOL:
            problems.append(f"thumb_axes[{k}] norm {norm:.12g} is not 1")
    if p.handedness not in (LEFT, RIGHT):
        problems.append(f"handedness {p.handedness!r} not 'left' or 'right'")
    for name in ("finger_xyz", "little_extra_origin", "thumb_rpy",
                 "joint_lowers", "joint_uppers"):
        if not np.all(np.isfinite(getattr(p, name))):
            problems.append(f"{name} contains non-finite values")
    return problems


def require_valid(p: CanonicalHandParams) -> None:
    problems = validate_params(p)
    if problems:
        raise InvalidParams("; ".join(problems))


def validate_extended(e: ExtendedHandParams) -> list[str]:
    problems = []
    if e.to_flat().shape != (N_EXTENDED_SCALARS,):
        problems.append("scalar count is not 173")
    if not e.palm_radius > 0.0:
        problems.append("palm_radius must be positive")
    for f in range(5):
        if not e.finger_radii[f] > 0.0:
            problems.append(f"finger_radii[{f}] must be positive")
    if np.any(e.finger_lengths < 0.0):
        problems.append("finger_lengths must be >= 0")
    for i in range(slots.N_SLOTS):
        if e.joint_lowers[i] > e.joint_uppers[i]:
            problems.append(f"limit ordering at slot {i}")
    mask = e.joint_lowers < e.joint_uppers
    for k, (finger, rank) in enumerate(EXTENDED_JOINTS):
        # axes of zeroed-out joints are exempt (variant fingers are all zero)
        if not mask[slots.slot_of(finger, rank)]:
            continue
        norm = float(np.linalg.norm(e.joint_axes[k]))
        if abs(norm - 1.0) > AXIS_NORM_TOL:
            problems.append(f"joint_axes[{k}] norm {norm:.12g} is not 1")
    if not np.all(np.isfinite(e.to_flat())):
        problems.append("parameters contain non-finite values")
    return problems


def require_valid_extended(e: ExtendedHandParams) -> None:
    problems = validate_extended(e)
    if problems:
        raise InvalidParams("; ".join(problems))


# -- active slots ----------------------------------------------------------------

def active_mask(p) -> np.ndarray:
    """Boolean mask over the 22 slots; active iff lower < upper (strict)."""
    return np.asarray(p.joint_lowers) < np.asarray(p.joint_uppers)


def active_dof(p) -> int:
    return int(active_mask(p).sum())


def finger_present(p, finger: int) -> bool:
    mask = active_mask(p)
    return bool(any(mask[i] for i in slots.finger_slots(finger)))


# -- handedness ------------------------------------------------------------------

def _mirror_rpy(rpy: np.ndarray) -> np.ndarray:
    """Reflection across the palm xz-plane: M R M = rpy(-roll, pitch, -yaw)."""
    return np.array([-rpy[0], rpy[1], -rpy[2]])


def mirror_handedness(p: CanonicalHandParams) -> CanonicalHandParams:
    """Exact involution producing the opposite-handed hand.

    Positions get their y component negated; frames are conjugated by
    diag(1,-1,1), which in rpy coordinates negates roll and yaw; thumb axes
    (expressed in the thumb frame) get their y component negated. Lengths,
    radii and limits are untouched.
    """
    xyz = p.finger_xyz.copy()
    xyz[:, 1] = -xyz[:, 1]
    axes = p.thumb_axes.copy()
    axes[:, 1] = -axes[:, 1]
    extra = p.little_extra_origin.copy()
    extra[1] = -extra[1]
    extra[3:6] = _mirror_rpy(extra[3:6])
    return replace(
        p,
        finger_xyz=xyz,
        thumb_axes=axes,
        little_extra_origin=extra,
        thumb_rpy=_mirror_rpy(p.thumb_rpy),
        handedness=LEFT if p.handedness == RIGHT else RIGHT,
    )


def little_extra_transform(p: CanonicalHandParams):
    """Rotation matrix + translation of the little extra frame, palm frame."""
    return rpy_to_matrix(p.little_extra_origin[3:6]), p.little_extra_origin[0:3]

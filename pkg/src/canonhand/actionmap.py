"""Bidirectional joint-vector conversion: original n-DoF <-> canonical 22-DoF.

The map is a pure permutation with per-joint signs; unmapped canonical slots
are dummies pinned to 0. Original vectors follow the annotation's joint_map
order (annotation files store joints in URDF declaration order).
"""

from __future__ import annotations

import numpy as np

from . import slots
from .errors import DimensionMismatch
from .params import CanonicalHandParams, active_mask


def to_canonical(q, annotation) -> np.ndarray:
    """Scatter an original joint vector into the 22-slot canonical vector."""
    vec = np.asarray(q, dtype=float)
    if vec.shape != (len(annotation.joint_map),):
        raise DimensionMismatch(
            f"got {vec.shape[0] if vec.ndim == 1 else vec.shape} values for "
            f"{len(annotation.joint_map)} mapped joints")
    out = np.zeros(slots.N_SLOTS)
    for i, (_name, slot, sign) in enumerate(annotation.joint_map):
        out[slot] = sign * vec[i]
    return out


def to_original(c, annotation) -> np.ndarray:
    """Gather mapped slots back into the original joint order."""
    vec = np.asarray(c, dtype=float)
    if vec.shape != (slots.N_SLOTS,):
        raise DimensionMismatch(f"canonical vector must have 22 values, got {vec.shape}")
    out = np.empty(len(annotation.joint_map))
    for i, (_name, slot, sign) in enumerate(annotation.joint_map):
        out[i] = sign * vec[slot]
    return out


def clamp_to_limits(c, p: CanonicalHandParams) -> np.ndarray:
    """Componentwise clamp into [lower, upper]; inactive slots forced to 0."""
    vec = np.asarray(c, dtype=float)
    if vec.shape != (slots.N_SLOTS,):
        raise DimensionMismatch(f"canonical vector must have 22 values, got {vec.shape}")
    clamped = np.clip(vec, p.joint_lowers, p.joint_uppers)
    return np.where(active_mask(p), clamped, 0.0)

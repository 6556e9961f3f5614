"""Generate -> parse -> extract comparison for canonical parameters."""

from __future__ import annotations

import numpy as np

from .extract import auto_annotation, extract_all
from .generate import generate_urdf
from .geometry import rpy_to_matrix
from .params import CanonicalHandParams
from .urdf import parse_urdf


def rotation_distance(rpy_a, rpy_b) -> float:
    """Frobenius distance between the two rotations (Euler-ambiguity safe)."""
    return float(np.linalg.norm(rpy_to_matrix(rpy_a) - rpy_to_matrix(rpy_b)))


def compare_roundtrip(p: CanonicalHandParams) -> dict:
    """Round-trip p through URDF text and report the recovery deviations."""
    model = parse_urdf(generate_urdf(p))
    recovered = extract_all(model, auto_annotation(p))

    continuous = {
        "palm_radius": abs(p.palm_radius - recovered.palm_radius),
        "finger_radius": abs(p.finger_radius - recovered.finger_radius),
        "finger_lengths": float(np.max(np.abs(p.finger_lengths - recovered.finger_lengths))),
        "finger_xyz": float(np.max(np.abs(p.finger_xyz - recovered.finger_xyz))),
        "little_extra_xyz": float(np.max(np.abs(
            p.little_extra_origin[:3] - recovered.little_extra_origin[:3]))),
    }
    rotations = {
        "thumb_rpy": rotation_distance(p.thumb_rpy, recovered.thumb_rpy),
        "little_extra_rpy": rotation_distance(p.little_extra_origin[3:],
                                              recovered.little_extra_origin[3:]),
    }
    return {
        "max_continuous": max(continuous.values()),
        "continuous": continuous,
        "max_rotation_frobenius": max(rotations.values()),
        "rotations": rotations,
        "limits_exact": bool(np.array_equal(p.joint_lowers, recovered.joint_lowers)
                             and np.array_equal(p.joint_uppers, recovered.joint_uppers)),
        "axes_exact": bool(np.array_equal(p.thumb_axes, recovered.thumb_axes)),
        "axes_max_abs": float(np.max(np.abs(p.thumb_axes - recovered.thumb_axes))),
        "recovered": recovered,
    }


def roundtrip_ok(report: dict, tol: float = 1e-6) -> bool:
    return (report["max_continuous"] < tol
            and report["max_rotation_frobenius"] < tol
            and report["limits_exact"]
            and report["axes_exact"])

"""Rigid transforms, rpy conversions and axis-aligned bounding boxes.

All rotations follow the URDF fixed-axis convention
R = Rz(yaw) @ Ry(pitch) @ Rx(roll).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ORTHONORMAL_TOL = 1e-9


def rpy_to_matrix(rpy) -> np.ndarray:
    """3x3 rotation from (roll, pitch, yaw), extrinsic XYZ."""
    r, p, y = (float(v) for v in rpy)
    cr, sr = np.cos(r), np.sin(r)
    cp, sp = np.cos(p), np.sin(p)
    cy, sy = np.cos(y), np.sin(y)
    return np.array([
        [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
        [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
        [-sp, cp * sr, cp * cr],
    ])


def matrix_to_rpy(rot: np.ndarray) -> tuple[float, float, float]:
    """Inverse of rpy_to_matrix. Gimbal-locked pitches pin roll to 0."""
    sy = np.hypot(rot[0, 0], rot[1, 0])
    if sy < 1e-12:
        # pitch = +-pi/2: yaw and roll are coupled, report roll = 0
        pitch = np.arctan2(-rot[2, 0], sy)
        roll = 0.0
        yaw = np.arctan2(-rot[0, 1], rot[1, 1])
    else:
        roll = np.arctan2(rot[2, 1], rot[2, 2])
        pitch = np.arctan2(-rot[2, 0], sy)
        yaw = np.arctan2(rot[1, 0], rot[0, 0])
    return float(roll), float(pitch), float(yaw)


def rotation_about(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation about a unit axis."""
    ax = np.asarray(axis, dtype=float)
    n = np.linalg.norm(ax)
    if n == 0.0:
        raise ValueError("rotation axis must be nonzero")
    ax = ax / n
    c, s = np.cos(angle), np.sin(angle)
    x, y, z = ax
    cross = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return c * np.eye(3) + s * cross + (1.0 - c) * np.outer(ax, ax)


def normalized(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("cannot normalize zero vector")
    return v / n


def snap_rotation(rot: np.ndarray, tol: float = 1e-7) -> np.ndarray:
    """Snap a rotation to the exact signed permutation it approximates.

    Used when transporting axes between frames that are axis-aligned up to
    float rounding, so the transported vector stays bitwise intact. Returns
    the input unchanged when it is not within tol of a signed permutation.
    """
    snapped = np.round(rot)
    if np.max(np.abs(rot - snapped)) > tol:
        return rot
    if not np.array_equal(np.abs(snapped) @ np.ones(3), np.ones(3)):
        return rot
    if not np.array_equal(np.ones(3) @ np.abs(snapped), np.ones(3)):
        return rot
    if round(float(np.linalg.det(snapped))) != 1:
        return rot
    return snapped


@dataclass(frozen=True)
class Transform:
    """Rotation + translation; value type, never mutated."""

    rotation: np.ndarray
    translation: np.ndarray

    @staticmethod
    def identity() -> "Transform":
        return Transform(np.eye(3), np.zeros(3))

    @staticmethod
    def from_xyz_rpy(xyz=(0.0, 0.0, 0.0), rpy=(0.0, 0.0, 0.0)) -> "Transform":
        return Transform(rpy_to_matrix(rpy), np.asarray(xyz, dtype=float))

    def compose(self, other: "Transform") -> "Transform":
        return Transform(
            self.rotation @ other.rotation,
            self.rotation @ other.translation + self.translation,
        )

    def __matmul__(self, other: "Transform") -> "Transform":
        return self.compose(other)

    def inverse(self) -> "Transform":
        rt = self.rotation.T
        return Transform(rt, -(rt @ self.translation))

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return pts @ self.rotation.T + self.translation

    def rpy(self) -> tuple[float, float, float]:
        return matrix_to_rpy(self.rotation)

    def is_orthonormal(self, tol: float = ORTHONORMAL_TOL) -> bool:
        err = np.max(np.abs(self.rotation.T @ self.rotation - np.eye(3)))
        return err <= tol and abs(np.linalg.det(self.rotation) - 1.0) <= tol


@dataclass(frozen=True)
class Aabb:
    """Axis-aligned box, lo <= hi componentwise."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=float)
        hi = np.asarray(self.hi, dtype=float)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if np.any(lo > hi):
            raise ValueError("aabb lo exceeds hi")

    @staticmethod
    def of_points(points: np.ndarray) -> "Aabb":
        pts = np.asarray(points, dtype=float)
        if pts.size == 0:
            raise ValueError("no points")
        return Aabb(pts.min(axis=0), pts.max(axis=0))

    def corners(self) -> np.ndarray:
        xs = [self.lo[0], self.hi[0]]
        ys = [self.lo[1], self.hi[1]]
        zs = [self.lo[2], self.hi[2]]
        return np.array([[x, y, z] for x in xs for y in ys for z in zs])

    def transformed(self, tf: Transform) -> "Aabb":
        """Bound of the 8 transformed corners (conservative under rotation)."""
        return Aabb.of_points(tf.apply(self.corners()))

    def union(self, other: "Aabb") -> "Aabb":
        return Aabb(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def extents(self) -> np.ndarray:
        return self.hi - self.lo

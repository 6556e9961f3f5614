"""Shared fixtures: file paths, reference hands, random parameter sampling."""

from pathlib import Path

import numpy as np
import pytest

from canonhand import CanonicalHandParams, HandAnnotation, load_urdf
from canonhand.geometry import matrix_to_rpy, normalized

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

HAND_FIXTURES = ("shadow_hand", "allegro_hand", "leap_hand", "barrett_hand")


@pytest.fixture(scope="session")
def fixture_models():
    out = {}
    for name in HAND_FIXTURES:
        model = load_urdf(FIXTURES / f"{name}.urdf")
        ann = HandAnnotation.load(FIXTURES / f"{name}.annotation.json")
        out[name] = (model, ann)
    return out


def full_hand_params(**overrides) -> CanonicalHandParams:
    """A fixed, fully articulated 22-DoF reference hand."""
    lowers = np.full(22, -0.3)
    uppers = np.full(22, 1.2)
    fields = dict(
        palm_radius=0.04,
        finger_radius=0.01,
        finger_lengths=[0.05, 0.03, 0.025, 0.045, 0.028, 0.024],
        finger_xyz=[[0.0, 0.035, 0.01], [0.0, 0.03, 0.09], [0.0, 0.01, 0.095],
                    [0.0, -0.01, 0.09], [0.0, -0.03, 0.085]],
        little_extra_origin=[0.0, -0.025, 0.04, *canonical_extra_rpy([0.1, 0.95, -0.2])],
        thumb_rpy=[0.3, -0.6, 1.1],
        thumb_axes=[[0.0, 1.0, 0.0], [1.0, 0.0, 0.0]],
        joint_lowers=lowers,
        joint_uppers=uppers,
    )
    fields.update(overrides)
    return CanonicalHandParams(**fields)


@pytest.fixture
def full_hand() -> CanonicalHandParams:
    return full_hand_params()


def canonical_extra_rpy(axis_palm) -> tuple:
    """rpy of the reordered little-extra frame for a given rotation axis."""
    y = normalized(np.asarray(axis_palm, dtype=float))
    xhat = np.array([1.0, 0.0, 0.0])
    x = normalized(xhat - (xhat @ y) * y)
    z = np.cross(x, y)
    return matrix_to_rpy(np.column_stack([x, y, z]))


def canonical_thumb_axis1(rng) -> np.ndarray:
    """Unit axis in the thumb yz-plane with positive y (extraction-canonical)."""
    beta = rng.uniform(-1.2, 1.2)
    return np.array([0.0, np.cos(beta), np.sin(beta)])


def random_roundtrip_params(rng) -> CanonicalHandParams:
    """Random valid parameters in extraction-canonical form.

    Fingers are fully present or fully absent (absent ones zeroed), the thumb
    axis-1 lies in the local yz-plane and the little extra frame follows the
    reorder convention: generate -> parse -> extract recovers these exactly.
    """
    while True:
        present = rng.random(5) < 0.85
        if present.any():  # need finger links for the radius estimate
            break
    lowers = np.zeros(22)
    uppers = np.zeros(22)
    from canonhand import slots

    for finger in range(5):
        if not present[finger]:
            continue
        for i in slots.finger_slots(finger):
            lo = rng.uniform(-1.5, -0.05)
            hi = rng.uniform(0.05, 2.0)
            lowers[i], uppers[i] = lo, hi

    finger_xyz = np.zeros((5, 3))
    for finger in range(5):
        if present[finger]:
            finger_xyz[finger] = [rng.uniform(-0.01, 0.01),
                                  rng.uniform(-0.05, 0.05),
                                  rng.uniform(0.02, 0.08)]
    if present[0]:
        finger_xyz[0] = [rng.uniform(-0.01, 0.02), rng.uniform(0.02, 0.05),
                         rng.uniform(-0.01, 0.03)]

    thumb_lengths = (rng.uniform(0.02, 0.06, 3) if present[0] else np.zeros(3))
    shared_lengths = (rng.uniform(0.015, 0.05, 3) if present[1:].any()
                      else np.zeros(3))

    little_extra = np.zeros(6)
    with_extra = present[4] and rng.random() < 0.7
    if not with_extra and present[4]:
        # drop the extra slot: little finger uses ranks 2-5 only
        lowers[17] = uppers[17] = 0.0
    if with_extra:
        axis = normalized(np.array([rng.uniform(-0.6, 0.6),
                                    rng.uniform(0.4, 1.0),
                                    rng.uniform(-0.6, 0.6)]))
        little_extra[:3] = [rng.uniform(-0.01, 0.01), rng.uniform(-0.05, -0.01),
                            rng.uniform(0.01, 0.05)]
        little_extra[3:] = canonical_extra_rpy(axis)

    if present[0]:
        thumb_rpy = rng.uniform(-1.2, 1.2, 3)
        axis1 = canonical_thumb_axis1(rng)
        a2 = normalized(rng.uniform(-1.0, 1.0, 3))
    else:
        thumb_rpy = np.zeros(3)
        axis1 = np.array([0.0, 1.0, 0.0])
        a2 = np.array([0.0, 1.0, 0.0])

    return CanonicalHandParams(
        palm_radius=rng.uniform(0.02, 0.06),
        finger_radius=rng.uniform(0.006, 0.015),
        finger_lengths=np.concatenate([thumb_lengths, shared_lengths]),
        finger_xyz=finger_xyz,
        little_extra_origin=little_extra,
        thumb_rpy=thumb_rpy,
        thumb_axes=np.stack([axis1, a2]),
        joint_lowers=lowers,
        joint_uppers=uppers,
    )

"""Procedural morphology sampling and fixed-length vector serialization.

A sample is drawn topology-first (per-finger presence, then a prefix-closed
joint count), then continuous fields uniform over configured ranges, then two
thumb axis choices over the six canonical directions. The draw order below is
a file-format contract (rng stream "pcg64_seedseq_v1"):

  presence x5 | joint count x5 | palm_radius | finger_radius | lengths x6
  | finger_xyz x15 | little_extra x6 | thumb_rpy x3 | axis choice x2

The 66-float vector layout is 32 continuous (same field order), 12 one-hot
(two groups of +x,-x,+y,-y,+z,-z) and 22 binary presence indicators.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import slots
from .errors import BadLength, InvalidRanges, IoError
from .params import RIGHT, CanonicalHandParams

VECTOR_DIM = 66
N_CONTINUOUS = 32
N_AXIS_ONEHOT = 12
RNG_NAME = "pcg64_seedseq_v1"

DIRECTIONS = np.array([
    [1.0, 0.0, 0.0], [-1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0], [0.0, -1.0, 0.0],
    [0.0, 0.0, 1.0], [0.0, 0.0, -1.0],
])

# slots whose motion is abduction (+x axis): thumb rank 3, non-thumb "joint1"
ABDUCTION_SLOTS = frozenset(
    s.index for s in slots.SLOTS if s.default_axis == slots.AXIS_X)


@dataclass(frozen=True)
class RangeConfig:
    """Uniform sampling ranges; artifact defaults, not values from any source."""

    palm_radius: tuple = (0.025, 0.06)
    finger_radius: tuple = (0.006, 0.015)
    finger_length: tuple = (0.015, 0.06)
    finger_x: tuple = (-0.015, 0.015)
    finger_y: tuple = (-0.06, 0.06)
    finger_z: tuple = (-0.02, 0.08)
    little_extra_xyz: tuple = (-0.04, 0.04)
    little_extra_rot: tuple = (-0.7, 0.7)
    thumb_rot: tuple = (-1.6, 1.6)
    presence_prob: float = 0.8
    flexion_limits: tuple = (-0.3, 1.6)
    abduction_limits: tuple = (-0.35, 0.35)

    def validate(self) -> None:
        for name in ("palm_radius", "finger_radius", "finger_length", "finger_x",
                     "finger_y", "finger_z", "little_extra_xyz",
                     "little_extra_rot", "thumb_rot",
                     "flexion_limits", "abduction_limits"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise InvalidRanges(f"{name}: need lo < hi, got ({lo}, {hi})")
        if not 0.0 <= self.presence_prob <= 1.0:
            raise InvalidRanges(f"presence_prob must be in [0, 1], got {self.presence_prob}")

    def digest(self) -> str:
        payload = json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(asdict(self), indent=2) + "\n")

    @staticmethod
    def load(path) -> "RangeConfig":
        data = json.loads(Path(path).read_text())
        cfg = RangeConfig(**{k: tuple(v) if isinstance(v, list) else v
                             for k, v in data.items()})
        cfg.validate()
        return cfg


DEFAULT_RANGES = RangeConfig()


@dataclass(frozen=True)
class MorphologySample:
    topology: np.ndarray       # (22,) bool, prefix-closed per finger
    params: CanonicalHandParams
    axis_choices: tuple        # two indices into DIRECTIONS (thumb ranks 1-2)

    def __post_init__(self):
        object.__setattr__(self, "topology", np.asarray(self.topology, dtype=bool))


def _limits_from_topology(topology: np.ndarray, ranges: RangeConfig):
    lowers = np.zeros(slots.N_SLOTS)
    uppers = np.zeros(slots.N_SLOTS)
    for i in range(slots.N_SLOTS):
        if topology[i]:
            lo, hi = (ranges.abduction_limits if i in ABDUCTION_SLOTS
                      else ranges.flexion_limits)
            lowers[i], uppers[i] = lo, hi
    return lowers, uppers


def _params_from(topology, continuous, axis_choices, ranges) -> CanonicalHandParams:
    lowers, uppers = _limits_from_topology(topology, ranges)
    return CanonicalHandParams(
        palm_radius=continuous[0],
        finger_radius=continuous[1],
        finger_lengths=continuous[2:8],
        finger_xyz=continuous[8:23].reshape(5, 3),
        little_extra_origin=continuous[23:29],
        thumb_rpy=continuous[29:32],
        thumb_axes=DIRECTIONS[list(axis_choices)],
        joint_lowers=lowers,
        joint_uppers=uppers,
        handedness=RIGHT,
    )


def sample_morphology(seed, ranges: RangeConfig = DEFAULT_RANGES) -> MorphologySample:
    """Deterministic sample; seed may be an int or a numpy SeedSequence."""
    ranges.validate()
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    rng = np.random.Generator(np.random.PCG64(seed))

    present = rng.random(slots.N_FINGERS) < ranges.presence_prob
    counts = [int(rng.integers(1, n + 1)) for n in slots.SLOTS_PER_FINGER]
    topology = np.zeros(slots.N_SLOTS, dtype=bool)
    for finger in range(slots.N_FINGERS):
        if present[finger]:
            start = slots.FINGER_SLOT_START[finger]
            topology[start:start + counts[finger]] = True

    def u(lohi, size):
        return rng.uniform(lohi[0], lohi[1], size)

    continuous = np.concatenate([
        u(ranges.palm_radius, 1),
        u(ranges.finger_radius, 1),
        u(ranges.finger_length, 6),
        np.column_stack([u(ranges.finger_x, 5), u(ranges.finger_y, 5),
                         u(ranges.finger_z, 5)]).ravel(),
        u(ranges.little_extra_xyz, 3),
        u(ranges.little_extra_rot, 3),
        u(ranges.thumb_rot, 3),
    ])
    axis_choices = tuple(int(v) for v in rng.integers(0, 6, size=2))

    sample = MorphologySample(topology,
                              _params_from(topology, continuous, axis_choices, ranges),
                              axis_choices)
    return sample


def encode(s: MorphologySample) -> np.ndarray:
    """Fixed 66-float vector: continuous | axis one-hots | presence bits."""
    p = s.params
    continuous = np.concatenate([
        [p.palm_radius, p.finger_radius],
        p.finger_lengths,
        p.finger_xyz.ravel(),
        p.little_extra_origin,
        p.thumb_rpy,
    ])
    onehot = np.zeros(N_AXIS_ONEHOT)
    for k, choice in enumerate(s.axis_choices):
        onehot[6 * k + choice] = 1.0
    return np.concatenate([continuous, onehot, s.topology.astype(float)])


def decode(v, ranges: RangeConfig = DEFAULT_RANGES) -> MorphologySample:
    """Inverse of encode; repairs non-prefix-closed presence by truncation."""
    vec = np.asarray(v, dtype=float)
    if vec.shape != (VECTOR_DIM,):
        raise BadLength(f"expected {VECTOR_DIM} values, got {vec.shape}")
    continuous = vec[:N_CONTINUOUS]
    axis_choices = tuple(int(np.argmax(vec[N_CONTINUOUS + 6 * k:
                                           N_CONTINUOUS + 6 * (k + 1)]))
                         for k in range(2))
    raw = vec[N_CONTINUOUS + N_AXIS_ONEHOT:] >= 0.5
    topology = np.zeros(slots.N_SLOTS, dtype=bool)
    for finger in range(slots.N_FINGERS):
        for i in slots.finger_slots(finger):
            if not raw[i]:
                break
            topology[i] = True
    return MorphologySample(topology,
                            _params_from(topology, continuous, axis_choices, ranges),
                            axis_choices)


def interpolate(v_a, v_b, alpha: float,
                ranges: RangeConfig = DEFAULT_RANGES) -> MorphologySample:
    """Linear blend in vector space, then decode."""
    a = np.asarray(v_a, dtype=float)
    b = np.asarray(v_b, dtype=float)
    if a.shape != (VECTOR_DIM,) or b.shape != (VECTOR_DIM,):
        raise BadLength("interpolation endpoints must have 66 values")
    return decode((1.0 - alpha) * a + alpha * b, ranges)


# -- dataset ---------------------------------------------------------------------------

_CHUNK = 4096


def dataset_manifest_path(path) -> Path:
    return Path(str(path) + ".json")


def row_seed(seed: int, row: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed), int(row)])


def write_dataset(n: int, seed: int, ranges: RangeConfig, path) -> dict:
    """n rows of 66 little-endian float32; byte-reproducible from (n, seed, ranges).

    Rows are seeded independently (SeedSequence([seed, row])) so disjoint row
    ranges can be produced in parallel; this writer streams them in order.
    """
    if n < 1:
        raise InvalidRanges(f"need n >= 1, got {n}")
    ranges.validate()
    manifest = {
        "rows": int(n),
        "dim": VECTOR_DIM,
        "seed": int(seed),
        "ranges_sha256": ranges.digest(),
        "dtype": "<f4",
        "rng": RNG_NAME,
        "layout": {
            "continuous": [0, N_CONTINUOUS],
            "axis_onehot": [N_CONTINUOUS, N_CONTINUOUS + N_AXIS_ONEHOT],
            "presence": [N_CONTINUOUS + N_AXIS_ONEHOT, VECTOR_DIM],
        },
    }
    try:
        with open(path, "wb") as fh:
            buf = np.empty((_CHUNK, VECTOR_DIM), dtype="<f4")
            filled = 0
            for row in range(n):
                vec = encode(sample_morphology(row_seed(seed, row), ranges))
                buf[filled] = vec.astype("<f4")
                filled += 1
                if filled == _CHUNK:
                    fh.write(buf.tobytes())
                    filled = 0
            if filled:
                fh.write(buf[:filled].tobytes())
        dataset_manifest_path(path).write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return manifest


def read_dataset(path) -> tuple[np.ndarray, dict | None]:
    """Rows as an (n, 66) float32 array plus the sidecar manifest if present."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(str(exc)) from exc
    if len(raw) % (4 * VECTOR_DIM) != 0:
        raise BadLength(f"{path}: size {len(raw)} is not a whole number of rows")
    rows = np.frombuffer(raw, dtype="<f4").reshape(-1, VECTOR_DIM)
    manifest = None
    side = dataset_manifest_path(path)
    if side.exists():
        manifest = json.loads(side.read_text())
    return rows, manifest

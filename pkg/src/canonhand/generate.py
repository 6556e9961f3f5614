"""Canonical URDF emission from parameters, plus LEAP-style variants.

URDF text comes out of a conditional Jinja2 template fed with resolved chain
elements; identical parameters always yield byte-identical text. Capsules are
encoded as cylinder + two end spheres unless the nonstandard <capsule> tag is
requested. Floats are printed with shortest-exact repr so a parse of the
output reproduces every value bitwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from jinja2 import Environment

from . import slots
from .chain import layout_hand, resolve_canonical, resolve_extended
from .errors import InvalidVariant
from .params import (
    EXTENDED_JOINTS,
    CanonicalHandParams,
    ExtendedHandParams,
    active_dof,
    require_valid,
    require_valid_extended,
)

_TEMPLATE_TEXT = """\
<?xml version="1.0"?>
<robot name="{{ name }}">
{%- for link in links %}
  <link name="{{ link.name }}">
{%- if link.inertial %}
    <inertial>
      <origin xyz="{{ link.inertial.xyz|vec }}" rpy="{{ link.inertial.rpy|vec }}"/>
      <mass value="{{ link.inertial.mass|num }}"/>
      <inertia ixx="{{ link.inertial.ixx|num }}" ixy="0" ixz="0" iyy="{{ link.inertial.iyy|num }}" iyz="0" izz="{{ link.inertial.izz|num }}"/>
    </inertial>
{%- endif %}
{%- for geom in link.geoms %}
{%- for tag in ("visual", "collision") %}
    <{{ tag }}>
      <origin xyz="{{ geom.xyz|vec }}" rpy="{{ geom.rpy|vec }}"/>
      <geometry>
{%- if geom.kind == "cylinder" %}
        <cylinder radius="{{ geom.radius|num }}" length="{{ geom.length|num }}"/>
{%- elif geom.kind == "sphere" %}
        <sphere radius="{{ geom.radius|num }}"/>
{%- elif geom.kind == "capsule" %}
        <capsule radius="{{ geom.radius|num }}" length="{{ geom.length|num }}"/>
{%- endif %}
      </geometry>
    </{{ tag }}>
{%- endfor %}
{%- endfor %}
  </link>
{%- endfor %}
{%- for joint in joints %}
  <joint name="{{ joint.name }}" type="{{ joint.kind }}">
    <parent link="{{ joint.parent }}"/>
    <child link="{{ joint.child }}"/>
    <origin xyz="{{ joint.xyz|vec }}" rpy="{{ joint.rpy|vec }}"/>
{%- if joint.kind == "revolute" %}
    <axis xyz="{{ joint.axis|vec }}"/>
    <limit lower="{{ joint.lower|num }}" upper="{{ joint.upper|num }}" effort="{{ joint.effort|num }}" velocity="{{ joint.velocity|num }}"/>
{%- endif %}
  </joint>
{%- endfor %}
</robot>
"""


def _num(x) -> str:
    return repr(float(x))


def _vec(v) -> str:
    return " ".join(repr(float(x)) for x in v)


_env = Environment(autoescape=False)
_env.filters["num"] = _num
_env.filters["vec"] = _vec
_TEMPLATE = _env.from_string(_TEMPLATE_TEXT)


def _render(name, links, joints) -> str:
    return _TEMPLATE.render(name=name, links=links, joints=joints)


def generate_urdf(p: CanonicalHandParams, name: str = "canonical_hand",
                  capsule_tag: bool = False) -> str:
    """Emit the canonical URDF; joints appear only for active slots."""
    require_valid(p)
    hand = resolve_canonical(p)
    links, joints = layout_hand(hand, p.joint_lowers, p.joint_uppers, capsule_tag)
    return _render(name, links, joints)


def generate_extended_urdf(e: ExtendedHandParams, name: str = "canonical_hand",
                           capsule_tag: bool = False) -> str:
    """Emit the extended-template URDF (per-finger radii/lengths, free origins)."""
    require_valid_extended(e)
    hand = resolve_extended(e)
    links, joints = layout_hand(hand, e.joint_lowers, e.joint_uppers, capsule_tag)
    return _render(name, links, joints)


# -- canonical -> extended embedding -------------------------------------------------

def promote(p: CanonicalHandParams) -> ExtendedHandParams:
    """Lossless embedding of canonical parameters into the extended set.

    Forward kinematics of the promoted hand match the canonical hand exactly:
    per-finger radii/lengths copy the shared values and the 12 parameterized
    joints are filled from the canonical frame conventions.
    """
    require_valid(p)
    lt = p.finger_lengths[0:3]
    ln = p.finger_lengths[3:6]
    lengths = np.array([lt, ln, ln, ln, ln])

    origins = np.zeros((12, 6))
    axes = np.zeros((12, 3))

    # thumb ranks 1-3
    origins[0, 0:3] = p.finger_xyz[slots.THUMB]
    origins[0, 3:6] = p.thumb_rpy
    axes[0] = p.thumb_axes[0]
    axes[1] = p.thumb_axes[1]
    origins[2, 2] = lt[0]
    axes[2] = (1.0, 0.0, 0.0)

    # index/middle/ring ranks 1-2
    for finger, k0 in ((slots.INDEX, 3), (slots.MIDDLE, 5), (slots.RING, 7)):
        origins[k0, 0:3] = p.finger_xyz[finger]
        axes[k0] = (1.0, 0.0, 0.0)
        axes[k0 + 1] = (0.0, 1.0, 0.0)

    # little ranks 1-3 (extra joint, then the knuckle expressed in its frame)
    from .geometry import rpy_to_matrix

    le_xyz = p.little_extra_origin[0:3]
    le_rpy = p.little_extra_origin[3:6]
    origins[9, 0:3] = le_xyz
    origins[9, 3:6] = le_rpy
    axes[9] = (0.0, 1.0, 0.0)
    origins[10, 0:3] = rpy_to_matrix(le_rpy).T @ (p.finger_xyz[slots.LITTLE] - le_xyz)
    axes[10] = (1.0, 0.0, 0.0)
    axes[11] = (0.0, 1.0, 0.0)

    return ExtendedHandParams(
        palm_radius=p.palm_radius,
        finger_radii=np.full(5, p.finger_radius),
        finger_lengths=lengths,
        joint_origins=origins,
        joint_axes=axes,
        joint_lowers=p.joint_lowers.copy(),
        joint_uppers=p.joint_uppers.copy(),
        handedness=p.handedness,
    )


# -- LEAP variants -----------------------------------------------------------------

@dataclass(frozen=True)
class LeapVariantId:
    """leap_xyzw: link counts for thumb, index, middle, little fingers."""

    x: int
    y: int
    z: int
    w: int

    def __post_init__(self):
        for d in (self.x, self.y, self.z, self.w):
            if not isinstance(d, int) or not 0 <= d <= 3:
                raise InvalidVariant(f"digits must be in 0..3, got {self!r}")

    @property
    def name(self) -> str:
        return f"leap_{self.x}{self.y}{self.z}{self.w}"

    @property
    def total(self) -> int:
        return self.x + self.y + self.z + self.w

    @staticmethod
    def parse(text: str) -> "LeapVariantId":
        if not (text.startswith("leap_") and len(text) == 9 and text[5:].isdigit()):
            raise InvalidVariant(f"bad variant name {text!r}")
        return LeapVariantId(*(int(c) for c in text[5:]))


# digit -> finger it controls (ring is absent on the LEAP hand)
_VARIANT_FINGERS = (slots.THUMB, slots.INDEX, slots.MIDDLE, slots.LITTLE)


def make_leap_variant(base: ExtendedHandParams, vid: LeapVariantId) -> ExtendedHandParams:
    """Zero out links/joints of the base LEAP hand per the variant digits.

    A finger keeping k links retains its k+1 proximal active joints; k = 0
    removes the finger entirely. leap_3333 returns the base unchanged.
    """
    lowers = base.joint_lowers.copy()
    uppers = base.joint_uppers.copy()
    lengths = base.finger_lengths.copy()
    origins = base.joint_origins.copy()
    axes = base.joint_axes.copy()

    for digit, finger in zip((vid.x, vid.y, vid.z, vid.w), _VARIANT_FINGERS):
        active = [i for i in slots.finger_slots(finger) if lowers[i] < uppers[i]]
        keep = active[:digit + 1] if digit > 0 else []
        for i in active:
            if i not in keep:
                lowers[i] = 0.0
                uppers[i] = 0.0
        lengths[finger, digit:] = 0.0
        if digit == 0:
            for k, (f, _rank) in enumerate(EXTENDED_JOINTS):
                if f == finger:
                    origins[k] = 0.0
                    axes[k] = 0.0

    out = ExtendedHandParams(
        palm_radius=base.palm_radius,
        finger_radii=base.finger_radii.copy(),
        finger_lengths=lengths,
        joint_origins=origins,
        joint_axes=axes,
        joint_lowers=lowers,
        joint_uppers=uppers,
        handedness=base.handedness,
    )
    require_valid_extended(out)
    return out


def enumerate_variants(min_total: int = 0) -> list[LeapVariantId]:
    """All leap_xyzw ids with x+y+z+w >= min_total, lexicographic order."""
    if not 0 <= min_total <= 12:
        raise InvalidVariant(f"min_total must be in 0..12, got {min_total}")
    return [LeapVariantId(x, y, z, w)
            for x, y, z, w in itertools.product(range(4), repeat=4)
            if x + y + z + w >= min_total]


def variant_dof(base: ExtendedHandParams, vid: LeapVariantId) -> int:
    return active_dof(make_leap_variant(base, vid))

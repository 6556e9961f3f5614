"""canonhand: canonical parameterization toolkit for dexterous robot hands.

Converts heterogeneous hand URDFs into a fixed 82-scalar canonical
parameterization (173-scalar extended form) and back, unifies joint action
spaces over a 22-DoF slot layout, audits kinematic fidelity via forward
kinematics, and samples/serializes synthetic morphologies for learning
pipelines.
"""

from .actionmap import clamp_to_limits, to_canonical, to_original
from .extract import (
    HandAnnotation,
    auto_annotation,
    extract_all,
    extract_finger_bases,
    extract_finger_lengths,
    extract_joint_limits,
    extract_little_extra_origin,
    extract_thumb_axes,
    extract_thumb_frame,
    estimate_finger_radius,
    estimate_palm_radius,
    find_palm_link,
)
from .generate import (
    LeapVariantId,
    enumerate_variants,
    generate_extended_urdf,
    generate_urdf,
    make_leap_variant,
    promote,
)
from .geometry import Aabb, Transform
from .kinematics import CanonicalFk, FidelityReport, fidelity_report, fk_canonical, fk_urdf
from .mesh import link_aabb, load_mesh_aabb
from .morpho import (
    MorphologySample,
    RangeConfig,
    decode,
    encode,
    interpolate,
    read_dataset,
    sample_morphology,
    write_dataset,
)
from .params import (
    CanonicalHandParams,
    ExtendedHandParams,
    active_dof,
    active_mask,
    mirror_handedness,
    validate_params,
)
from .roundtrip import compare_roundtrip, roundtrip_ok
from .urdf import UrdfJoint, UrdfLink, UrdfModel, load_urdf, model_to_xml, parse_urdf

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

#!/usr/bin/env python3
"""Build the hand fixtures under fixtures/.

Stand-in URDFs for four dexterous hands (joint counts and per-finger joint
patterns follow the published kinematic comparison; dimensions are plausible
inventions), their extraction annotations, and the extended parameter file
for the LEAP-style hand with the relocated abduction joints. Each fixture
uses its own vendor frame and naming scheme on purpose; the annotation
supplies the palm transform that maps it back to the canonical convention.

Run from the repo root:  python3 tools/make_fixtures.py
"""

import json
import math
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "fixtures"

HALF_PI = math.pi / 2.0


def fmt(v):
    return " ".join(repr(float(x)) for x in v)


def link(name, geom=""):
    if not geom:
        return f'  <link name="{name}"/>'
    return f'  <link name="{name}">\n{geom}\n  </link>'


def box(size, xyz=(0, 0, 0), rpy=(0, 0, 0)):
    return (f'    <collision>\n'
            f'      <origin xyz="{fmt(xyz)}" rpy="{fmt(rpy)}"/>\n'
            f'      <geometry><box size="{fmt(size)}"/></geometry>\n'
            f'    </collision>')


def cylinder(radius, length, xyz=(0, 0, 0), rpy=(0, 0, 0)):
    return (f'    <collision>\n'
            f'      <origin xyz="{fmt(xyz)}" rpy="{fmt(rpy)}"/>\n'
            f'      <geometry><cylinder radius="{radius!r}" length="{length!r}"/></geometry>\n'
            f'    </collision>')


def joint(name, kind, parent, child, xyz=(0, 0, 0), rpy=(0, 0, 0),
          axis=None, limits=None):
    lines = [f'  <joint name="{name}" type="{kind}">',
             f'    <parent link="{parent}"/>',
             f'    <child link="{child}"/>',
             f'    <origin xyz="{fmt(xyz)}" rpy="{fmt(rpy)}"/>']
    if axis is not None:
        lines.append(f'    <axis xyz="{fmt(axis)}"/>')
    if limits is not None:
        lo, hi = limits
        lines.append(f'    <limit lower="{lo!r}" upper="{hi!r}" effort="2.0" velocity="3.0"/>')
    lines.append('  </joint>')
    return "\n".join(lines)


def robot(name, elements):
    body = "\n".join(elements)
    return f'<?xml version="1.0"?>\n<robot name="{name}">\n{body}\n</robot>\n'


def finger_box(length, across=0.018):
    """Finger segment box extending along +y of its link frame."""
    return box((across, length, across), (0.0, length / 2.0, 0.0))


def write(path, text):
    path.write_text(text)
    print(f"wrote {path}")


def annotation(joint_map, palm_xyz, palm_rpy, tips, handedness="right"):
    return {
        "joint_map": [[n, s, g] for n, s, g in joint_map],
        "palm_origin": {"xyz": list(palm_xyz), "rpy": list(palm_rpy)},
        "handedness": handedness,
        "fingertip_links": tips,
    }


# ---------------------------------------------------------------- shadow-style

def make_shadow():
    """22 DoF: thumb RAAFF, index/middle/ring AFFF, little FAFFF.

    Vendor frame: palm normal +z, thumb side +x, fingers +y. The thumb hangs
    off a fixed bracket so palm detection must see through fixed joints.
    """
    el = [link("shadow_base", box((0.05, 0.03, 0.03), (0, -0.01, 0))),
          joint("palm_mount", "fixed", "shadow_base", "palm_link",
                (0.0, 0.01, 0.0)),
          link("palm_link", box((0.085, 0.095, 0.024), (0, 0.0425, 0)))]

    fingers = {"ff": 0.033, "mf": 0.011, "rf": -0.011}
    slot_base = {"ff": 5, "mf": 9, "rf": 13}
    jmap = []
    tips = {}

    # thumb: RAAFF on a fixed bracket, chain along local +y
    el.append(joint("thumb_mount", "fixed", "palm_link", "th_base",
                    (0.038, 0.005, 0.008), (0.35, 0.2, -0.9)))
    el.append(link("th_base", box((0.02, 0.02, 0.02))))
    el.append(joint("thj5", "revolute", "th_base", "th_proximal",
                    (0.0, 0.01, 0.0), axis=(0, 0, 1), limits=(-1.05, 1.05)))
    el.append(link("th_proximal"))
    el.append(joint("thj4", "revolute", "th_proximal", "th_hub",
                    axis=(1, 0, 0), limits=(0.0, 1.22)))
    el.append(link("th_hub", finger_box(0.038)))
    el.append(joint("thj3", "revolute", "th_hub", "th_middle",
                    (0.0, 0.038, 0.0), axis=(0, 0, 1), limits=(-0.21, 0.21)))
    el.append(link("th_middle"))
    el.append(joint("thj2", "revolute", "th_middle", "th_distal",
                    axis=(1, 0, 0), limits=(-0.7, 0.7)))
    el.append(link("th_distal", finger_box(0.032)))
    el.append(joint("thj1", "revolute", "th_distal", "th_tip_link",
                    (0.0, 0.032, 0.0), axis=(1, 0, 0), limits=(0.0, 1.57)))
    el.append(link("th_tip_link", finger_box(0.0275)))
    el.append(joint("th_tip_mount", "fixed", "th_tip_link", "th_tip",
                    (0.0, 0.0275, 0.0)))
    el.append(link("th_tip"))
    jmap += [("thj5", 0, 1), ("thj4", 1, 1), ("thj3", 2, 1),
             ("thj2", 3, 1), ("thj1", 4, 1)]
    tips["thumb"] = "th_tip"

    finger_names = {"ff": "index", "mf": "middle", "rf": "ring"}
    for f, x in fingers.items():
        s = slot_base[f]
        el.append(joint(f"{f}j4", "revolute", "palm_link", f"{f}_knuckle",
                        (x, 0.088, 0.0), axis=(0, 0, 1), limits=(-0.35, 0.35)))
        el.append(link(f"{f}_knuckle"))
        el.append(joint(f"{f}j3", "revolute", f"{f}_knuckle", f"{f}_proximal",
                        axis=(1, 0, 0), limits=(-0.26, 1.57)))
        el.append(link(f"{f}_proximal", finger_box(0.045)))
        el.append(joint(f"{f}j2", "revolute", f"{f}_proximal", f"{f}_middle",
                        (0.0, 0.045, 0.0), axis=(1, 0, 0), limits=(0.0, 1.57)))
        el.append(link(f"{f}_middle", finger_box(0.025)))
        el.append(joint(f"{f}j1", "revolute", f"{f}_middle", f"{f}_distal",
                        (0.0, 0.025, 0.0), axis=(1, 0, 0), limits=(0.0, 1.57)))
        el.append(link(f"{f}_distal", finger_box(0.026)))
        el.append(joint(f"{f}_tip_mount", "fixed", f"{f}_distal", f"{f}_tip",
                        (0.0, 0.026, 0.0)))
        el.append(link(f"{f}_tip"))
        jmap += [(f"{f}j4", s, 1), (f"{f}j3", s + 1, 1),
                 (f"{f}j2", s + 2, 1), (f"{f}j1", s + 3, 1)]
        tips[finger_names[f]] = f"{f}_tip"

    # little finger: extra metacarpal joint with a tilted frame (FAFFF)
    el.append(joint("lfj5", "revolute", "palm_link", "lf_metacarpal",
                    (-0.033, 0.02, 0.0), (0.0, 0.4, 0.0),
                    axis=(1, 0, 0), limits=(0.0, 0.785)))
    el.append(link("lf_metacarpal", finger_box(0.04)))
    el.append(joint("lfj4", "revolute", "lf_metacarpal", "lf_knuckle",
                    (0.0, 0.04, 0.0), axis=(0, 0, 1), limits=(-0.35, 0.35)))
    el.append(link("lf_knuckle"))
    el.append(joint("lfj3", "revolute", "lf_knuckle", "lf_proximal",
                    axis=(1, 0, 0), limits=(-0.26, 1.57)))
    el.append(link("lf_proximal", finger_box(0.042)))
    el.append(joint("lfj2", "revolute", "lf_proximal", "lf_middle",
                    (0.0, 0.042, 0.0), axis=(1, 0, 0), limits=(0.0, 1.57)))
    el.append(link("lf_middle", finger_box(0.024)))
    el.append(joint("lfj1", "revolute", "lf_middle", "lf_distal",
                    (0.0, 0.024, 0.0), axis=(1, 0, 0), limits=(0.0, 1.57)))
    el.append(link("lf_distal", finger_box(0.025)))
    el.append(joint("lf_tip_mount", "fixed", "lf_distal", "lf_tip",
                    (0.0, 0.025, 0.0)))
    el.append(link("lf_tip"))
    jmap += [("lfj5", 17, 1), ("lfj4", 18, 1), ("lfj3", 19, 1),
             ("lfj2", 20, 1), ("lfj1", 21, 1)]
    tips["little"] = "lf_tip"

    write(OUT / "shadow_hand.urdf", robot("shadow_style_hand", el))
    # canonical x,y,z -> vendor z,x,y; palm center mid-palm
    ann = annotation(jmap, (0.0, 0.0525, 0.0), (0.0, -HALF_PI, -HALF_PI), tips)
    write(OUT / "shadow_hand.annotation.json",
          json.dumps(ann, indent=2) + "\n")


# ---------------------------------------------------------------- allegro-style

def make_allegro():
    """16 DoF: thumb ARFF, three RFFF fingers (ring column absent).

    Vendor frame: fingers along +x, palm normal +y, spread across z.
    """
    el = [link("allegro_base", box((0.04, 0.0285, 0.093), (-0.019, 0.0, 0.0)))]
    jmap = []
    tips = {}

    fingers = (("joint_0", "index", 5, 0.0435),
               ("joint_4", "middle", 9, 0.0),
               ("joint_8", "little", 18, -0.0435))
    for base_joint, canonical, slot, z in fingers:
        n = base_joint.split("_")[1]
        el.append(joint(f"joint_{n}", "revolute", "allegro_base", f"link_{n}_0",
                        (0.0082, 0.0, z), axis=(1, 0, 0), limits=(-0.47, 0.47)))
        el.append(link(f"link_{n}_0"))
        el.append(joint(f"joint_{int(n)+1}", "revolute", f"link_{n}_0", f"link_{n}_1",
                        axis=(0, 0, 1), limits=(-0.196, 1.61)))
        el.append(link(f"link_{n}_1", box((0.054, 0.0196, 0.0196), (0.027, 0, 0))))
        el.append(joint(f"joint_{int(n)+2}", "revolute", f"link_{n}_1", f"link_{n}_2",
                        (0.054, 0.0, 0.0), axis=(0, 0, 1), limits=(-0.174, 1.709)))
        el.append(link(f"link_{n}_2", box((0.0384, 0.0196, 0.0196), (0.0192, 0, 0))))
        el.append(joint(f"joint_{int(n)+3}", "revolute", f"link_{n}_2", f"link_{n}_3",
                        (0.0384, 0.0, 0.0), axis=(0, 0, 1), limits=(-0.227, 1.618)))
        el.append(link(f"link_{n}_3", box((0.0387, 0.0196, 0.0196), (0.0194, 0, 0))))
        el.append(joint(f"tip_{n}", "fixed", f"link_{n}_3", f"link_{n}_tip",
                        (0.0387, 0.0, 0.0)))
        el.append(link(f"link_{n}_tip"))
        jmap += [(f"joint_{int(n)+k}", slot + k, 1) for k in range(4)]
        tips[canonical] = f"link_{n}_tip"

    # thumb, slots 0,1,3,4 (the canonical rank-3 abduction stays inactive)
    el.append(joint("joint_12", "revolute", "allegro_base", "link_12_0",
                    (-0.0182, 0.019, 0.0725), (HALF_PI, -HALF_PI / 3.0, 0.1),
                    axis=(0, 0, 1), limits=(0.263, 1.396)))
    el.append(link("link_12_0"))
    el.append(joint("joint_13", "revolute", "link_12_0", "link_12_1",
                    axis=(1, 0, 0), limits=(-0.105, 1.163)))
    el.append(link("link_12_1", box((0.0514, 0.0196, 0.0196), (0.0257, 0, 0))))
    el.append(joint("joint_14", "revolute", "link_12_1", "link_12_2",
                    (0.0514, 0.0, 0.0), axis=(0, 0, 1), limits=(-0.189, 1.644)))
    el.append(link("link_12_2", box((0.0434, 0.0196, 0.0196), (0.0217, 0, 0))))
    el.append(joint("joint_15", "revolute", "link_12_2", "link_12_3",
                    (0.0434, 0.0, 0.0), axis=(0, 0, 1), limits=(-0.162, 1.719)))
    el.append(link("link_12_3", box((0.0423, 0.0196, 0.0196), (0.0212, 0, 0))))
    el.append(joint("tip_12", "fixed", "link_12_3", "link_12_tip",
                    (0.0423, 0.0, 0.0)))
    el.append(link("link_12_tip"))
    jmap += [("joint_12", 0, 1), ("joint_13", 1, 1),
             ("joint_14", 3, 1), ("joint_15", 4, 1)]
    tips["thumb"] = "link_12_tip"

    write(OUT / "allegro_hand.urdf", robot("allegro_style_hand", el))
    # canonical x,y,z -> vendor y,z,x
    ann = annotation(jmap, (0.0, 0.0, 0.0), (HALF_PI, 0.0, HALF_PI), tips)
    write(OUT / "allegro_hand.annotation.json",
          json.dumps(ann, indent=2) + "\n")


# ---------------------------------------------------------------- leap-style

def make_leap():
    """16 DoF; non-thumb fingers put flexion before abduction in the tree."""
    el = [link("palm_lower", box((0.028, 0.084, 0.092), (0.019, 0.0, 0.026)))]
    jmap = []
    tips = {}
    t = (0.005, 0.002, -0.03)  # palm frame offset in the vendor/root frame

    def v(canonical_xyz):
        return tuple(ti + ci for ti, ci in zip(t, canonical_xyz))

    fingers = (("index", 6, (0.0, 0.028, 0.044)),
               ("middle", 10, (0.0, 0.0, 0.046)),
               ("little", 19, (0.0, -0.028, 0.044)))
    for name, flex_slot, kn in fingers:
        el.append(joint(f"{name}_mcp", "revolute", "palm_lower", f"{name}_prox",
                        v(kn), axis=(0, 1, 0), limits=(-0.31, 2.23)))
        el.append(link(f"{name}_prox", cylinder(0.014, 0.049, (0, 0, 0.0245))))
        el.append(joint(f"{name}_abd", "revolute", f"{name}_prox", f"{name}_pivot",
                        (0.0, 0.0, 0.049), axis=(1, 0, 0), limits=(-1.047, 1.047)))
        el.append(link(f"{name}_pivot"))
        el.append(joint(f"{name}_pip", "revolute", f"{name}_pivot", f"{name}_mid",
                        axis=(0, 1, 0), limits=(-0.506, 1.885)))
        el.append(link(f"{name}_mid", cylinder(0.014, 0.036, (0, 0, 0.018))))
        el.append(joint(f"{name}_dip", "revolute", f"{name}_mid", f"{name}_dist",
                        (0.0, 0.0, 0.036), axis=(0, 1, 0), limits=(-0.366, 2.042)))
        el.append(link(f"{name}_dist", cylinder(0.014, 0.0317, (0, 0, 0.01585))))
        el.append(joint(f"{name}_tipj", "fixed", f"{name}_dist", f"{name}_tip",
                        (0.0, 0.0, 0.0317)))
        el.append(link(f"{name}_tip"))
        jmap += [(f"{name}_mcp", flex_slot, 1), (f"{name}_abd", flex_slot - 1, 1),
                 (f"{name}_pip", flex_slot + 1, 1), (f"{name}_dip", flex_slot + 2, 1)]
        tips[name] = f"{name}_tip"

    el.append(joint("thumb_cmc", "revolute", "palm_lower", "thumb_base",
                    v((0.015, 0.03, 0.005)), (-0.3, -0.9, -0.2),
                    axis=(1, 0, 0), limits=(-0.349, 2.094)))
    el.append(link("thumb_base"))
    el.append(joint("thumb_axl", "revolute", "thumb_base", "thumb_prox",
                    axis=(0, 0, 1), limits=(-1.1, 1.1)))
    el.append(link("thumb_prox", cylinder(0.014, 0.0514, (0, 0, 0.0257))))
    el.append(joint("thumb_mcp", "revolute", "thumb_prox", "thumb_mid",
                    (0.0, 0.0, 0.0514), axis=(0, 1, 0), limits=(-0.47, 2.443)))
    el.append(link("thumb_mid", cylinder(0.014, 0.0434, (0, 0, 0.0217))))
    el.append(joint("thumb_ipl", "revolute", "thumb_mid", "thumb_dist",
                    (0.0, 0.0, 0.0434), axis=(0, 1, 0), limits=(-1.34, 1.88)))
    el.append(link("thumb_dist", cylinder(0.014, 0.0423, (0, 0, 0.02115))))
    el.append(joint("thumb_tipj", "fixed", "thumb_dist", "thumb_tip",
                    (0.0, 0.0, 0.0423)))
    el.append(link("thumb_tip"))
    jmap += [("thumb_cmc", 0, 1), ("thumb_axl", 1, 1),
             ("thumb_mcp", 3, 1), ("thumb_ipl", 4, 1)]
    tips["thumb"] = "thumb_tip"

    write(OUT / "leap_hand.urdf", robot("leap_style_hand", el))
    ann = annotation(jmap, t, (0.0, 0.0, 0.0), tips)
    write(OUT / "leap_hand.annotation.json", json.dumps(ann, indent=2) + "\n")


# ---------------------------------------------------------------- barrett-style

def make_barrett():
    """8 DoF: two spread+flex+flex fingers and one flex-flex thumb column."""
    el = [link("barrett_base", box((0.08, 0.05, 0.04), (0.0, 0.02, 0.0)))]
    jmap = []
    tips = {}

    # thumb column: no spread, two flexions -> canonical thumb ranks 4-5
    el.append(joint("j31", "revolute", "barrett_base", "f3_prox",
                    (0.05, 0.0, 0.02), axis=(0, 1, 0), limits=(0.0, 2.44)))
    el.append(link("f3_prox", box((0.07, 0.017, 0.017), (0.035, 0, 0))))
    el.append(joint("j32", "revolute", "f3_prox", "f3_dist",
                    (0.07, 0.0, 0.0), axis=(0, 1, 0), limits=(0.0, 0.84)))
    el.append(link("f3_dist", box((0.058, 0.017, 0.017), (0.029, 0, 0))))
    el.append(joint("f3_tipj", "fixed", "f3_dist", "f3_tip", (0.058, 0.0, 0.0)))
    el.append(link("f3_tip"))
    jmap += [("j31", 3, 1), ("j32", 4, 1)]
    tips["thumb"] = "f3_tip"

    for fi, (slot, x, canonical) in enumerate((((5), 0.025, "index"),
                                               ((9), -0.025, "middle")), start=1):
        el.append(joint(f"j{fi}1", "revolute", "barrett_base", f"f{fi}_base",
                        (x, 0.045, 0.02), axis=(0, 0, 1), limits=(0.0, 3.14)))
        el.append(link(f"f{fi}_base"))
        el.append(joint(f"j{fi}2", "revolute", f"f{fi}_base", f"f{fi}_prox",
                        axis=(1, 0, 0), limits=(0.0, 2.44)))
        el.append(link(f"f{fi}_prox", box((0.017, 0.07, 0.017), (0, 0.035, 0))))
        el.append(joint(f"j{fi}3", "revolute", f"f{fi}_prox", f"f{fi}_dist",
                        (0.0, 0.07, 0.0), axis=(1, 0, 0), limits=(0.0, 0.84)))
        el.append(link(f"f{fi}_dist", box((0.017, 0.058, 0.017), (0, 0.029, 0))))
        el.append(joint(f"f{fi}_tipj", "fixed", f"f{fi}_dist", f"f{fi}_tip",
                        (0.0, 0.058, 0.0)))
        el.append(link(f"f{fi}_tip"))
        jmap += [(f"j{fi}1", slot, 1), (f"j{fi}2", slot + 1, 1),
                 (f"j{fi}3", slot + 2, 1)]
        tips[canonical] = f"f{fi}_tip"

    write(OUT / "barrett_hand.urdf", robot("barrett_style_hand", el))
    # canonical x,y,z -> vendor z,x,y (palm normal +z, fingers +y)
    ann = annotation(jmap, (0.0, 0.02, 0.0), (0.0, -HALF_PI, -HALF_PI), tips)
    write(OUT / "barrett_hand.annotation.json", json.dumps(ann, indent=2) + "\n")


# ------------------------------------------------------------ leap extended params

def make_leap_extended():
    """173-scalar parameter file for the LEAP-style hand.

    Non-thumb rank 1 is the flexion joint at the knuckle and rank 2 the
    abduction joint relocated one link up; the thumb keeps its rank-3 slot
    inactive (ARFF pattern).
    """
    origins = [[0.0] * 6 for _ in range(12)]
    axes = [[0.0] * 3 for _ in range(12)]
    lowers = [0.0] * 22
    uppers = [0.0] * 22

    L1, L2, L3 = 0.049, 0.036, 0.0317
    TL1, TL2, TL3 = 0.0514, 0.0434, 0.0423

    # thumb ranks 1-3 (rank 3 carries the L1 offset but stays inactive)
    origins[0] = [0.015, 0.03, 0.005, -0.3, -0.9, -0.2]
    axes[0] = [1.0, 0.0, 0.0]
    axes[1] = [0.0, 0.0, 1.0]
    origins[2] = [0.0, 0.0, TL1, 0.0, 0.0, 0.0]
    axes[2] = [1.0, 0.0, 0.0]
    lowers[0], uppers[0] = -0.349, 2.094
    lowers[1], uppers[1] = -1.1, 1.1
    lowers[3], uppers[3] = -0.47, 2.443
    lowers[4], uppers[4] = -1.34, 1.88

    knuckles = {3: (0.0, 0.028, 0.044), 5: (0.0, 0.0, 0.046)}
    for k0, kn in knuckles.items():  # index rank1-2, middle rank1-2
        origins[k0] = [*kn, 0.0, 0.0, 0.0]
        axes[k0] = [0.0, 1.0, 0.0]          # flexion first
        origins[k0 + 1] = [0.0, 0.0, L1, 0.0, 0.0, 0.0]
        axes[k0 + 1] = [1.0, 0.0, 0.0]      # abduction on the second link joint
    # little finger rank2-3 (rank 1 = the unused extra slot)
    origins[10] = [0.0, -0.028, 0.044, 0.0, 0.0, 0.0]
    axes[10] = [0.0, 1.0, 0.0]
    origins[11] = [0.0, 0.0, L1, 0.0, 0.0, 0.0]
    axes[11] = [1.0, 0.0, 0.0]

    for base in (5, 9):  # index, middle slot blocks
        lowers[base], uppers[base] = -0.31, 2.23
        lowers[base + 1], uppers[base + 1] = -1.047, 1.047
        lowers[base + 2], uppers[base + 2] = -0.506, 1.885
        lowers[base + 3], uppers[base + 3] = -0.366, 2.042
    lowers[18], uppers[18] = -0.31, 2.23
    lowers[19], uppers[19] = -1.047, 1.047
    lowers[20], uppers[20] = -0.506, 1.885
    lowers[21], uppers[21] = -0.366, 2.042

    lengths = [[TL1, TL2, TL3], [L1, L2, L3], [L1, L2, L3],
               [0.0, 0.0, 0.0], [L1, L2, L3]]
    data = {
        "palm_radius": 0.042,
        "finger_radii": [0.014] * 5,
        "finger_lengths": [v for row in lengths for v in row],
        "joint_origins": [v for row in origins for v in row],
        "joint_axes": [v for row in axes for v in row],
        "joint_lowers": lowers,
        "joint_uppers": uppers,
        "handedness": "right",
    }
    write(OUT / "leap_extended.json", json.dumps(data, indent=2) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    make_shadow()
    make_allegro()
    make_leap()
    make_barrett()
    make_leap_extended()


if __name__ == "__main__":
    main()

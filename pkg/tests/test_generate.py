"""URDF generation, promotion, and LEAP variants."""

import itertools

import numpy as np
import pytest

from canonhand import (
    ExtendedHandParams,
    LeapVariantId,
    active_dof,
    auto_annotation,
    enumerate_variants,
    extract_all,
    fk_urdf,
    generate_extended_urdf,
    generate_urdf,
    make_leap_variant,
    parse_urdf,
    promote,
)
from canonhand.errors import InvalidParams, InvalidVariant
from canonhand.morpho import sample_morphology
from canonhand import slots

from conftest import FIXTURES, full_hand_params, random_roundtrip_params


def test_zero_dof_hand_is_palm_only():
    p = full_hand_params(joint_lowers=np.zeros(22), joint_uppers=np.zeros(22))
    model = parse_urdf(generate_urdf(p))
    assert len(model.joints) == 0
    assert [l.name for l in model.links] == ["palm"]


def test_shadow_parameter_set_emits_22_revolute(fixture_models):
    model, ann = fixture_models["shadow_hand"]
    p = extract_all(model, ann)
    out = parse_urdf(generate_urdf(p))
    assert len(out.revolute_joints()) == 22


def test_revolute_count_equals_active_dof_over_samples():
    # joint emission is conditional on lower < upper, per slot
    for seed in range(1000):
        s = sample_morphology(seed)
        model = parse_urdf(generate_urdf(s.params))
        assert len(model.revolute_joints()) == active_dof(s.params), seed
        assert len(model.links) == len(model.joints) + 1


def test_generation_is_deterministic(full_hand):
    assert generate_urdf(full_hand) == generate_urdf(full_hand)


def test_invalid_params_rejected(full_hand):
    lowers = full_hand.joint_lowers.copy()
    lowers[3] = 2.0  # above the upper limit
    bad = full_hand_params(joint_lowers=lowers)
    with pytest.raises(InvalidParams):
        generate_urdf(bad)


def test_capsule_tag_flag(full_hand):
    text = generate_urdf(full_hand, capsule_tag=True)
    assert "<capsule" in text
    model = parse_urdf(text)
    assert len(model.revolute_joints()) == 22


def test_left_hand_generates_and_parses(full_hand):
    from canonhand import mirror_handedness
    left = mirror_handedness(full_hand)
    model = parse_urdf(generate_urdf(left))
    assert len(model.revolute_joints()) == 22


def test_joint_names_follow_slot_scheme(full_hand):
    model = parse_urdf(generate_urdf(full_hand))
    names = [j.name for j in model.revolute_joints()]
    assert names[:5] == [f"thumb_joint{r}" for r in range(1, 6)]
    assert "little_joint1" in names and "ring_joint4" in names


# -- promote -----------------------------------------------------------------------

def test_promote_scalar_count_and_zero_dof():
    p = full_hand_params(joint_lowers=np.zeros(22), joint_uppers=np.zeros(22))
    e = promote(p)
    assert e.to_flat().shape == (173,)
    assert active_dof(e) == 0


def test_promote_preserves_fk(fixture_models):
    model, ann = fixture_models["shadow_hand"]
    p = extract_all(model, ann)
    canon = parse_urdf(generate_urdf(p))
    ext = parse_urdf(generate_extended_urdf(promote(p)))
    rng = np.random.default_rng(3)
    names = [j.name for j in canon.revolute_joints()]
    assert names == [j.name for j in ext.revolute_joints()]
    worst = 0.0
    for _ in range(100):
        values = {j.name: rng.uniform(j.lower, j.upper)
                  for j in canon.revolute_joints()}
        fa = fk_urdf(canon, values)
        fb = fk_urdf(ext, values)
        for name in fa:
            d = float(np.linalg.norm(fa[name].translation - fb[name].translation))
            worst = max(worst, d)
    assert worst < 1e-9


def test_promote_fk_on_random_hands():
    rng = np.random.default_rng(4)
    for _ in range(20):
        p = random_roundtrip_params(rng)
        canon = parse_urdf(generate_urdf(p))
        ext = parse_urdf(generate_extended_urdf(promote(p)))
        values = {j.name: rng.uniform(j.lower, j.upper)
                  for j in canon.revolute_joints()}
        fa = fk_urdf(canon, values)
        fb = fk_urdf(ext, values)
        for name in fa:
            assert np.linalg.norm(fa[name].translation - fb[name].translation) < 1e-9


# -- extended template -------------------------------------------------------------

def leap_base() -> ExtendedHandParams:
    return ExtendedHandParams.load(FIXTURES / "leap_extended.json")


def test_extended_swapped_fingers_put_flexion_first():
    e = leap_base()
    model = parse_urdf(generate_extended_urdf(e))
    j1 = model.joint("index_joint1")
    j2 = model.joint("index_joint2")
    assert j1.axis == (0.0, 1.0, 0.0)      # flexion at the knuckle
    assert j2.axis == (1.0, 0.0, 0.0)      # abduction one link up
    assert abs(j2.xyz[2] - 0.049) < 1e-12  # relocated by L1


def test_extended_zero_range_finger_absent_from_xml():
    e = leap_base()
    text = generate_extended_urdf(e)
    assert "ring_" not in text
    assert "little_joint1" not in text  # the unused extra slot


def test_extended_roundtrip_active_dof():
    e = leap_base()
    model = parse_urdf(generate_extended_urdf(e))
    assert len(model.revolute_joints()) == active_dof(e) == 16


# -- LEAP variants -------------------------------------------------------------------

def test_variant_identity_and_extremes():
    base = leap_base()
    v3333 = make_leap_variant(base, LeapVariantId(3, 3, 3, 3))
    assert np.array_equal(v3333.to_flat(), base.to_flat())
    assert active_dof(v3333) == 16
    assert active_dof(make_leap_variant(base, LeapVariantId(0, 0, 0, 0))) == 0


def test_variant_3033_removes_index():
    base = leap_base()
    v = make_leap_variant(base, LeapVariantId(3, 0, 3, 3))
    assert active_dof(v) == 12
    model = parse_urdf(generate_extended_urdf(v))
    assert "index_" not in generate_extended_urdf(v)
    tips = [l.name for l in model.links if l.name.endswith("_tip")]
    assert sorted(tips) == ["little_tip", "middle_tip", "thumb_tip"]


def test_variant_k_links_keep_k_plus_one_joints():
    base = leap_base()
    for k in range(4):
        v = make_leap_variant(base, LeapVariantId(3, k, 3, 3))
        index_active = sum(1 for i in slots.finger_slots(slots.INDEX)
                           if v.joint_lowers[i] < v.joint_uppers[i])
        assert index_active == (k + 1 if k > 0 else 0)
        model = parse_urdf(generate_extended_urdf(v))
        capsule_links = [l for l in model.links
                         if l.name.startswith("index_") and l.geoms]
        assert len(capsule_links) == k


def test_variant_digit_out_of_range():
    with pytest.raises(InvalidVariant):
        LeapVariantId(4, 0, 0, 0)
    with pytest.raises(InvalidVariant):
        LeapVariantId.parse("leap_123")


def test_variant_name_parse_roundtrip():
    vid = LeapVariantId(2, 0, 3, 1)
    assert vid.name == "leap_2031"
    assert LeapVariantId.parse(vid.name) == vid


def test_enumerate_matches_bruteforce_counting():
    # oracle: count tuples directly
    for mt in (0, 5, 8, 12):
        expected = sum(1 for t in itertools.product(range(4), repeat=4)
                       if sum(t) >= mt)
        got = enumerate_variants(mt)
        assert len(got) == expected
        assert got == sorted(got, key=lambda v: (v.x, v.y, v.z, v.w))
    assert len(enumerate_variants(0)) == 256
    assert len(enumerate_variants(8)) == 66
    assert [v.name for v in enumerate_variants(12)] == ["leap_3333"]


def test_variant_fk_shows_three_fingers():
    base = leap_base()
    v = make_leap_variant(base, LeapVariantId(3, 0, 3, 3))
    model = parse_urdf(generate_extended_urdf(v))
    poses = fk_urdf(model)
    assert "thumb_tip" in poses and "index_tip" not in poses

"""URDF parsing, tree validation, serialization round-trip."""

import numpy as np
import pytest

from canonhand import generate_urdf, model_to_xml, parse_urdf
from canonhand.errors import (
    CycleDetected,
    MalformedXml,
    MeshNotFound,
    MultipleRoots,
    UnresolvedLinkRef,
)

from conftest import FIXTURES, HAND_FIXTURES, full_hand_params


MINIMAL = '<robot name="m"><link name="base"/></robot>'

TWO_LINK = """
<robot name="two">
  <link name="base"/>
  <link name="arm"/>
  <joint name="j1" type="revolute">
    <parent link="base"/><child link="arm"/>
    <origin xyz="0 0 0.1" rpy="0 0 0"/>
    <axis xyz="0 0 1"/>
    <limit lower="-1.0" upper="1.0" effort="1" velocity="1"/>
  </joint>
</robot>
"""


def test_minimal_urdf():
    model = parse_urdf(MINIMAL)
    assert model.root_link == "base"
    assert len(model.links) == 1 and len(model.joints) == 0


def test_two_link_limits_preserved_exactly():
    model = parse_urdf(TWO_LINK)
    assert model.root_link == "base"
    j = model.joint("j1")
    assert (j.lower, j.upper) == (-1.0, 1.0)
    assert j.axis == (0.0, 0.0, 1.0)


def test_unresolved_child_link():
    bad = TWO_LINK.replace('<child link="arm"/>', '<child link="missing_link"/>')
    with pytest.raises(UnresolvedLinkRef, match="missing_link"):
        parse_urdf(bad)


def test_multiple_roots():
    bad = MINIMAL.replace('<link name="base"/>',
                          '<link name="base"/><link name="orphan"/>')
    with pytest.raises(MultipleRoots):
        parse_urdf(bad)


def test_cycle_and_multi_parent_rejected():
    cyc = """
    <robot name="c">
      <link name="a"/><link name="b"/>
      <joint name="j1" type="fixed"><parent link="a"/><child link="b"/></joint>
      <joint name="j2" type="fixed"><parent link="b"/><child link="a"/></joint>
    </robot>"""
    with pytest.raises(CycleDetected):
        parse_urdf(cyc)
    diamond = """
    <robot name="d">
      <link name="a"/><link name="b"/><link name="c"/>
      <joint name="j1" type="fixed"><parent link="a"/><child link="c"/></joint>
      <joint name="j2" type="fixed"><parent link="b"/><child link="c"/></joint>
    </robot>"""
    with pytest.raises(CycleDetected):
        parse_urdf(diamond)


def test_malformed_xml():
    with pytest.raises(MalformedXml):
        parse_urdf("<robot name='x'><link name='a'>")
    with pytest.raises(MalformedXml):
        parse_urdf("<notrobot/>")


def test_revolute_without_limit_rejected():
    bad = TWO_LINK.replace(
        '<limit lower="-1.0" upper="1.0" effort="1" velocity="1"/>', "")
    with pytest.raises(MalformedXml):
        parse_urdf(bad)


def test_continuous_joint_gets_pi_range():
    text = TWO_LINK.replace('type="revolute"', 'type="continuous"').replace(
        '<limit lower="-1.0" upper="1.0" effort="1" velocity="1"/>', "")
    j = parse_urdf(text).joint("j1")
    assert j.lower == -np.pi and j.upper == np.pi
    assert j.is_revolute()


def test_axis_gets_normalized_but_unit_axes_keep_bits():
    text = TWO_LINK.replace('xyz="0 0 1"', 'xyz="0 0 4"')
    assert parse_urdf(text).joint("j1").axis == (0.0, 0.0, 1.0)
    odd = (0.123456789, 0.987654321, -0.4)
    n = float(np.linalg.norm(odd))
    unit = tuple(float(v) / n for v in odd)
    text = TWO_LINK.replace('xyz="0 0 1"', f'xyz="{unit[0]!r} {unit[1]!r} {unit[2]!r}"')
    assert parse_urdf(text).joint("j1").axis == unit


def test_missing_mesh_is_hard_error(tmp_path):
    text = """
    <robot name="m"><link name="base">
      <collision><geometry><mesh filename="nope.stl"/></geometry></collision>
    </link></robot>"""
    with pytest.raises(MeshNotFound):
        parse_urdf(text, asset_root=tmp_path)
    with pytest.raises(MeshNotFound):
        parse_urdf(text.replace("nope.stl", "package://pkg/nope.stl"),
                   asset_root=tmp_path)


@pytest.mark.parametrize("name", HAND_FIXTURES)
def test_fixture_trees_have_links_equal_joints_plus_one(name):
    model = parse_urdf((FIXTURES / f"{name}.urdf").read_text())
    assert len(model.links) == len(model.joints) + 1


def test_serialize_parse_roundtrip_on_generated_subset():
    p = full_hand_params()
    model = parse_urdf(generate_urdf(p))
    again = parse_urdf(model_to_xml(model))
    assert again == model


def test_descendants_and_parent_navigation():
    model = parse_urdf(generate_urdf(full_hand_params()))
    kids = model.descendants("index_link1")
    assert "index_link4" in kids and "index_tip" in kids
    assert model.parent_joint("index_link1").parent == "palm"

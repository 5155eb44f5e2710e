import pytest

from bisetkit.automorphisms import out_group
from bisetkit.burnside import identity
from bisetkit.essential import (
    hombar, ideal, is_out_group_algebra, out_coordinates, proper_subquotients, to_out_algebra,
)
from bisetkit.grammar import load_group
from bisetkit.groups import iso_name


@pytest.mark.parametrize("name", ["1", "C2", "C3", "V4", "C5", "S3", "A4"])
def test_hombar_is_the_out_group_algebra(name):
    H = load_group(name)
    assert hombar(H, H).dim == out_group(H).order
    assert is_out_group_algebra(H)


def test_hombar_c2(c2):
    hb = hombar(c2, c2)
    assert hb.dim == 1
    assert hb.ideal.dim == 4
    assert hb.to_json()["ambient_dim"] == 5


def test_hombar_from_trivial_group(c1, c2):
    # 平凡群没有真截段，理想为零
    hb = hombar(c1, c2)
    assert hb.ideal.dim == 0
    assert hb.dim == 2


def test_proper_subquotients(s3):
    assert [iso_name(q) for q in proper_subquotients(s3)] == ["C3", "C2", "1"]


@pytest.mark.parametrize("h, k", [("C2", "S3"), ("S3", "S3"), ("C3", "V4")])
def test_early_stop_matches_exhaustive_ideal(h, k):
    H, K = load_group(h), load_group(k)
    assert ideal(H, K) == ideal(H, K, exhaustive=True)


def test_out_action_is_a_right_action(v4):
    hb = hombar(v4, v4)
    out = hb.out
    m = hb.out_matrices
    for i in range(out.order):
        for j in range(out.order):
            assert m[out.mul(i, j)] == m[j] @ m[i]


def test_identity_class_acts_trivially(v4):
    hb = hombar(v4, v4)
    x = hb.project_element(identity(v4))
    assert hb.out_action(x, 0) == x
    assert all(hb.out_action(x, phi) for phi in range(hb.out.order))


def test_out_coordinates(c3):
    assert out_coordinates(c3).rank() == 2
    hb = hombar(c3, c3)
    x = hb.project_element(identity(c3))
    assert to_out_algebra(c3, x) == {0: 1}


@pytest.mark.slow
def test_hombar_a4_a5(a5):
    a4 = next(s.quotient for s in a5.section_classes if iso_name(s.quotient) == "A4")
    hb = hombar(a4, a5)
    assert hb.dim == 2

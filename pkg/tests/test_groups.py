import pytest

from bisetkit.automorphisms import automorphism_list, isomorphisms, out_group
from bisetkit.errors import BoundExceeded, NotASubgroup
from bisetkit.grammar import load_group, parse_group
from bisetkit.groups import IsoRegistry, canonical_key, canonical_table, iso_name, iso_test


@pytest.mark.parametrize("text, order", [
    ("1", 1), ("C2", 2), ("C6", 6), ("S3", 6), ("V4", 4), ("D8", 8), ("Q8", 8), ("A4", 12), ("A5", 60),
    ("C2xC2", 4), ("C2xS3", 12),
])
def test_orders(text, order):
    assert parse_group(text).order == order


def test_identity_has_index_zero(a4):
    assert a4.elements[0] == tuple(range(a4.degree))
    assert all(a4.mul(0, x) == x for x in range(a4.order))


@pytest.mark.parametrize("text, keys", [
    ("S3", ["1", "C2", "C3", "S3"]),
    ("A4", ["1", "C2", "C3", "V4", "A4"]),
])
def test_subgroup_classes(text, keys):
    assert [c.key for c in load_group(text).subgroup_classes] == keys


def test_a5_has_nine_subgroup_classes(a5):
    classes = a5.subgroup_classes
    assert len(classes) == 9
    assert sum(c.size for c in classes) == len(a5.all_subgroups)
    assert {c.key for c in classes} >= {"1", "C2", "C3", "V4", "C5", "S3", "D10", "A4", "A5"}


def test_iso_names():
    assert iso_name(parse_group("C2xC2")) == "V4"
    assert iso_name(parse_group("C2xC3")) == "C6"
    assert iso_name(parse_group("S3")) == "S3"
    assert iso_name(parse_group("D6")) == "S3"
    assert iso_test(parse_group("C4"), parse_group("V4")) is None


def test_sections_of_a4(a4):
    quotients = {iso_name(s.quotient) for s in a4.section_classes}
    assert quotients == {"A4", "V4", "C3", "C2", "1"}
    for s in a4.section_classes:
        assert len(s.P) == len(s.K) * s.quotient_order
        assert a4.is_normal_in(s.K, s.P)


def test_normal_subgroup_checks(s3):
    c3 = next(c.rep for c in s3.subgroup_classes if c.key == "C3")
    c2 = next(c.rep for c in s3.subgroup_classes if c.key == "C2")
    assert s3.is_normal_in(c3, s3.full)
    assert not s3.is_normal_in(c2, s3.full)
    with pytest.raises(NotASubgroup):
        s3.quotient(s3.full, c2)
    with pytest.raises(NotASubgroup):
        s3.check_subgroup({1})


def test_bound_exceeded():
    with pytest.raises(BoundExceeded) as info:
        parse_group("S6", bound=100)
    assert info.value.bound == 100
    assert "S6" in str(info.value)


@pytest.mark.parametrize("text, aut, out", [
    ("1", 1, 1), ("C2", 1, 1), ("C3", 2, 2), ("C5", 4, 4), ("V4", 6, 6), ("S3", 6, 1), ("A4", 24, 2),
])
def test_automorphism_and_out_orders(text, aut, out):
    G = load_group(text)
    assert len(automorphism_list(G)) == aut
    assert out_group(G).order == out


def test_out_group_table_is_a_group(v4):
    out = out_group(v4)
    n = out.order
    assert all(out.mul(0, i) == i for i in range(n))
    assert all(out.mul(i, out.inverse(i)) == 0 for i in range(n))
    assert len(isomorphisms(v4, parse_group("C2xC2"))) == 6


def test_out_group_cosets(a4):
    out = out_group(a4)
    assert out.aut_order == out.order * out.inn_order
    assert out.classify(out.reps[0]) == 0
    assert {out.classify(phi) for phi in automorphism_list(a4)} == set(range(out.order))


REGULAR_S3 = "gens:(1 2 3)(4 5 6);(1 4)(2 6)(3 5)"


def test_canonical_table_of_c3():
    assert canonical_table(parse_group("C3")) == ((0, 1, 2), (1, 2, 0), (2, 0, 1))
    assert canonical_table(parse_group("A5")) is None


@pytest.mark.parametrize("a, b", [
    ("S3", REGULAR_S3), ("C6", "C2xC3"), ("D12", "C2xS3"), ("V4", "C2xC2"), ("C2xC4", "C4xC2"),
])
def test_canonical_key_is_an_isomorphism_invariant(a, b):
    ga, gb = parse_group(a), parse_group(b)
    assert ga.elements != gb.elements
    assert canonical_key(ga) == canonical_key(gb)


@pytest.mark.parametrize("texts", [
    ["C4", "V4"],
    ["C8", "C4xC2", "C2xC2xC2", "D8", "Q8"],
    ["C12", "C2xC6", "D12", "A4"],
    ["C4xC4", "Q8xC2"],
])
def test_canonical_keys_separate_classes(texts):
    keys = [canonical_key(parse_group(t)) for t in texts]
    assert len(set(keys)) == len(keys)


def test_names_do_not_depend_on_registration_order():
    # 两者元素阶分布相同且都不在命名表中
    texts = ["C4xC4", "Q8xC2"]
    first, second = IsoRegistry(), IsoRegistry()
    a = [first.name(parse_group(t)) for t in texts]
    b = [second.name(parse_group(t)) for t in reversed(texts)]
    assert a == list(reversed(b))
    assert a[0] != a[1]
    assert all(name.startswith("G16_") and "~" not in name for name in a)

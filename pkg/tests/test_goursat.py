import pytest

from bisetkit.goursat import (
    are_conjugate, datum_to_subgroup, direct_product, product_basis, product_subgroup_classes, subgroup_to_datum,
)
from bisetkit.grammar import load_group
from bisetkit.selftest import GOURSAT_GROUPS


def test_basis_of_c2_c2(c2):
    basis = product_basis(c2, c2)
    assert len(basis) == 5
    assert [lab.index for lab in basis] == list(range(5))
    assert basis[0].order == 4


def test_small_bases(c1, c2):
    assert len(product_basis(c1, c1)) == 1
    assert len(product_basis(c2, c1)) == 2
    assert len(product_basis(c1, c2)) == 2


def test_labels_sorted_by_order(s3):
    orders = [lab.order for lab in product_basis(s3, s3)]
    assert orders == sorted(orders, reverse=True)


_ORDERS = {name: load_group(name).order for name in GOURSAT_GROUPS}
_PAIRS = [
    pytest.param(a, b, marks=pytest.mark.slow) if _ORDERS[a] * _ORDERS[b] > 32 else (a, b)
    for a in GOURSAT_GROUPS for b in GOURSAT_GROUPS
    if _ORDERS[a] * _ORDERS[b] <= 64
]


@pytest.mark.parametrize("left, right", _PAIRS)
def test_counts_match_brute_force(left, right):
    G, H = load_group(left), load_group(right)
    prod, _ = direct_product(G, H)
    assert len(product_basis(G, H)) == len(prod.subgroup_classes)


@pytest.mark.parametrize("first, second", [
    ("gens:(1 2 3);(1 2)", "gens:(1 2);(2 3)"),
    ("gens:(1 2 3 4);(1 3)", "gens:(1 4)(2 3);(1 2 3 4)"),
    ("gens:(1 2)(3 4);(1 2 3)", "gens:(1 3 2);(1 4)(2 3)"),
])
def test_keys_do_not_depend_on_generators(first, second):
    G, H = load_group(first), load_group(second)
    assert G is not H
    assert G.elements == H.elements
    assert [lab.key for lab in product_basis(G, G)] == [lab.key for lab in product_basis(H, H)]
    assert [c.key for c in G.subgroup_classes] == [c.key for c in H.subgroup_classes]


def test_labels_pairwise_non_conjugate(s3, c2):
    labels = list(product_basis(s3, c2))
    for i, a in enumerate(labels):
        assert are_conjugate(s3, c2, a.elements(), a.elements())
        for b in labels[i + 1:]:
            assert not are_conjugate(s3, c2, a.elements(), b.elements())


def test_identify_recovers_labels(s3, c2):
    basis = product_basis(s3, c2)
    for lab in basis:
        assert basis.identify_pairs(lab.elements()) is lab
        assert basis.by_key(lab.key) is lab


def test_identify_conjugated_subgroup(s3):
    basis = product_basis(s3, s3)
    for lab in basis:
        for g in s3.generators:
            moved = {(s3.conj(g, x), y) for x, y in lab.elements()}
            assert basis.identify_pairs(moved) is lab


def test_product_subgroup_classes_is_the_basis(c2, s3):
    assert product_subgroup_classes(c2, s3) == list(product_basis(c2, s3))
    assert len(product_subgroup_classes(c2, c2)) == 5


def test_datum_of_a_label(s3, c2):
    for lab in product_basis(s3, c2):
        d = subgroup_to_datum(s3, c2, lab.elements())
        assert len(datum_to_subgroup(d)) == lab.order
        assert (d.P1, d.K1, d.P2, d.K2) == (lab.left.P, lab.left.K, lab.right.P, lab.right.K)

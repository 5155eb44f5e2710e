import pytest

from bisetkit import burnside
from bisetkit.burnside import (
    AlgebraTable, BisetElement, compose, compose_by_orbits, compose_labels, deflation, identity, induction,
    elementary, inflation, isogation, opposite, restriction, structure_constants,
)
from bisetkit.errors import InvalidData, SourceTargetMismatch
from bisetkit.goursat import product_basis
from bisetkit.grammar import load_group
from bisetkit.groups import DEFAULT_BOUND


@pytest.mark.parametrize("name", [
    "C2", "C3", "C4", "V4", "C5", "S3", "C6",
    pytest.param("D8", marks=pytest.mark.slow),
    pytest.param("Q8", marks=pytest.mark.slow),
    pytest.param("A4", marks=pytest.mark.slow),
])
def test_composition_matches_orbit_oracle(name):
    G = load_group(name)
    basis = product_basis(G, G)
    for a in basis:
        for b in basis:
            assert compose_labels(a, b) == compose_by_orbits(a, b)


def test_mixed_composition_matches_orbit_oracle(c2, s3, c3):
    for a in product_basis(c2, s3):
        for b in product_basis(s3, c3):
            assert compose_labels(a, b) == compose_by_orbits(a, b)


@pytest.mark.parametrize("name", ["C2", "C3", "C2xC2", "S3"])
def test_associativity(name):
    assert structure_constants(load_group(name)).is_associative()


def test_identity_is_neutral(s3):
    one = identity(s3)
    for lab in product_basis(s3, s3):
        x = BisetElement.of(lab)
        assert compose(one, x) == x
        assert compose(x, one) == x


def test_opposite_is_an_anti_involution(s3, c2):
    for lab in product_basis(s3, c2):
        x = BisetElement.of(lab)
        assert opposite(opposite(x)) == x
        for lab2 in product_basis(c2, s3):
            y = BisetElement.of(lab2)
            assert opposite(compose(x, y)) == compose(opposite(y), opposite(x))


def test_restriction_after_induction(c2):
    sub, emb = c2.subgroup_group(c2.trivial)
    x = compose(restriction(c2, sub, emb), induction(c2, sub, emb))
    assert x.coeffs == {0: 2}


def test_deflation_after_inflation(c2):
    x = compose(deflation(c2, c2.full), inflation(c2, c2.full))
    assert x.coeffs == {0: 1}


def test_isogation(s3):
    assert isogation(s3, s3, tuple(range(s3.order))) == identity(s3)
    with pytest.raises(InvalidData):
        isogation(s3, s3, (0,) * s3.order)


def test_source_target_mismatch(c2, c3):
    with pytest.raises(SourceTargetMismatch):
        compose(identity(c2), identity(c3))


def test_algebra_table(c3):
    table = structure_constants(c3)
    assert table.dim == len(product_basis(c3, c3))
    one = {table.identity_index: 1}
    for k in range(table.dim):
        assert table.mul(one, {k: 1}) == {k: 1}
    again = AlgebraTable.from_json(c3, table.to_json())
    assert again.products == table.products


def test_parallel_table_matches_serial(s3):
    serial = structure_constants(s3)
    parallel = structure_constants(s3, jobs=2)
    assert parallel.to_json() == serial.to_json()


def test_worker_rows_align_by_key(s3, monkeypatch):
    monkeypatch.setitem(burnside._WORKER, "basis", None)
    burnside._init_worker("S3", DEFAULT_BOUND)
    basis = product_basis(s3, s3)
    assert burnside._WORKER["basis"] is not basis
    lab = basis[3]
    key, row = burnside._row(lab.key)
    assert key == lab.key
    assert burnside._align_row(basis, row) == [tuple(sorted(compose_labels(lab, b))) for b in basis]


def test_worker_row_from_another_basis_is_rejected(s3, c3, monkeypatch):
    monkeypatch.setitem(burnside._WORKER, "basis", product_basis(c3, c3))
    with pytest.raises(InvalidData):
        burnside._row("no-such-label")
    _, row = burnside._row(product_basis(c3, c3)[0].key)
    with pytest.raises(InvalidData):
        burnside._align_row(product_basis(s3, s3), row)


def test_elementary_dispatch(c2):
    assert elementary("Def", G=c2, normal=c2.full) == deflation(c2, c2.full)
    with pytest.raises(InvalidData):
        elementary("Tr", G=c2)
    with pytest.raises(InvalidData):
        elementary("Inf", G=c2)

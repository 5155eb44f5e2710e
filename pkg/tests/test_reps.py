import pytest

from bisetkit.automorphisms import out_group
from bisetkit.burnside import structure_constants
from bisetkit.errors import CatalogIncomplete, InvalidData
from bisetkit.functors import evaluator
from bisetkit.grammar import load_group
from bisetkit.linalg import QMatrix, unit
from bisetkit.reps import (
    MatrixAlgebra, ModuleRep, commutant, factor_charpoly, multiplicities, out_simple, qout_simples,
    quotient_rep, radical_of_algebra,
)


@pytest.mark.parametrize("name, simples", [
    ("1", ["triv"]),
    ("C3", ["triv", "sgn"]),
    ("C5", ["triv", "sgn", "2dim"]),
    ("V4", ["triv", "sgn", "2dim"]),
    ("A4", ["triv", "sgn"]),
])
def test_rational_simples(name, simples):
    out = out_group(load_group(name))
    assert [s.name for s in qout_simples(out)] == simples


def test_c5_endomorphism_dims():
    # Out(C5) 循环 4 阶，忠实表示在 Q 上不可分裂
    out = out_group(load_group("C5"))
    assert [s.end_dim for s in qout_simples(out)] == [1, 1, 2]
    assert [s.dim for s in qout_simples(out)] == [1, 1, 2]


@pytest.mark.parametrize("name", ["C3", "C5", "V4", "A4"])
def test_simples_are_representations(name):
    out = out_group(load_group(name))
    for s in qout_simples(out):
        assert s.is_representation()
        assert s.is_self_dual()


def test_out_simple_lookup():
    out = out_group(load_group("V4"))
    assert out_simple(out, "2dim").dim == 2
    with pytest.raises(KeyError):
        out_simple(out, "3dim")


def test_regular_module_relations(c2):
    table = structure_constants(c2)
    assert ModuleRep.regular(table).check_relations()


def test_radical_of_semisimple_algebra_is_zero(c1):
    assert radical_of_algebra(structure_constants(c1)).dim == 0


def test_duplicate_catalog_is_rejected(c2):
    reg = ModuleRep.regular(structure_constants(c2))
    with pytest.raises(CatalogIncomplete):
        multiplicities(reg, {"a": reg, "b": reg})


def test_commutant_of_identity():
    assert len(commutant([QMatrix.identity(2)])) == 4


def test_factor_charpoly_splits_distinct_eigenvalues():
    assert len(factor_charpoly(QMatrix.from_rows([[1, 0], [0, 2]]))) == 2
    assert len(factor_charpoly(QMatrix.from_rows([[0, -1], [1, 0]]))) == 1


def test_quotient_by_cyclic_submodule(c2):
    table = structure_constants(c2)
    reg = ModuleRep.regular(table)
    # 商为平凡群的基元生成真左理想
    k = next(i for i, lab in enumerate(table.basis) if lab.quotient_order == 1)
    w = reg.spin([unit(k)])
    assert 0 < w.dim < reg.dim
    q = quotient_rep(reg, w)
    assert q.dim == reg.dim - w.dim
    assert q.check_relations()


I2 = QMatrix.identity(2)
E11 = QMatrix.from_rows([[1, 0], [0, 0]])
E12 = QMatrix.from_rows([[0, 1], [0, 0]])
E21 = QMatrix.from_rows([[0, 0], [1, 0]])
ROT = QMatrix.from_rows([[0, -1], [1, 0]])


def test_triangular_algebra_is_not_local():
    alg = MatrixAlgebra([I2, E11, E12])
    assert alg.dim == 3
    assert alg.radical.dim == 1
    assert alg.top_dim == 2
    witness = alg.nonlocal_witness()
    assert witness is not None and len(factor_charpoly(witness)) > 1


def test_gaussian_field_is_local():
    alg = MatrixAlgebra([I2, ROT])
    assert alg.radical.dim == 0
    assert len(alg.center()) == 2
    assert alg.is_local()


def test_dual_numbers_are_local():
    alg = MatrixAlgebra([I2, E12])
    assert alg.radical.dim == 1
    assert alg.is_local()


def test_full_matrix_algebra_is_not_local():
    alg = MatrixAlgebra(commutant([I2]))
    assert alg.dim == 4 and alg.radical.dim == 0
    assert len(alg.center()) == 1
    assert not alg.is_local()


def test_span_must_be_closed():
    with pytest.raises(InvalidData):
        MatrixAlgebra([I2, E12, E21])


def test_c5_faithful_commutant_is_a_field():
    out = out_group(load_group("C5"))
    s = out_simple(out, "2dim")
    alg = MatrixAlgebra(commutant(list(s.action)))
    assert alg.dim == 2
    assert alg.is_local()


def test_regular_module_is_decomposable(c2):
    reg = ModuleRep.regular(structure_constants(c2))
    assert not reg.is_indecomposable()


@pytest.mark.parametrize("v", ["triv", "sgn"])
def test_delta_c3_at_a4_is_indecomposable(a4, v):
    ev = evaluator(a4)
    assert ev.delta(ev.category.label("C3", v)).module.is_indecomposable()

from fractions import Fraction

import pytest

from bisetkit.errors import DimensionMismatch, InconsistentSystem
from bisetkit.linalg import QMatrix, Subspace, induce_quotient, restrict, solve, spin, unit


def test_rank_and_kernel():
    m = QMatrix.from_rows([[1, 2], [2, 4]])
    assert m.rank() == 1
    ker = m.kernel()
    assert ker.shape == (1, 2)
    assert ker.row(0) == {0: -2, 1: 1}
    assert m.apply(ker.row(0)) == {}


def test_solve_and_inconsistent_system():
    a = QMatrix.from_rows([[1, 1], [1, -1]])
    assert solve(a, {0: 2}) == {0: 1, 1: 1}
    with pytest.raises(InconsistentSystem):
        solve(QMatrix.from_rows([[1], [1]]), {0: 1, 1: 2})


def test_inverse_and_singular():
    m = QMatrix.from_rows([[2, 0], [0, 4]])
    assert m.inv().to_fractions() == [[Fraction(1, 2), 0], [0, Fraction(1, 4)]]
    with pytest.raises(InconsistentSystem):
        QMatrix.from_rows([[1, 2], [2, 4]]).inv()


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        QMatrix.identity(2) @ QMatrix.identity(3)
    with pytest.raises(DimensionMismatch):
        QMatrix.identity(2) + QMatrix.zeros(2, 3)


def test_subspace_operations():
    a = Subspace.span([unit(0), unit(1)], 3)
    b = Subspace.span([unit(1), unit(2)], 3)
    assert (a + b).dim == 3
    meet = a.intersect(b)
    assert meet.dim == 1
    assert meet.contains(unit(1))
    assert not meet.contains(unit(0))
    assert meet.is_subspace_of(a)
    # 商空间 Q^3 / span{e0 + e1}
    line = Subspace.span([{0: 1, 1: 1}], 3)
    assert line.complement_columns() == [1, 2]
    assert line.quotient_coords({0: 1}) == {0: -1}
    assert line.quotient_coords({0: 1, 1: 1}) == {}


def test_spin_restrict_and_quotient():
    shift = QMatrix.from_columns([unit(1), unit(2), unit(0)], 3)
    assert spin([unit(0)], [shift], 3).dim == 3
    fixed = spin([{0: 1, 1: 1, 2: 1}], [shift], 3)
    assert fixed.dim == 1
    assert restrict(shift, fixed) == QMatrix.identity(1)
    q = induce_quotient(shift, fixed)
    assert q.shape == (2, 2)
    # 商上的作用仍满足 x^3 = 1
    assert q @ q @ q == QMatrix.identity(2)


def test_charpoly_and_trace():
    m = QMatrix.from_rows([[0, 1], [1, 0]])
    assert m.charpoly() == [1, 0, -1]
    assert m.trace() == 0
    assert m.power_apply(m.charpoly()).is_zero()

import pytest

from bisetkit.functors import (
    delta_eval, evaluator, nv_check, radical_compare, radical_table, simple_eval, vanishing_json,
)
from bisetkit.reps import multiplicities


def _factors(G, h, v):
    ev = evaluator(G)
    mult = multiplicities(delta_eval(h, v, G).module, ev.catalog())
    return {str(k): m for k, m in mult.items() if m}


def test_trivial_group(c1):
    assert delta_eval("1", "triv", c1).dim == 1
    assert simple_eval("1", "triv", c1).dim == 1
    assert nv_check(c1) == (True, [])


def test_c2_evaluations(c2):
    d = delta_eval("1", "triv", c2)
    assert d.dim == 2
    assert d.tensor_dim == 2
    assert delta_eval("C2", "triv", c2).dim == 1
    ok, offenders = nv_check(c2)
    assert ok and not offenders
    data = vanishing_json(c2)
    assert data["group"] == "C2"
    assert len(data["rows"]) == 2
    assert data["nv"] is True


def test_a4_vanishing_delta(a4):
    assert delta_eval("V4", "2dim", a4).dim == 0
    assert simple_eval("V4", "2dim", a4).vanishes


def test_a4_c2_delta_is_simple(a4):
    assert _factors(a4, "C2", "triv") == {"(C2, triv)": 1}


@pytest.mark.parametrize("v", ["triv", "sgn"])
def test_a4_c3_delta(a4, v):
    d = delta_eval("C3", v, a4)
    assert d.dim == 2
    assert d.module.is_indecomposable()
    assert _factors(a4, "C3", v) == {f"(A4, {v})": 1, f"(C3, {v})": 1}


def test_simple_is_delta_modulo_kernel(a4):
    s = simple_eval("C3", "sgn", a4)
    assert s.dim + s.kernel.dim == s.delta.dim
    n = s.module.algebra.dim
    assert s.module.check_relations([(i, (i + 1) % n) for i in range(n)])


def test_radical_inclusion_at_a4(a4):
    for row in radical_table(a4):
        assert row.included
    cmp = radical_compare("C3", "triv", a4)
    assert cmp.included
    assert cmp.to_json()["dim_delta"] == 2


def test_evaluator_is_shared(a4):
    assert evaluator(a4) is evaluator(a4)
    assert evaluator(a4).delta(evaluator(a4).category.label("C2", "triv")) is \
        evaluator(a4).delta(evaluator(a4).category.label("C2", "triv"))


@pytest.mark.slow
def test_a5_vanishing(a5):
    ok, offenders = nv_check(a5)
    assert not ok
    assert [str(lab) for lab in offenders] == ["(C3, sgn)"]
    assert delta_eval("C3", "sgn", a5).dim == 1
    assert simple_eval("C3", "sgn", a5).dim == 0

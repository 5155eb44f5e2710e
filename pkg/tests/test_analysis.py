from fractions import Fraction

import pytest

from bisetkit.analysis import analysis, cartan_matrix, decomposition_matrix, qh_certificate
from bisetkit.errors import InvalidData
from bisetkit.grammar import load_group


@pytest.mark.parametrize("name", ["1", "C2", "C3", "C4", "C6", "C2xC2"])
def test_small_groups_are_quasi_hereditary(name):
    cert = qh_certificate(load_group(name))
    assert cert.verdict, cert.to_json()
    assert cert.to_json()["verdict"] == "pass"


def test_c2_is_semisimple(c2):
    ana = analysis(c2)
    assert ana.radical.dim == 0
    assert cartan_matrix(c2).det() == 1
    dm = decomposition_matrix(c2)
    assert dm.rows == dm.cols
    assert dm.entries == [[1, 0], [0, 1]]
    for lab in ana.catalog:
        assert ana.pim(lab).loewy == [ana.pim(lab).dim]


@pytest.mark.parametrize("name", ["C2", "C3", "S3"])
def test_regular_bookkeeping(name):
    total, dim = analysis(load_group(name)).regular_bookkeeping()
    assert total == Fraction(dim)


def test_ext1_methods_agree(c2):
    ana = analysis(c2)
    for s in ana.catalog:
        for t in ana.catalog:
            assert ana.ext1(s, t, "cocycle").value == ana.ext1(s, t, "loewy").value == 0


@pytest.mark.parametrize("name", ["C3", "C4", "V4", "S3"])
def test_ext1_cocycles_match_loewy_layers(name):
    ana = analysis(load_group(name))
    for s in ana.catalog:
        for t in ana.catalog:
            assert ana.ext1(s, t, "cocycle").value == ana.ext1(s, t, "loewy").value, (str(s), str(t))


def test_ext1_cache_is_per_method(c2):
    ana = analysis(c2)
    s = next(iter(ana.catalog))
    assert ana.ext1(s, s, "loewy").method == "loewy"
    assert ana.ext1(s, s, "cocycle").method == "cocycle"
    assert ana.ext1(s, s, "loewy").method == "loewy"
    with pytest.raises(InvalidData):
        ana.ext1(s, s, "spectral")


@pytest.mark.parametrize("name", [
    "1", "C2", "C3", "C4", "V4", "C5", "S3",
    pytest.param("C6", marks=pytest.mark.slow),
    pytest.param("A4", marks=pytest.mark.slow),
])
def test_standard_modules_are_indecomposable(name):
    ev = analysis(load_group(name)).ev
    for lab in ev.labels:
        if ev.simple(lab).vanishes:
            continue
        assert ev.delta(lab).module.is_indecomposable(), str(lab)


def test_a4_bgg(a4):
    ana = analysis(a4)
    top = ana.ev.category.label("A4", "sgn")
    mult = {str(k): v for k, v in ana.delta_multiplicities(top).items()}
    assert mult == {"(A4, sgn)": 1, "(C3, sgn)": 1}
    assert ana.pim(top).dim == ana.bgg_rhs(top)


def test_a4_decomposition_is_unitriangular(a4):
    cert = qh_certificate(a4)
    assert cert.check("unitriangular").passed
    assert cert.check("nv").passed


def test_analysis_json(c3):
    data = analysis(c3).to_json()
    assert data["group"] == "C3"
    assert data["qh"]["verdict"] == "pass"
    assert data["witnesses"] == []


@pytest.mark.slow
def test_a5_self_extension(a5):
    ana = analysis(a5)
    lab = ana.ev.category.label("A4", "sgn")
    p = ana.pim(lab)
    assert p.dim == 2
    assert p.loewy == [1, 1]
    assert [{str(k): v for k, v in layer.factors.items()} for layer in p.layers] == \
        [{"(A4, sgn)": 1}, {"(A4, sgn)": 1}]
    assert ana.ext1(lab, lab).value == 1
    cert = ana.qh_certificate()
    assert not cert.verdict
    assert not cert.check("no_self_ext").passed
    assert cert.check("nv").witness == [{"H": "C3", "V": "sgn"}]

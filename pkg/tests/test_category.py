import pytest

from bisetkit.category import LabelOrder, Relation, SimpleLabel, category


def test_a4_objects(a4):
    cat = category(a4)
    assert cat.keys() == ["A4", "V4", "C3", "C2", "1"]
    assert len(cat.labels) == 9
    assert "S3" not in cat


def test_subquotient_relations(a4):
    cat = category(a4)
    assert cat.is_strict_subquotient("C2", "V4")
    assert cat.is_strict_subquotient("C3", "A4")
    assert not cat.is_strict_subquotient("C3", "V4")
    assert not cat.is_strict_subquotient("V4", "V4")
    assert cat.strict_subquotients("V4") == ["C2", "1"]
    assert cat.subquotient_order("V4", "V4") is Relation.EQUAL
    assert cat.subquotient_order("1", "C3") is Relation.STRICT
    assert cat.subquotient_order("A4", "C3") is Relation.OTHER


def test_lambda_order(a4):
    cat = category(a4)
    top, c3_sgn = cat.label("A4", "triv"), cat.label("C3", "sgn")
    assert cat.lambda_order(top, c3_sgn) is LabelOrder.LESS
    assert cat.lambda_order(c3_sgn, top) is LabelOrder.GREATER
    assert cat.lambda_order(top, top) is LabelOrder.EQUAL
    assert cat.lambda_order(cat.label("C3", "triv"), cat.label("V4", "triv")) is LabelOrder.INCOMPARABLE


def test_unknown_labels(a4):
    cat = category(a4)
    with pytest.raises(KeyError):
        cat.label("A4", "2dim")
    with pytest.raises(KeyError):
        cat.get("S3")


def test_label_format():
    lab = SimpleLabel("C3", "sgn")
    assert str(lab) == "(C3, sgn)"
    assert lab.to_json() == {"H": "C3", "V": "sgn"}

import pytest

from bisetkit.errors import GrammarError
from bisetkit.grammar import GRAMMAR_HELP, describe, load_group, parse_generators, parse_group


@pytest.mark.parametrize("text", ["", "X5", "C", "D7", "gens:(1 1)", "gens:(1 2) junk", "C2xx"])
def test_bad_descriptions(text):
    with pytest.raises(GrammarError):
        parse_group(text)


def test_grammar_help_in_message():
    with pytest.raises(GrammarError) as info:
        parse_group("X5")
    assert GRAMMAR_HELP in str(info.value)


def test_explicit_generators():
    G = parse_group("gens:(1 2 3);(1 2)")
    assert G.order == 6
    degree, gens = parse_generators("gens:(1 2)(3 4);(1 3)(2 4)")
    assert degree == 4
    assert len(gens) == 2


def test_describe_reparses(a4):
    again = parse_group(describe(a4.perm_generators))
    assert again.order == a4.order


def test_products_use_disjoint_points():
    G = parse_group("C2xC3")
    assert G.degree == 5
    assert G.order == 6


def test_load_group_is_shared():
    assert load_group("A4") is load_group(" A4 ")
    assert load_group("A4") is not parse_group("A4")

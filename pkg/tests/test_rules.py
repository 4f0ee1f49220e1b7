import pytest

from ftca.errors import BadRuleName
from ftca.grid import Kind
from ftca.rules import RuleClass, all_rules, classify, parse_rule


def test_parse_rule():
    assert parse_rule("23", "tri").activating_sums == {2, 3}
    assert parse_rule("phi", Kind.SQUARE).activating_sums == frozenset()
    assert parse_rule("phi", "sq").name == "phi"


@pytest.mark.parametrize("name, grid", [("32", "sq"), ("", "sq"), ("4", "tri"), ("1a", "sq"), ("22", "sq")])
def test_bad_rule_names(name, grid):
    with pytest.raises(BadRuleName):
        parse_rule(name, grid)


@pytest.mark.parametrize("name, grid, cls", [
    ("24", "sq", RuleClass.TURING_UNIVERSAL),
    ("2", "sq", RuleClass.TURING_UNIVERSAL),
    ("12", "tri", RuleClass.ALGEBRAIC),
    ("124", "sq", RuleClass.ALGEBRAIC),
    ("02", "sq", RuleClass.NON_QUIESCENT),
    ("23", "tri", RuleClass.TOPOLOGICAL),
    ("234", "sq", RuleClass.TOPOLOGICAL),
    ("phi", "tri", RuleClass.TRIVIAL),
    ("1234", "sq", RuleClass.TRIVIAL),
    ("1", "sq", RuleClass.FRACTAL_GROWING),
    ("13", "tri", RuleClass.FRACTAL_GROWING),
])
def test_classify(name, grid, cls):
    assert classify(parse_rule(name, grid)) is cls


def test_every_rule_is_classified():
    for kind in Kind:
        rules = all_rules(kind)
        assert len(rules) == 2 ** (kind is Kind.SQUARE and 5 or 4)
        for r in rules:
            assert isinstance(classify(r), RuleClass)

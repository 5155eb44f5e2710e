from bisetkit import selftest
from bisetkit.errors import SplitFailure


def test_quick_skips_a5():
    names = [name for name, _ in selftest.selftest_checks(quick=True)]
    assert "a5_report" not in names
    assert "a5_report" in [name for name, _ in selftest.selftest_checks(quick=False)]


def test_errors_mark_the_check_failed(monkeypatch):
    def broken():
        raise SplitFailure("no split")

    monkeypatch.setattr(selftest, "selftest_checks", lambda quick: [
        ("fine", lambda: (True, 3)),
        ("broken", broken),
    ])
    seen = []
    results = selftest.run_selftest(quick=True, on_check=seen.append)
    assert seen == ["fine", "broken"]
    assert results[0] == {"name": "fine", "passed": True, "detail": 3}
    assert results[1]["passed"] is False
    assert "SplitFailure" in results[1]["detail"]


def test_cheap_checks():
    assert selftest.check_basis_sizes()[0]
    assert selftest.check_associativity()[0]
    assert selftest.check_opposite()[0]


def test_a4_evaluations():
    passed, count = selftest.check_a4_evaluations()
    assert passed
    assert count >= 10


def test_orbit_groups_cover_small_orders():
    names = selftest.ORBIT_GROUPS + selftest.ORBIT_GROUPS_SLOW
    assert {"C4", "C6", "D8", "Q8", "A4"} <= set(names)

import re

import pytest

from bisetkit.errors import InvalidData, ReportMismatch
from bisetkit.report import A5Report, a5_report, report_json


def test_expect_records_facts():
    rep = A5Report(strict=False)
    facts = []
    rep._expect(facts, "one", 1, 1)
    rep._expect(facts, "two", 2, 3)
    assert [f["ok"] for f in facts] == [True, False]
    assert facts[1] == {"fact": "two", "expected": 2, "actual": 3, "ok": False}


def test_expect_strict_raises():
    rep = A5Report(strict=True)
    with pytest.raises(ReportMismatch):
        rep._expect([], "two", 2, 3)


def test_log_entry_format():
    logs = A5Report()._log({"logs": ["old"]}, "STEP", "body")
    assert logs[0] == "old"
    assert re.fullmatch(r"\[\d\d:\d\d:\d\d\] === STEP ===\nbody\n", logs[1])


def test_step_order():
    assert [name for name, _ in A5Report().steps()] == [
        "setup", "a4_facts", "v4_readings", "bgg", "a5_facts", "self_ext",
    ]


def test_graph_nodes():
    graph = A5Report().build()
    nodes = set(graph.get_graph().nodes)
    assert {"setup", "a4_facts", "v4_readings", "bgg", "a5_facts", "self_ext"} <= nodes


def test_unknown_step():
    with pytest.raises(InvalidData):
        A5Report().build(until="nope")


def test_setup_only_graph():
    steps = []
    state = A5Report(on_step=steps.append).run(until="setup")
    assert steps == ["setup"]
    assert set(state["groups"]) == {"A4", "A5"}
    assert state["groups"]["A5"].order == 60
    assert len(state["logs"]) == 1 and "=== SETUP ===" in state["logs"][0]


def test_a4_steps():
    steps = []
    state = A5Report(strict=True, on_step=steps.append).run(until="bgg")
    assert steps == ["setup", "a4_facts", "v4_readings", "bgg"]
    assert state["facts"] and all(f["ok"] for f in state["facts"])
    assert state["facts"][0]["fact"] == "Σ(A4) iso classes"
    assert state["facts"][-1]["fact"] == "[P(A4,sgn) : Δ] at A4"
    assert len(state["readings"]) == 2
    assert len(state["logs"]) == 4
    assert "=== A4 EVALUATIONS ===" in state["logs"][1]


def test_mismatch_raised_from_node(monkeypatch):
    rep = A5Report(strict=True)

    def wrong(state):
        facts = []
        rep._expect(facts, "planted", 1, 2)
        return {"facts": facts}

    monkeypatch.setattr(rep, "a4_facts_node", wrong)
    with pytest.raises(ReportMismatch):
        rep.run(until="a4_facts")


@pytest.mark.slow
def test_full_report():
    steps = []
    state = a5_report(strict=True, on_step=steps.append)
    assert steps == ["setup", "a4_facts", "v4_readings", "bgg", "a5_facts", "self_ext"]
    data = report_json(state)
    assert data["conclusion"] == "not quasi-hereditary, self-extension found"
    assert all(f["ok"] for f in data["facts"])
    assert data["witnesses"][0]["label"] == "(A4, sgn)"
    assert len(data["readings"]) == 2

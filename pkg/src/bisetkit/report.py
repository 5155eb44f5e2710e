"""
A5 报告流水线（langgraph StateGraph）
setup -> a4_facts -> v4_readings -> bgg -> a5_facts -> self_ext -> END
每个节点返回完整的 facts / logs 列表；strict 模式下断言失败在节点内抛出 ReportMismatch。
"""

import datetime
import logging
from typing import Any, Callable, Dict, List, Optional, Tuple, TypedDict

from langgraph.graph import END, StateGraph

from .analysis import analysis
from .burnside import compose, induction, restriction
from .category import SimpleLabel
from .errors import InvalidData, ReportMismatch
from .essential import hombar
from .functors import evaluator
from .grammar import load_group
from .groups import PermGroup
from .reps import multiplicities
from .utils import SCHEMA_VERSION

logger = logging.getLogger(__name__)


# =============================================================================
# 1. 状态
# =============================================================================

class ReportState(TypedDict, total=False):
    groups: Dict[str, PermGroup]
    facts: List[Dict[str, Any]]
    readings: List[Dict[str, Any]]
    witnesses: List[Dict[str, Any]]
    conclusion: str
    logs: List[str]


def _factors(G: PermGroup, label: SimpleLabel) -> Dict[str, int]:
    """Δ_label(G) 的合成因子（以标签字符串为键，去掉零项）"""
    ana = analysis(G)
    mult = multiplicities(ana.ev.delta(label).module, ana.catalog)
    return {str(k): v for k, v in mult.items() if v}


# =============================================================================
# 2. 流水线
# =============================================================================

class A5Report:
    """按固定顺序串联的核对节点"""

    def __init__(self, strict: bool = True, on_step: Optional[Callable[[str], None]] = None):
        self.strict = strict
        self.on_step = on_step

    def _log(self, state: ReportState, step_name: str, content: str) -> List[str]:
        timestamp = datetime.datetime.now().strftime("%H:%M:%S")
        entry = f"[{timestamp}] === {step_name} ===\n{content}\n"
        return state.get("logs", []) + [entry]

    def _expect(self, facts: List[Dict[str, Any]], fact: str, expected: Any, actual: Any):
        ok = expected == actual
        facts.append({"fact": fact, "expected": expected, "actual": actual, "ok": ok})
        if not ok and self.strict:
            raise ReportMismatch(fact, expected, actual)

    # ---- 步骤 ----
    def setup_node(self, state: ReportState) -> Dict:
        groups = {"A4": load_group("A4"), "A5": load_group("A5")}
        logs = self._log(state, "SETUP", "parsed A4 (order 12) and A5 (order 60)")
        return {"groups": groups, "logs": logs}

    def a4_facts_node(self, state: ReportState) -> Dict:
        G = state["groups"]["A4"]
        facts: List[Dict[str, Any]] = []
        ev = evaluator(G)
        cat = ev.category
        self._expect(facts, "Σ(A4) iso classes", ["A4", "V4", "C3", "C2", "1"], cat.keys())
        lab = cat.label
        self._expect(facts, "dim Δ(V4,2dim)(A4)", 0, ev.delta(lab("V4", "2dim")).dim)
        self._expect(facts, "factors of Δ(C2,triv)(A4)", {"(C2, triv)": 1}, _factors(G, lab("C2", "triv")))
        for v in ("triv", "sgn"):
            d = ev.delta(lab("C3", v))
            self._expect(facts, f"dim Δ(C3,{v})(A4)", 2, d.dim)
            self._expect(facts, f"factors of Δ(C3,{v})(A4)",
                         {f"(A4, {v})": 1, f"(C3, {v})": 1}, _factors(G, lab("C3", v)))
            self._expect(facts, f"Δ(C3,{v})(A4) indecomposable", True, d.module.is_indecomposable())
        logs = self._log(state, "A4 EVALUATIONS", "\n".join(
            f"{f['fact']}: {f['actual']}" for f in facts
        ))
        return {"facts": state.get("facts", []) + facts, "logs": logs}

    def v4_readings_node(self, state: ReportState) -> Dict:
        """V4 标签的两种读法：只报告，不断言"""
        G = state["groups"]["A4"]
        lab = evaluator(G).category.label
        readings = []
        for v in ("triv", "sgn"):
            got = _factors(G, lab("V4", v))
            readings.append({
                "delta": f"Δ(V4,{v})(A4)",
                "factors": got,
                "printed_reading": got == {f"(A4, {v})": 1},
                "alternative_reading": got == {f"(V4, {v})": 1},
            })
        logs = self._log(state, "V4 READINGS", "\n".join(str(r) for r in readings))
        return {"readings": readings, "logs": logs}

    def bgg_node(self, state: ReportState) -> Dict:
        G = state["groups"]["A4"]
        facts: List[Dict[str, Any]] = []
        ana = analysis(G)
        target = ana.ev.category.label("A4", "sgn")
        mult = {str(k): int(v) for k, v in ana.delta_multiplicities(target).items() if v}
        self._expect(facts, "[P(A4,sgn) : Δ] at A4", {"(A4, sgn)": 1, "(C3, sgn)": 1}, mult)
        logs = self._log(state, "BGG (A4)", f"[P(A4,sgn) : Δ] = {mult}")
        return {"facts": state.get("facts", []) + facts, "logs": logs}

    def a5_facts_node(self, state: ReportState) -> Dict:
        G = state["groups"]["A5"]
        facts: List[Dict[str, Any]] = []
        ev = evaluator(G)
        lab = ev.category.label
        a4_sgn, c3_sgn = lab("A4", "sgn"), lab("C3", "sgn")
        self._expect(facts, "dim Hom-bar(A4,A5)", 2, hombar(ev.category.get("A4").group, G).dim)
        self._expect(facts, "dim Δ(A4,sgn)(A5)", 1, ev.delta(a4_sgn).dim)
        self._expect(facts, "dim Δ(C3,sgn)(A5)", 1, ev.delta(c3_sgn).dim)
        self._expect(facts, "Δ(A4,sgn)(A5) ≅ S(A4,sgn)(A5)", {"(A4, sgn)": 1}, _factors(G, a4_sgn))
        self._expect(facts, "Δ(C3,sgn)(A5) ≅ S(A4,sgn)(A5)", {"(A4, sgn)": 1}, _factors(G, c3_sgn))
        self._expect(facts, "dim S(C3,sgn)(A5)", 0, ev.simple(c3_sgn).dim)
        ok, offenders = ev.nv_check()
        self._expect(facts, "NV(A5)", False, ok)
        self._expect(facts, "offenders at A5", ["(C3, sgn)"], [str(o) for o in offenders])
        # Ind∘Res 作用为 1
        cls = next(c for c in G.subgroup_classes if c.key == "A4")
        sub, emb = G.subgroup_group(cls.rep)
        x = compose(induction(G, sub, emb), restriction(G, sub, emb))
        m = ev.delta(a4_sgn).module.act(x.coeffs)
        self._expect(facts, "Ind∘Res acts on Δ(A4,sgn)(A5) as", [[1]],
                     [[int(v) for v in row] for row in m.to_fractions()])
        logs = self._log(state, "A5 EVALUATIONS", "\n".join(
            f"{f['fact']}: {f['actual']}" for f in facts
        ))
        return {"facts": state.get("facts", []) + facts, "logs": logs}

    def self_ext_node(self, state: ReportState) -> Dict:
        G = state["groups"]["A5"]
        ana = analysis(G)
        facts: List[Dict[str, Any]] = []
        a4_sgn = ana.ev.category.label("A4", "sgn")
        p = ana.pim(a4_sgn)
        self._expect(facts, "dim P(A4,sgn)(A5)", 2, p.dim)
        self._expect(facts, "Loewy layers of P(A4,sgn)(A5)", [1, 1], p.loewy)
        self._expect(facts, "Loewy factors of P(A4,sgn)(A5)",
                     [{"(A4, sgn)": 1}, {"(A4, sgn)": 1}],
                     [{str(k): v for k, v in layer.factors.items()} for layer in p.layers])
        e = ana.ext1(a4_sgn, a4_sgn)
        self._expect(facts, "Ext1(S(A4,sgn), S(A4,sgn)) at A5", 1, e.value)
        cert = ana.qh_certificate()
        self._expect(facts, "qh certificate of kB(A5,A5)", "fail", "pass" if cert.verdict else "fail")
        witnesses = [
            {"kind": "self_extension", "label": str(a4_sgn), "ext1": e.value, "method": e.method},
            {"kind": "vanishing", "offenders": cert.check("nv").witness},
        ]
        conclusion = "not quasi-hereditary, self-extension found"
        logs = self._log(state, "A5 SELF-EXTENSION", f"PIM Loewy {p.loewy}; Ext1 = {e.value} ({e.method}); {conclusion}")
        return {"facts": state.get("facts", []) + facts, "witnesses": witnesses, "conclusion": conclusion, "logs": logs}

    def steps(self) -> List[Tuple[str, Callable[[ReportState], Dict]]]:
        return [
            ("setup", self.setup_node),
            ("a4_facts", self.a4_facts_node),
            ("v4_readings", self.v4_readings_node),
            ("bgg", self.bgg_node),
            ("a5_facts", self.a5_facts_node),
            ("self_ext", self.self_ext_node),
        ]

    def _node(self, name: str, fn: Callable[[ReportState], Dict]) -> Callable[[ReportState], Dict]:
        def node(state: ReportState) -> Dict:
            if self.on_step:
                self.on_step(name)
            logger.info("a5-report step %s", name)
            return fn(state)
        return node

    def build(self, until: Optional[str] = None):
        """编译 StateGraph；until 给出时只串到该步为止"""
        steps = dict(self.steps())
        names = list(steps)
        if until is not None:
            if until not in steps:
                raise InvalidData(f"unknown report step: {until}")
            names = names[: names.index(until) + 1]

        workflow = StateGraph(ReportState)
        for name in names:
            workflow.add_node(name, self._node(name, steps[name]))
        workflow.set_entry_point(names[0])
        for a, b in zip(names, names[1:]):
            workflow.add_edge(a, b)
        workflow.add_edge(names[-1], END)
        return workflow.compile()

    def run(self, until: Optional[str] = None) -> ReportState:
        return self.build(until).invoke({"facts": [], "logs": []})


def a5_report(strict: bool = True, on_step: Optional[Callable[[str], None]] = None) -> ReportState:
    return A5Report(strict, on_step).run()


def report_json(state: ReportState) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "facts": state.get("facts", []),
        "readings": state.get("readings", []),
        "witnesses": state.get("witnesses", []),
        "conclusion": state.get("conclusion", ""),
    }

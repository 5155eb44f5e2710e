"""
自检
每项检查返回 {name, passed, detail}；quick=True 时跳过 A5 上的检查。
"""

import logging
from typing import Any, Callable, Dict, List, Optional, Tuple

from .analysis import analysis
from .burnside import compose_by_orbits, compose_labels, opposite_label, structure_constants
from .errors import BisetkitError
from .essential import hombar, is_out_group_algebra
from .functors import radical_table
from .goursat import direct_product, product_basis
from .grammar import load_group
from .report import A5Report, ReportState

logger = logging.getLogger(__name__)

# 小群语料
CORPUS = ["1", "C2", "C3", "C4", "V4", "C5", "S3", "C6", "A4"]
GOURSAT_GROUPS = ["1", "C2", "C3", "C4", "V4", "S3", "C6", "D8", "Q8"]
ORBIT_GROUPS = ["C2", "C3", "C4", "V4", "C5", "S3", "C6"]
# 阶 ≤ 12 中较重的几个，--quick 时跳过
ORBIT_GROUPS_SLOW = ["D8", "Q8", "A4"]
ASSOCIATIVITY_GROUPS = ["C2", "C3", "C2xC2", "S3"]
OUT_ALGEBRA_GROUPS = ["1", "C2", "C3", "V4", "C5", "S3", "A4"]
QH_GROUPS = ["1", "C2", "C3", "C4", "C6", "C2xC2"]

CheckResult = Tuple[bool, Any]


# =============================================================================
# 1. 基与复合
# =============================================================================

def check_basis_sizes() -> CheckResult:
    c2 = load_group("C2")
    a5 = load_group("A5")
    got = {"B(C2,C2)": len(product_basis(c2, c2)), "classes(A5)": len(a5.subgroup_classes)}
    return got == {"B(C2,C2)": 5, "classes(A5)": 9}, got


def check_goursat_counts(limit: int = 64) -> CheckResult:
    bad = []
    for a in GOURSAT_GROUPS:
        for b in GOURSAT_GROUPS:
            G, H = load_group(a), load_group(b)
            if G.order * H.order > limit:
                continue
            prod, _ = direct_product(G, H)
            brute = len(prod.subgroup_classes)
            labels = len(product_basis(G, H))
            if brute != labels:
                bad.append({"pair": f"{a},{b}", "goursat": labels, "brute_force": brute})
    return not bad, bad


def check_composition_oracle(include_slow: bool = True) -> CheckResult:
    bad = []
    for name in ORBIT_GROUPS + (ORBIT_GROUPS_SLOW if include_slow else []):
        G = load_group(name)
        basis = product_basis(G, G)
        for x in basis:
            for y in basis:
                if compose_labels(x, y) != compose_by_orbits(x, y):
                    bad.append({"group": name, "left": x.key, "right": y.key})
    # 混合源/目标
    c2, s3, c3 = load_group("C2"), load_group("S3"), load_group("C3")
    for x in product_basis(c2, s3):
        for y in product_basis(s3, c3):
            if compose_labels(x, y) != compose_by_orbits(x, y):
                bad.append({"group": "C2,S3,C3", "left": x.key, "right": y.key})
    return not bad, bad[:5]


def check_associativity() -> CheckResult:
    bad = [name for name in ASSOCIATIVITY_GROUPS if not structure_constants(load_group(name)).is_associative()]
    return not bad, bad


def check_opposite() -> CheckResult:
    G = load_group("S3")
    basis = product_basis(G, G)
    bad = []
    for x in basis:
        if opposite_label(opposite_label(x)) is not x:
            bad.append({"label": x.key, "law": "involution"})
        for y in basis:
            lhs = {opposite_label(basis[k]).index: m for k, m in compose_labels(x, y)}
            rhs = dict(compose_labels(opposite_label(y), opposite_label(x)))
            if lhs != rhs:
                bad.append({"left": x.key, "right": y.key, "law": "anti-homomorphism"})
    return not bad, bad[:5]


def check_out_algebra() -> CheckResult:
    bad = []
    for name in OUT_ALGEBRA_GROUPS:
        H = load_group(name)
        hb = hombar(H, H)
        if hb.dim != hb.out.order or not is_out_group_algebra(H):
            bad.append({"group": name, "dim": hb.dim, "out": hb.out.order})
    return not bad, bad


# =============================================================================
# 2. 函子取值与分析
# =============================================================================

def _facts(state: ReportState) -> CheckResult:
    failed = [f for f in state.get("facts", []) if not f["ok"]]
    return not failed, failed or len(state.get("facts", []))


def check_a4_evaluations() -> CheckResult:
    return _facts(A5Report(strict=False).run(until="bgg"))


def check_qh_small() -> CheckResult:
    bad = []
    for name in QH_GROUPS:
        cert = analysis(load_group(name)).qh_certificate()
        if not cert.verdict:
            bad.append({"group": name, "failed": [c.name for c in cert.checks if not c.passed]})
    return not bad, bad


def check_radical_inclusion(include_a5: bool) -> CheckResult:
    bad = []
    for name in CORPUS:
        G = load_group(name)
        ev = analysis(G).ev
        for row in radical_table(G):
            nonzero = not ev.simple(row.label).vanishes
            if not row.included or (nonzero and not row.equal):
                bad.append({"group": name, **row.to_json()})
    detail: Dict[str, Any] = {"violations": bad}
    strict_at_a5 = True
    if include_a5:
        rows = radical_table(load_group("A5"))
        bad.extend({"group": "A5", **r.to_json()} for r in rows if not r.included)
        strict = [str(r.label) for r in rows if not r.equal]
        detail["strict_at_a5"] = strict
        strict_at_a5 = bool(strict)
    return not bad and strict_at_a5, detail


def check_characters() -> CheckResult:
    """分解矩阵的计算会解 Gram 方程组，奇异或非整数解都会抛出"""
    dims = {}
    for name in CORPUS:
        dm = analysis(load_group(name)).decomposition_matrix
        if any(v < 0 for row in dm.entries for v in row):
            return False, {"group": name}
        dims[name] = len(dm.cols)
    return True, dims


def check_a5_report() -> CheckResult:
    return _facts(A5Report(strict=False).run())


# =============================================================================
# 3. 批量执行
# =============================================================================

def selftest_checks(quick: bool = False) -> List[Tuple[str, Callable[[], CheckResult]]]:
    checks: List[Tuple[str, Callable[[], CheckResult]]] = [
        ("basis_sizes", check_basis_sizes),
        ("goursat_counts", check_goursat_counts),
        ("composition_oracle", lambda: check_composition_oracle(include_slow=not quick)),
        ("associativity", check_associativity),
        ("opposite", check_opposite),
        ("out_algebra", check_out_algebra),
        ("a4_evaluations", check_a4_evaluations),
        ("qh_small_groups", check_qh_small),
        ("radical_inclusion", lambda: check_radical_inclusion(include_a5=not quick)),
        ("characters", check_characters),
    ]
    if not quick:
        checks.append(("a5_report", check_a5_report))
    return checks


def run_selftest(quick: bool = False, on_check: Optional[Callable[[str], None]] = None) -> List[Dict[str, Any]]:
    results = []
    for name, fn in selftest_checks(quick):
        if on_check:
            on_check(name)
        try:
            passed, detail = fn()
        except BisetkitError as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        logger.info("selftest %s: %s", name, "ok" if passed else "FAILED")
        results.append({"name": name, "passed": bool(passed), "detail": detail})
    return results

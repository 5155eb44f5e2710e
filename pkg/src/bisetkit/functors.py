"""
标准函子 Δ_{H,V} 与单函子 S_{H,V} 在 G 处的取值
Δ_{H,V}(G) = Hom-bar(H,G) ⊗_{kOut(H)} V，实现为 Hom-bar(H,G) ⊗ V 模关系
    (a·phi) ⊗ v - a ⊗ phi·v
S_{H,V}(G) = Δ_{H,V}(G) / R，R 为配对 Δ(G) × B(H,G) -> V 的左根
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Dict, List, Optional, Tuple

from .burnside import AlgebraTable, compose_labels, structure_constants
from .category import Category, SimpleLabel, category
from .essential import HomBar, hombar, to_out_algebra
from .goursat import product_basis
from .groups import PermGroup, iso_name
from .linalg import ONE, ZERO, QMatrix, Subspace, Vec, induce_quotient, unit, vec_axpy
from .reps import ModuleRep, OutSimple
from .utils import SCHEMA_VERSION

logger = logging.getLogger(__name__)


# =============================================================================
# 1. 数据类型
# =============================================================================

@dataclass(frozen=True, eq=False)
class DeltaEval:
    """Δ_{H,V}(G)；张量空间下标 k*d + i 对应 a_k ⊗ v_i"""
    label: SimpleLabel
    module: ModuleRep
    hombar: HomBar
    simple: OutSimple
    relations: Subspace

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def tensor_dim(self) -> int:
        return self.hombar.dim * self.simple.dim

    def generator(self, k: int, i: int) -> Vec:
        """a_k ⊗ v_i 在 Δ 坐标下的像"""
        return self.relations.quotient_coords(unit(k * self.simple.dim + i))


@dataclass(frozen=True, eq=False)
class SimpleEval:
    label: SimpleLabel
    delta: DeltaEval
    kernel: Subspace
    module: ModuleRep

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def vanishes(self) -> bool:
        return self.module.dim == 0


@dataclass(frozen=True)
class RadicalComparison:
    label: SimpleLabel
    rad_of_eval: Subspace
    eval_of_rad: Subspace
    included: bool
    equal: bool

    def to_json(self) -> Dict[str, Any]:
        return {
            **self.label.to_json(),
            "dim_delta": self.eval_of_rad.ambient,
            "dim_rad_of_eval": self.rad_of_eval.dim,
            "dim_eval_of_rad": self.eval_of_rad.dim,
            "included": self.included,
            "equal": self.equal,
        }


# =============================================================================
# 2. 求值器（每个 G 一个，缓存全部取值）
# =============================================================================

class Evaluator:
    """G 处的函子求值上下文"""

    def __init__(self, G: PermGroup, jobs: int = 1):
        self.G = G
        self.jobs = jobs
        self._delta: Dict[SimpleLabel, DeltaEval] = {}
        self._simple: Dict[SimpleLabel, SimpleEval] = {}

    def __repr__(self):
        return f"Evaluator({iso_name(self.G)})"

    @cached_property
    def category(self) -> Category:
        return category(self.G)

    @cached_property
    def table(self) -> AlgebraTable:
        return structure_constants(self.G, jobs=self.jobs)

    @property
    def labels(self) -> List[SimpleLabel]:
        return self.category.labels

    # ---- Δ ----
    def delta(self, label: SimpleLabel) -> DeltaEval:
        hit = self._delta.get(label)
        if hit is None:
            hit = self._delta[label] = self._build_delta(label)
        return hit

    def _build_delta(self, label: SimpleLabel) -> DeltaEval:
        G = self.G
        sq = self.category.get(label.H)
        V = self.category.simple(label)
        hb = hombar(sq.group, G)
        n, d = hb.dim, V.dim
        ambient = n * d
        # 关系：(a_k·phi) ⊗ e_i - a_k ⊗ rho(phi) e_i，phi 取 Out 生成元即可
        rels: List[Vec] = []
        for g in hb.out.generators:
            m_out = hb.out_matrices[g]
            rho = V.matrices[g]
            for k in range(n):
                a_phi = m_out.column(k)
                for i in range(d):
                    v: Vec = {}
                    for kk, c in a_phi.items():
                        vec_axpy(v, c, {kk * d + i: ONE})
                    for j, c in rho.column(i).items():
                        vec_axpy(v, -c, {k * d + j: ONE})
                    if v:
                        rels.append(v)
        relations = Subspace.span(rels, ambient)
        action = [
            induce_quotient(_kron_identity(hb.left_action(b), d), relations)
            for b in range(self.table.dim)
        ]
        module = ModuleRep(self.table, ambient - relations.dim, action)
        logger.info("Δ%s(%s): dim %d (hombar %d, V %d)", label, iso_name(G), module.dim, n, d)
        return DeltaEval(label, module, hb, V, relations)

    # ---- S ----
    def simple(self, label: SimpleLabel) -> SimpleEval:
        hit = self._simple.get(label)
        if hit is None:
            hit = self._simple[label] = self._build_simple(label)
        return hit

    def _build_simple(self, label: SimpleLabel) -> SimpleEval:
        delta = self.delta(label)
        hb, V = delta.hombar, delta.simple
        H = hb.H
        n, d = hb.dim, V.dim
        hh = hombar(H, H)
        # 配对矩阵：行 (c, j)，列为张量下标 (k, i)
        rows: List[Vec] = []
        for c in product_basis(H, self.G):
            block: List[Vec] = [{} for _ in range(d)]
            for k, r in enumerate(hb.reps):
                v: Vec = {}
                for idx, m in compose_labels(c, hb.basis[r]):
                    v[idx] = v.get(idx, ZERO) + m
                coeffs = to_out_algebra(H, hh.project(v))
                if not coeffs:
                    continue
                # Σ_phi λ_phi rho(phi)
                op: Dict[int, Vec] = {}
                for phi, lam in coeffs.items():
                    for row, entries in V.matrices[phi].row_dicts().items():
                        vec_axpy(op.setdefault(row, {}), lam, entries)
                for j, entries in op.items():
                    for i, x in entries.items():
                        if x:
                            block[j][k * d + i] = block[j].get(k * d + i, ZERO) + x
            rows.extend(b for b in block if b)
        ambient = n * d
        pairing = QMatrix.from_vecs(rows, ambient) if rows else QMatrix.zeros(0, ambient)
        ker = Subspace.row_space(pairing.kernel())
        kernel = Subspace.span([delta.relations.quotient_coords(v) for v in ker.vectors()], delta.dim)
        module = delta.module.quotient(kernel)
        logger.info("S%s(%s): dim %d", label, iso_name(self.G), module.dim)
        return SimpleEval(label, delta, kernel, module)

    # ---- 汇总 ----
    def vanishing_table(self) -> List[Tuple[SimpleLabel, int, int]]:
        return [(lab, self.delta(lab).dim, self.simple(lab).dim) for lab in self.labels]

    def nv_check(self) -> Tuple[bool, List[SimpleLabel]]:
        offenders = [lab for lab in self.labels if self.simple(lab).vanishes]
        return not offenders, offenders

    def radical_compare(self, label: SimpleLabel) -> RadicalComparison:
        s = self.simple(label)
        rad = s.delta.module.radical()
        kernel = s.kernel
        included = rad.is_subspace_of(kernel)
        return RadicalComparison(label, rad, kernel, included, included and rad.dim == kernel.dim)

    def catalog(self) -> Dict[SimpleLabel, ModuleRep]:
        """全部非零单模 S_{H,V}(G)"""
        return {lab: self.simple(lab).module for lab in self.labels if not self.simple(lab).vanishes}


def _kron_identity(m: QMatrix, d: int) -> QMatrix:
    """m ⊗ I_d"""
    if d == 1:
        return m
    rows: Dict[int, Vec] = {}
    for i, entries in m.row_dicts().items():
        for j, x in entries.items():
            for t in range(d):
                rows.setdefault(i * d + t, {})[j * d + t] = x
    return QMatrix.from_dict(rows, (m.nrows * d, m.ncols * d))


@lru_cache(maxsize=None)
def evaluator(G: PermGroup) -> Evaluator:
    return Evaluator(G)


# =============================================================================
# 3. 模块级接口
# =============================================================================

def _label(G: PermGroup, H: str, V: str) -> SimpleLabel:
    return evaluator(G).category.label(H, V)


def delta_eval(H: str, V: str, G: PermGroup) -> DeltaEval:
    return evaluator(G).delta(_label(G, H, V))


def simple_eval(H: str, V: str, G: PermGroup) -> SimpleEval:
    return evaluator(G).simple(_label(G, H, V))


def vanishing_table(G: PermGroup) -> List[Tuple[SimpleLabel, int, int]]:
    return evaluator(G).vanishing_table()


def nv_check(G: PermGroup) -> Tuple[bool, List[SimpleLabel]]:
    return evaluator(G).nv_check()


def lambda_order(G: PermGroup, l1: SimpleLabel, l2: SimpleLabel):
    return evaluator(G).category.lambda_order(l1, l2)


def radical_compare(H: str, V: str, G: PermGroup) -> RadicalComparison:
    return evaluator(G).radical_compare(_label(G, H, V))


def radical_table(G: PermGroup) -> List[RadicalComparison]:
    ev = evaluator(G)
    return [ev.radical_compare(lab) for lab in ev.labels]


def vanishing_json(G: PermGroup) -> Dict[str, Any]:
    ok, offenders = nv_check(G)
    return {
        "schema_version": SCHEMA_VERSION,
        "group": iso_name(G),
        "rows": [
            {**lab.to_json(), "dim_delta": dd, "dim_simple": ds}
            for lab, dd, ds in vanishing_table(G)
        ],
        "nv": ok,
        "offenders": [lab.to_json() for lab in offenders],
    }

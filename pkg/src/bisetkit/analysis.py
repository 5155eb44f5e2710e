"""
kB(G,G) 的结构分析
- 投射不可分解模 (PIM)：在 A/Rad 中取本原幂等元，沿根基提升 e <- 3e^2 - 2e^3
- 分解矩阵 [Δ : S]、Cartan 矩阵 [P : S]
- Ext^1(S, T)：上闭链 / 上边缘；未知数过多时改用 Loewy 第二层
- 拟遗传证书：NV、单三角、BGG 维数恒等式、Cartan 行列式、无自扩张
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Dict, List, Optional, Tuple

from .burnside import AlgebraTable
from .category import SimpleLabel
from .errors import CatalogIncomplete, InvalidData
from .functors import Evaluator, evaluator, vanishing_json
from .groups import PermGroup, iso_name
from .linalg import ONE, QMatrix, Subspace, Vec, solve, to_fraction, unit, vec_axpy, vec_scale
from .reps import ModuleRep, algebra_generators, multiplicities, radical_of_algebra
from .utils import SCHEMA_VERSION

logger = logging.getLogger(__name__)

# 上闭链方程未知数上限，超过则用 Loewy 层计算 Ext^1
EXT1_UNKNOWN_LIMIT = 2000


# =============================================================================
# 1. 数据类型
# =============================================================================

@dataclass
class LoewyLayer:
    dim: int
    factors: Dict[SimpleLabel, int]

    def to_json(self) -> Dict[str, Any]:
        return {"dim": self.dim, "factors": [{**lab.to_json(), "mult": m} for lab, m in self.factors.items()]}


@dataclass(eq=False)
class PIM:
    label: SimpleLabel
    idempotent: Vec
    subspace: Subspace
    module: ModuleRep
    layers: List[LoewyLayer] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def loewy(self) -> List[int]:
        return [layer.dim for layer in self.layers]

    def is_uniserial(self) -> bool:
        return all(sum(layer.factors.values()) == 1 for layer in self.layers)

    def to_json(self) -> Dict[str, Any]:
        return {
            **self.label.to_json(),
            "dim": self.dim,
            "loewy": self.loewy,
            "layers": [layer.to_json() for layer in self.layers],
            "uniserial": self.is_uniserial(),
        }


@dataclass
class LabelMatrix:
    """以 SimpleLabel 为行列下标的整数矩阵"""
    rows: List[SimpleLabel]
    cols: List[SimpleLabel]
    entries: List[List[int]]

    def entry(self, r: SimpleLabel, c: SimpleLabel) -> int:
        return self.entries[self.rows.index(r)][self.cols.index(c)]

    def row(self, r: SimpleLabel) -> Dict[SimpleLabel, int]:
        return dict(zip(self.cols, self.entries[self.rows.index(r)]))

    def column(self, c: SimpleLabel) -> Dict[SimpleLabel, int]:
        j = self.cols.index(c)
        return {r: self.entries[i][j] for i, r in enumerate(self.rows)}

    def det(self) -> int:
        if len(self.rows) != len(self.cols):
            raise CatalogIncomplete("determinant of a non-square label matrix")
        return int(to_fraction(QMatrix.from_rows(self.entries, len(self.cols)).det()))

    def to_json(self) -> Dict[str, Any]:
        return {
            "rows": [lab.to_json() for lab in self.rows],
            "cols": [lab.to_json() for lab in self.cols],
            "entries": self.entries,
        }


@dataclass
class Ext1Result:
    value: int
    method: str


@dataclass
class Check:
    name: str
    passed: bool
    witness: Any = None

    def to_json(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "witness": self.witness}


@dataclass
class QHCertificate:
    group: str
    checks: List[Check]

    @property
    def verdict(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> Dict[str, Any]:
        return {
            "group": self.group,
            "verdict": "pass" if self.verdict else "fail",
            "checks": [c.to_json() for c in self.checks],
        }


# =============================================================================
# 2. 分析上下文
# =============================================================================

class Analysis:
    """kB(G,G) 的结构分析，复用 Evaluator 的全部取值"""

    def __init__(self, ev: Evaluator):
        self.ev = ev
        self._pims: Dict[SimpleLabel, PIM] = {}
        self._ext1: Dict[Tuple[SimpleLabel, SimpleLabel, str], Ext1Result] = {}

    def __repr__(self):
        return f"Analysis({iso_name(self.ev.G)})"

    @property
    def table(self) -> AlgebraTable:
        return self.ev.table

    @cached_property
    def catalog(self) -> Dict[SimpleLabel, ModuleRep]:
        cat = self.ev.catalog()
        self._check_catalog(cat)
        return cat

    @cached_property
    def end_dims(self) -> Dict[SimpleLabel, int]:
        return {lab: m.end_dim() for lab, m in self.catalog.items()}

    @cached_property
    def radical(self) -> Subspace:
        return radical_of_algebra(self.table)

    def _check_catalog(self, cat: Dict[SimpleLabel, ModuleRep]):
        total = sum(Fraction(m.dim * m.dim, m.end_dim()) for m in cat.values())
        expected = self.table.dim - radical_of_algebra(self.table).dim
        if total != expected:
            raise CatalogIncomplete(
                f"simple catalog of kB({iso_name(self.ev.G)}) accounts for {total} of {expected} "
                "dimensions of the semisimple quotient"
            )

    def out_end_dim(self, label: SimpleLabel) -> int:
        return self.ev.category.simple(label).end_dim

    # ---- PIM ----
    def pim(self, label: SimpleLabel) -> PIM:
        hit = self._pims.get(label)
        if hit is None:
            hit = self._pims[label] = self._build_pim(label)
        return hit

    def _block_idempotent(self, label: SimpleLabel) -> QMatrix:
        """End_D(S) 中的本原幂等元：投影到 D-直线 D·v，沿 D-不变补空间"""
        s = self.catalog[label]
        ends = s.endomorphisms()
        n = s.dim
        line = Subspace.span([e.apply(unit(0)) for e in ends], n)
        basis = line.vectors()
        current = line
        for j in range(n):
            if current.dim == n:
                break
            u = unit(j)
            if current.contains(u):
                continue
            orbit = Subspace.span([e.apply(u) for e in ends], n)
            basis.extend(orbit.vectors())
            current = current + orbit
        b = QMatrix.from_columns(basis, n)
        keep = {i: {i: ONE} for i in range(line.dim)}
        return b @ QMatrix.from_dict(keep, (n, n)) @ b.inv()

    def _build_pim(self, label: SimpleLabel) -> PIM:
        table = self.table
        n = table.dim
        rows: Dict[int, Vec] = {}
        rhs: Vec = {}
        offset = 0
        for lab, m in self.catalog.items():
            d = m.dim
            for k, mat in enumerate(m.action):
                for r, c, x in mat.entries():
                    rows.setdefault(offset + r * d + c, {})[k] = x
            if lab == label:
                for r, c, x in self._block_idempotent(label).entries():
                    rhs[offset + r * d + c] = x
            offset += d * d
        a = solve(QMatrix.from_dict(rows, (offset, n)), rhs)
        e = _lift_idempotent(table, a)
        sub = Subspace.span([table.mul(unit(k), e) for k in range(n)], n)
        regular = ModuleRep.regular(table)
        pim = PIM(label, e, sub, regular.submodule(sub))
        pim.layers = self._loewy_layers(regular, sub)
        logger.info("P%s(%s): dim %d, Loewy %s", label, iso_name(self.ev.G), pim.dim, pim.loewy)
        return pim

    def _loewy_layers(self, regular: ModuleRep, sub: Subspace) -> List[LoewyLayer]:
        table = self.table
        rad = self.radical.vectors()
        layers: List[LoewyLayer] = []
        current = sub
        while current.dim:
            nxt = Subspace.span([table.mul(r, w) for r in rad for w in current.vectors()], table.dim)
            top = regular.submodule(current).quotient(
                Subspace.span([current.coords_vec(v) for v in nxt.vectors()], current.dim)
            )
            layers.append(LoewyLayer(top.dim, _nonzero(multiplicities(top, self.catalog))))
            current = nxt
        return layers

    def regular_bookkeeping(self) -> Tuple[Fraction, int]:
        """Σ (dim S / end_dim) · dim P 与 dim A"""
        total = sum(Fraction(m.dim, self.end_dims[lab]) * self.pim(lab).dim for lab, m in self.catalog.items())
        return total, self.table.dim

    # ---- 矩阵 ----
    @cached_property
    def decomposition_matrix(self) -> LabelMatrix:
        rows = list(self.ev.labels)
        cols = list(self.catalog)
        entries = []
        for lab in rows:
            mult = multiplicities(self.ev.delta(lab).module, self.catalog)
            entries.append([mult.get(c, 0) for c in cols])
        return LabelMatrix(rows, cols, entries)

    @cached_property
    def cartan_matrix(self) -> LabelMatrix:
        labs = list(self.catalog)
        entries = []
        for lab in labs:
            mult = multiplicities(self.pim(lab).module, self.catalog)
            entries.append([mult.get(c, 0) for c in labs])
        return LabelMatrix(labs, labs, entries)

    def delta_multiplicities(self, label: SimpleLabel) -> Dict[SimpleLabel, Fraction]:
        """BGG：(P_λ : Δ_μ) = [Δ_μ : S_λ] · d_λ / d_μ"""
        col = self.decomposition_matrix.column(label)
        d_l = self.out_end_dim(label)
        return {mu: Fraction(m * d_l, self.out_end_dim(mu)) for mu, m in col.items() if m}

    def bgg_rhs(self, label: SimpleLabel) -> Fraction:
        return sum((m * self.ev.delta(mu).dim for mu, m in self.delta_multiplicities(label).items()), Fraction(0))

    # ---- Ext^1 ----
    def ext1(self, s: SimpleLabel, t: SimpleLabel, method: Optional[str] = None) -> Ext1Result:
        ms, mt = self.catalog[s], self.catalog[t]
        if method is None:
            unknowns = self.table.dim * ms.dim * mt.dim
            method = "cocycle" if unknowns <= EXT1_UNKNOWN_LIMIT else "loewy"
        elif method not in ("cocycle", "loewy"):
            raise InvalidData(f"unknown Ext1 method: {method}")
        key = (s, t, method)
        if key in self._ext1:
            return self._ext1[key]
        if method == "cocycle":
            hom = self.end_dims[s] if s == t else 0
            res = Ext1Result(_ext1_cocycles(self.table, ms, mt, hom), "cocycle")
        else:
            layers = self.pim(s).layers
            m = layers[1].factors.get(t, 0) if len(layers) > 1 else 0
            res = Ext1Result(m * self.end_dims[t], "loewy")
        self._ext1[key] = res
        logger.debug("Ext1(%s, %s) = %d via %s", s, t, res.value, res.method)
        return res

    # ---- 证书 ----
    def qh_certificate(self) -> QHCertificate:
        ev = self.ev
        cat = ev.category
        checks: List[Check] = []

        ok, offenders = ev.nv_check()
        checks.append(Check("nv", ok, [lab.to_json() for lab in offenders]))

        dm = self.decomposition_matrix
        bad = []
        for i, r in enumerate(dm.rows):
            for j, c in enumerate(dm.cols):
                v = dm.entries[i][j]
                if r == c:
                    if v != 1:
                        bad.append({"row": str(r), "col": str(c), "value": v})
                elif v and not cat.is_strict_subquotient(r.H, c.H):
                    bad.append({"row": str(r), "col": str(c), "value": v})
        for lab in dm.rows:
            if lab not in self.catalog:
                bad.append({"row": str(lab), "col": str(lab), "value": 0})
        checks.append(Check("unitriangular", not bad, bad))

        bgg = []
        for lab in self.catalog:
            lhs, rhs = self.pim(lab).dim, self.bgg_rhs(lab)
            if lhs != rhs:
                bgg.append({"label": str(lab), "dim_pim": lhs, "bgg": str(rhs)})
        checks.append(Check("bgg", not bgg, bgg))

        det = self.cartan_matrix.det()
        checks.append(Check("cartan_det", det == 1, det))

        self_ext = []
        for lab in self.catalog:
            res = self.ext1(lab, lab)
            if res.value:
                self_ext.append({"label": str(lab), "ext1": res.value, "method": res.method})
        checks.append(Check("no_self_ext", not self_ext, self_ext))

        cert = QHCertificate(iso_name(ev.G), checks)
        logger.info("qh certificate for %s: %s", cert.group, "pass" if cert.verdict else "fail")
        return cert

    def ext1_matrix(self) -> LabelMatrix:
        labs = list(self.catalog)
        return LabelMatrix(labs, labs, [[self.ext1(s, t).value for t in labs] for s in labs])

    def to_json(self) -> Dict[str, Any]:
        van = vanishing_json(self.ev.G)
        cert = self.qh_certificate()
        witnesses = [c.to_json() for c in cert.checks if not c.passed]
        return {
            "schema_version": SCHEMA_VERSION,
            "group": iso_name(self.ev.G),
            "vanishing_table": van["rows"],
            "decomposition_matrix": self.decomposition_matrix.to_json(),
            "cartan_matrix": self.cartan_matrix.to_json(),
            "ext1_matrix": self.ext1_matrix().to_json(),
            "qh": cert.to_json(),
            "witnesses": witnesses,
        }


def _nonzero(d: Dict[SimpleLabel, int]) -> Dict[SimpleLabel, int]:
    return {k: v for k, v in d.items() if v}


def _lift_idempotent(table: AlgebraTable, a: Vec) -> Vec:
    """e <- 3e^2 - 2e^3，直到 e^2 = e（根基幂零保证终止）"""
    e = a
    while True:
        e2 = table.mul(e, e)
        if e2 == e:
            return e
        e3 = table.mul(e2, e)
        nxt = vec_scale(e2, 3)
        vec_axpy(nxt, -2 * ONE, e3)
        e = nxt


def _ext1_cocycles(table: AlgebraTable, ms: ModuleRep, mt: ModuleRep, hom_dim: int) -> int:
    """dim Z^1 - dim B^1；Z^1 由 (生成元 ∪ {1}) × 基 上的 Leibniz 条件确定"""
    n = table.dim
    s, t = ms.dim, mt.dim
    ts = t * s
    if ts == 0:
        return 0
    gens = sorted(set(algebra_generators(table)) | {table.identity_index})
    rows: List[Vec] = []
    for g in gens:
        t_g = mt.action[g]
        for b in range(n):
            prod = table.products[g][b]
            s_b = ms.action[b]
            s_cols = s_b.columns()
            for r in range(t):
                t_row = t_g.row(r)
                for q in range(s):
                    eq: Vec = {}
                    for k, x in prod.items():
                        vec_axpy(eq, x, {k * ts + r * s + q: ONE})
                    for m, x in t_row.items():
                        vec_axpy(eq, -x, {b * ts + m * s + q: ONE})
                    for m, x in s_cols[q].items():
                        vec_axpy(eq, -x, {g * ts + r * s + m: ONE})
                    if eq:
                        rows.append(eq)
    unknowns = n * ts
    rank = QMatrix.from_vecs(rows, unknowns).rank() if rows else 0
    cocycles = unknowns - rank
    coboundaries = ts - hom_dim
    return cocycles - coboundaries


@lru_cache(maxsize=None)
def analysis(G: PermGroup) -> Analysis:
    return Analysis(evaluator(G))


# =============================================================================
# 3. 模块级接口
# =============================================================================

def pim(G: PermGroup, label: SimpleLabel) -> PIM:
    return analysis(G).pim(label)


def decomposition_matrix(G: PermGroup) -> LabelMatrix:
    return analysis(G).decomposition_matrix


def cartan_matrix(G: PermGroup) -> LabelMatrix:
    return analysis(G).cartan_matrix


def ext1(G: PermGroup, s: SimpleLabel, t: SimpleLabel) -> int:
    return analysis(G).ext1(s, t).value


def qh_certificate(G: PermGroup) -> QHCertificate:
    return analysis(G).qh_certificate()

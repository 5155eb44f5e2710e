"""
有理表示
- Out(H) 的有理不可约表示：分裂正则表示（交换子代数元素的特征多项式因子分解）
- ModuleRep：kB(G,G)-模，每个基元一个作用矩阵
- 迹特征、合成因子重数、代数根基（迹形式）、同态空间
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.densearith import dup_pow
from sympy.polys.factortools import dup_factor_list

from .automorphisms import OutGroup
from .burnside import AlgebraTable
from .errors import CatalogIncomplete, DimensionMismatch, InconsistentSystem, InvalidData, SplitFailure
from .linalg import (
    ONE, ZERO, QMatrix, Subspace, Vec, induce_quotient, is_integral, linear_combination,
    restrict, solve, spin, to_fraction, unit, vec_axpy,
)

logger = logging.getLogger(__name__)


# =============================================================================
# 1. 同态空间
# =============================================================================

def intertwiners(src: Sequence[QMatrix], dst: Sequence[QMatrix]) -> List[QMatrix]:
    """{X : X src[a] = dst[a] X}，X 为 t×s 矩阵"""
    if len(src) != len(dst):
        raise DimensionMismatch("intertwiner system needs one matrix pair per generator")
    s = src[0].nrows if src else 0
    t = dst[0].nrows if dst else 0
    if s == 0 or t == 0:
        return []
    rows: List[Vec] = []
    for a, b in zip(src, dst):
        a_cols = a.columns()
        b_rows = b.rows_list()
        for r in range(t):
            for c in range(s):
                eq: Vec = {}
                # (X a)[r,c] = Σ_k X[r,k] a[k,c]
                for k, x in a_cols[c].items():
                    eq[r * s + k] = eq.get(r * s + k, ZERO) + x
                # (b X)[r,c] = Σ_k b[r,k] X[k,c]
                for k, x in b_rows[r].items():
                    eq[k * s + c] = eq.get(k * s + c, ZERO) - x
                eq = {i: v for i, v in eq.items() if v}
                if eq:
                    rows.append(eq)
    if not rows:
        return [_reshape({i: ONE}, t, s) for i in range(t * s)]
    ker = QMatrix.from_vecs(rows, t * s).kernel()
    return [_reshape(v, t, s) for v in ker.rows_list()]


def _reshape(v: Vec, t: int, s: int) -> QMatrix:
    rows: Dict[int, Vec] = {}
    for i, x in v.items():
        rows.setdefault(i // s, {})[i % s] = x
    return QMatrix.from_dict(rows, (t, s))


def commutant(mats: Sequence[QMatrix]) -> List[QMatrix]:
    return intertwiners(mats, mats)


# =============================================================================
# 2. 多项式工具（sympy dense 多项式，系数首项在前）
# =============================================================================

def factor_charpoly(m: QMatrix) -> List[Tuple[List[Any], int]]:
    _, factors = dup_factor_list(m.charpoly(), QQ)
    return factors


def primary_component(m: QMatrix, factor: List[Any], mult: int) -> Subspace:
    """ker f(m)^e"""
    poly = dup_pow(factor, mult, QQ)
    return Subspace.row_space(m.power_apply(poly).kernel())


def _sweep(basis: Sequence[QMatrix]) -> Iterator[QMatrix]:
    """基元，然后两两和（系数 1 和 2），顺序确定"""
    yield from basis
    n = len(basis)
    for i in range(n):
        for j in range(i + 1, n):
            yield basis[i] + basis[j]
            yield basis[i] + basis[j].scale(2)


# =============================================================================
# 3. 矩阵代数：根基与局部性
# =============================================================================

def _flatten(m: QMatrix) -> Vec:
    n = m.ncols
    return {i * n + j: x for i, j, x in m.entries()}


class MatrixAlgebra:
    """含单位阵、对乘法封闭的 E ⊆ M_n(Q)

    基取扁平化后的 rref 行；J(E) 为迹形式 (a,b) -> tr(ab) 的根（特征 0 下两者相等）。
    半单商 E/J 以 J 的非主元坐标为基。
    """

    def __init__(self, mats: Sequence[QMatrix]):
        if not mats:
            raise InvalidData("matrix algebra needs at least the identity")
        n = self.size = mats[0].nrows
        self.space = Subspace.span([_flatten(m) for m in mats], n * n)
        self.elements = [_reshape(v, n, n) for v in self.space.vectors()]
        self.products = [[self.coords(a @ b) for b in self.elements] for a in self.elements]
        traces = [m.trace() for m in self.elements]
        rows: List[Vec] = []
        for prods in self.products:
            row: Vec = {}
            for j, p in enumerate(prods):
                s = sum((c * traces[k] for k, c in p.items()), ZERO)
                if s:
                    row[j] = s
            rows.append(row)
        self.radical = Subspace.row_space(QMatrix.from_vecs(rows, self.dim).kernel())
        self.cols = self.radical.complement_columns()

    @property
    def dim(self) -> int:
        return len(self.elements)

    def coords(self, m: QMatrix) -> Vec:
        v = _flatten(m)
        if not self.space.contains(v):
            raise InvalidData("matrices are not closed under multiplication")
        return self.space.coords_vec(v)

    # ---- 半单商 E/J ----
    @property
    def top_dim(self) -> int:
        return len(self.cols)

    def top_product(self, a: int, b: int) -> Vec:
        return self.radical.quotient_coords(self.products[self.cols[a]][self.cols[b]])

    def top_left(self, x: Vec) -> QMatrix:
        """x ∈ E/J 在 E/J 上的左乘"""
        q = self.top_dim
        cols: List[Vec] = []
        for b in range(q):
            acc: Vec = {}
            for a, c in x.items():
                vec_axpy(acc, c, self.top_product(a, b))
            cols.append(acc)
        return QMatrix.from_columns(cols, q)

    def lift(self, x: Vec) -> QMatrix:
        coeffs = [ZERO] * self.dim
        for a, c in x.items():
            coeffs[self.cols[a]] = c
        return linear_combination(self.elements, coeffs, (self.size, self.size))

    def center(self) -> List[Vec]:
        """E/J 的中心：Σ x_a (e_a e_b - e_b e_a) = 0"""
        q = self.top_dim
        rows: Dict[Tuple[int, int], Vec] = {}
        for a in range(q):
            for b in range(q):
                diff = dict(self.top_product(a, b))
                vec_axpy(diff, -ONE, self.top_product(b, a))
                for c, x in diff.items():
                    rows.setdefault((b, c), {})[a] = x
        if not rows:
            return [unit(a) for a in range(q)]
        return QMatrix.from_vecs(list(rows.values()), q).kernel().rows_list()

    def nonlocal_witness(self) -> Optional[QMatrix]:
        """E 局部时返回 None；否则返回见证元（特征多项式有多个不可约因子，或像非零而奇异）

        中心沿矩曲线 Σ t^i z_i 取元，至多 (z-1)·C(z,2) 步必遇本原元，
        本原元的极小多项式决定中心是否为域。非交换时扫描零因子，
        扫描落空且 gcd(m, dim M) = 1 时 E/J ≅ M_n(D) 必有 n = 1。
        判定不了时抛出 SplitFailure。
        """
        q = self.top_dim
        if q <= 1:
            return None
        center = self.center()
        z = len(center)
        for t in range((z - 1) * z * (z - 1) // 2 + 1):
            x: Vec = {}
            c = ONE
            for v in center:
                vec_axpy(x, c, v)
                c *= t
            factors = factor_charpoly(self.top_left(x))
            if len(factors) > 1:
                return self.lift(x)
            if len(factors[0][0]) - 1 == z:
                break
        else:
            raise SplitFailure(f"no primitive element in a {z}-dim center")
        if z == q:
            return None
        tops = [self.top_left(unit(a)) for a in range(q)]
        lifts = [self.lift(unit(a)) for a in range(q)]
        for top, lifted in zip(_sweep(tops), _sweep(lifts)):
            if len(factor_charpoly(top)) > 1 or top.det() == 0:
                return lifted
        m = math.isqrt(q // z)
        if m * m * z == q and math.gcd(m, self.size) == 1:
            return None
        raise SplitFailure(f"cannot decide whether a {q}-dim simple algebra over a degree-{z} field is a division ring")

    def is_local(self) -> bool:
        return self.nonlocal_witness() is None


# =============================================================================
# 4. Out(H) 的有理单模
# =============================================================================

@dataclass(frozen=True, eq=False)
class OutSimple:
    """kOut(H) 的有理单模；matrices[i] 为第 i 个外自同构类的作用"""
    out: OutGroup
    name: str
    matrices: Tuple[QMatrix, ...]
    end_dim: int

    @property
    def dim(self) -> int:
        return self.matrices[0].nrows

    @property
    def action(self) -> Tuple[QMatrix, ...]:
        return tuple(self.matrices[g] for g in self.out.generators)

    @property
    def character(self) -> Tuple[Fraction, ...]:
        return tuple(to_fraction(m.trace()) for m in self.matrices)

    def is_self_dual(self) -> bool:
        chi = self.character
        return all(chi[self.out.inverse(i)] == chi[i] for i in range(self.out.order))

    def is_representation(self) -> bool:
        t = self.out.table
        n = self.out.order
        return all(self.matrices[i] @ self.matrices[j] == self.matrices[t[i][j]]
                   for i in range(n) for j in range(n))

    def __repr__(self):
        return f"OutSimple({self.name}, dim={self.dim}, end_dim={self.end_dim})"


def regular_representation(out: OutGroup) -> List[QMatrix]:
    """左正则：e_psi -> e_{phi psi}"""
    n = out.order
    return [QMatrix.from_columns([unit(out.table[phi][psi]) for psi in range(n)], n) for phi in range(n)]


def _split_by(t: QMatrix, mats: List[QMatrix], gens: Sequence[int]) -> Optional[List[List[QMatrix]]]:
    """用交换子代数的元素 t 分裂：可约特征多项式取准素分量，非零奇异取核"""
    factors = factor_charpoly(t)
    if len(factors) > 1:
        pieces: List[List[QMatrix]] = []
        for f, e in factors:
            w = primary_component(t, f, e)
            pieces.extend(_split([restrict(m, w) for m in mats], gens))
        return pieces
    if not t.is_zero() and t.det() == 0:
        w = Subspace.row_space(t.kernel())
        return (_split([restrict(m, w) for m in mats], gens)
                + _split([induce_quotient(m, w) for m in mats], gens))
    return None


def _split(mats: List[QMatrix], gens: Sequence[int]) -> List[List[QMatrix]]:
    n = mats[0].nrows
    if n <= 1:
        return [mats]
    comm = commutant([mats[g] for g in gens])
    if len(comm) <= 1:
        return [mats]
    for t in _sweep(comm):
        pieces = _split_by(t, mats, gens)
        if pieces is not None:
            return pieces
    # 扫描落空：交换子代数必须可证为除环
    witness = MatrixAlgebra(comm).nonlocal_witness()
    if witness is None:
        return [mats]
    pieces = _split_by(witness, mats, gens)
    if pieces is None:
        raise SplitFailure(f"commutant of a {n}-dim piece is not a division ring but no splitting element was found")
    return pieces


@lru_cache(maxsize=None)
def qout_simples(out: OutGroup) -> Tuple[OutSimple, ...]:
    """Out(H) 的全部有理不可约表示：triv, sgn, ..., {d}dim"""
    gens = out.generators
    pieces = _split(regular_representation(out), gens)
    distinct: Dict[Tuple[Fraction, ...], List[QMatrix]] = {}
    for mats in pieces:
        chi = tuple(to_fraction(m.trace()) for m in mats)
        distinct.setdefault(chi, mats)
    ordered = sorted(distinct.items(), key=lambda kv: (kv[1][0].nrows, tuple(-x for x in kv[0])))
    total = Fraction(0)
    simples: List[OutSimple] = []
    used: Dict[str, int] = {}
    for chi, mats in ordered:
        dim = mats[0].nrows
        end_dim = len(commutant([mats[g] for g in gens])) if gens else dim * dim
        total += Fraction(dim * dim, end_dim)
        if dim == 1 and all(x == 1 for x in chi):
            base = "triv"
        elif dim == 1:
            base = "sgn"
        else:
            base = f"{dim}dim"
        used[base] = used.get(base, 0) + 1
        name = base if used[base] == 1 else f"{base}{used[base]}"
        simples.append(OutSimple(out, name, tuple(mats), end_dim))
    if total != out.order:
        raise SplitFailure(f"rational splitting of {out!r} accounts for {total} of {out.order}")
    logger.debug("%r: simples %s", out, [s.name for s in simples])
    return tuple(simples)


def out_simple(out: OutGroup, name: str) -> OutSimple:
    for s in qout_simples(out):
        if s.name == name:
            return s
    raise KeyError(f"no rational simple '{name}' for {out!r}")


# =============================================================================
# 5. ModuleRep 与迹特征
# =============================================================================

@dataclass(frozen=True)
class TraceCharacter:
    values: Tuple[Fraction, ...]

    def __sub__(self, other: "TraceCharacter") -> "TraceCharacter":
        return TraceCharacter(tuple(a - b for a, b in zip(self.values, other.values)))

    def __add__(self, other: "TraceCharacter") -> "TraceCharacter":
        return TraceCharacter(tuple(a + b for a, b in zip(self.values, other.values)))

    def is_zero(self) -> bool:
        return not any(self.values)


class ModuleRep:
    """有限维 kB(G,G)-模（作用于列向量）"""

    def __init__(self, algebra: AlgebraTable, dim: int, action: List[QMatrix]):
        if len(action) != algebra.dim:
            raise DimensionMismatch(f"{len(action)} action matrices for an algebra of dimension {algebra.dim}")
        self.algebra = algebra
        self.dim = dim
        self.action = action

    def __repr__(self):
        return f"ModuleRep(dim={self.dim})"

    @classmethod
    def regular(cls, algebra: AlgebraTable) -> "ModuleRep":
        return cls(algebra, algebra.dim, list(algebra.left_matrices))

    def act(self, x: Vec) -> QMatrix:
        return linear_combination(self.action, [x.get(k, ZERO) for k in range(self.algebra.dim)],
                                  (self.dim, self.dim))

    def trace_character(self) -> TraceCharacter:
        return TraceCharacter(tuple(to_fraction(m.trace()) for m in self.action))

    def check_relations(self, pairs: Optional[Sequence[Tuple[int, int]]] = None) -> bool:
        """rho(e_i) rho(e_j) = Σ_k c_ij^k rho(e_k)"""
        n = self.algebra.dim
        if pairs is None:
            pairs = [(i, j) for i in range(n) for j in range(n)]
        for i, j in pairs:
            if self.action[i] @ self.action[j] != self.act(self.algebra.products[i][j]):
                return False
        return True

    def submodule(self, w: Subspace) -> "ModuleRep":
        return ModuleRep(self.algebra, w.dim, [restrict(m, w) for m in self.action])

    def quotient(self, w: Subspace) -> "ModuleRep":
        return ModuleRep(self.algebra, self.dim - w.dim, [induce_quotient(m, w) for m in self.action])

    def spin(self, vectors: Sequence[Vec]) -> Subspace:
        gens = algebra_generators(self.algebra)
        return spin(vectors, [self.action[g] for g in gens], self.dim)

    def radical(self) -> Subspace:
        """Rad(M) = J(A)·M"""
        if self.dim == 0:
            return Subspace.zero(0)
        rad = radical_of_algebra(self.algebra)
        vecs = []
        for r in rad.vectors():
            m = self.act(r)
            vecs.extend(m.columns())
        return Subspace.span(vecs, self.dim)

    def endomorphisms(self) -> List[QMatrix]:
        gens = algebra_generators(self.algebra)
        return commutant([self.action[g] for g in gens])

    def end_dim(self) -> int:
        return len(self.endomorphisms())

    def is_indecomposable(self) -> bool:
        """End(M) 局部，即 End(M)/J 为除环；判定不了时抛出 SplitFailure"""
        if self.dim == 0:
            return False
        return MatrixAlgebra(self.endomorphisms()).is_local()


def quotient_rep(m: ModuleRep, w: Subspace) -> ModuleRep:
    return m.quotient(w)


# =============================================================================
# 6. 代数结构：生成元、根基、重数
# =============================================================================

@lru_cache(maxsize=None)
def algebra_generators(table: AlgebraTable) -> Tuple[int, ...]:
    """贪心取基元直到生成的子代数为全代数"""
    n = table.dim
    one = unit(table.identity_index)
    gens: List[int] = []
    sub = spin([one], [], n)
    for k in range(n):
        if sub.dim == n:
            break
        if sub.contains(unit(k)):
            continue
        gens.append(k)
        sub = spin([one], [table.left_matrices[g] for g in gens], n)
    logger.debug("algebra of dim %d generated by %d basis elements", n, len(gens))
    return tuple(gens)


@lru_cache(maxsize=None)
def radical_of_algebra(table: AlgebraTable) -> Subspace:
    """迹形式 (a,b) -> tr(L_{ab}) 的根"""
    n = table.dim
    traces = [sum((table.products[k][j].get(j, ZERO) for j in range(n)), ZERO) for k in range(n)]
    rows: List[Vec] = []
    for i in range(n):
        row: Vec = {}
        for j in range(n):
            s = sum((c * traces[k] for k, c in table.products[i][j].items()), ZERO)
            if s:
                row[j] = s
        rows.append(row)
    form = QMatrix.from_vecs(rows, n)
    rad = Subspace.row_space(form.kernel())
    logger.info("radical of the algebra: dim %d of %d", rad.dim, n)
    return rad


def multiplicities(m: ModuleRep, catalog: Dict[Any, ModuleRep]) -> Dict[Any, int]:
    """按迹特征解 χ_M = Σ m_i χ_{S_i}"""
    keys = list(catalog)
    chars = [catalog[k].trace_character().values for k in keys]
    n = m.algebra.dim
    if keys:
        gram = QMatrix.from_rows([[sum(a * b for a, b in zip(x, y)) for y in chars] for x in chars])
        if gram.rank() != len(keys):
            raise CatalogIncomplete("trace characters of the catalog are linearly dependent")
    target = {k: v for k, v in enumerate(m.trace_character().values) if v}
    if not keys:
        if target:
            raise InconsistentSystem("empty catalog for a nonzero module")
        return {}
    cols = [{k: v for k, v in enumerate(chi) if v} for chi in chars]
    a = QMatrix.from_columns([{i: QQ(x.numerator, x.denominator) for i, x in col.items()} for col in cols], n)
    sol = solve(a, {i: QQ(x.numerator, x.denominator) for i, x in target.items()})
    out: Dict[Any, int] = {}
    for idx, key in enumerate(keys):
        v = sol.get(idx, ZERO)
        if not is_integral(v) or v < 0:
            raise CatalogIncomplete(f"non-integral or negative multiplicity {to_fraction(v)} for {key}")
        out[key] = int(v)
    return out

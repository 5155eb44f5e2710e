"""
双 Burnside 模 kB(G,H)
约定：(G,H)-biset 左 G 右 H，B(G,H) 扮演 Hom(H,G)；
复合 B(G,H) × B(H,K) -> B(G,K) 用双陪集公式
    [X_L] ∘ [X_M] = Σ_{t ∈ p2(L)\\H/p1(M)} [X_{L * (t,1)M(t,1)^-1}]
"""

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from functools import cached_property, lru_cache
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import InvalidData, SourceTargetMismatch
from .goursat import GoursatLabel, Pair, ProductBasis, product_basis
from .groups import DEFAULT_BOUND, PermGroup, Subgroup
from .linalg import ONE, ZERO, QMatrix, Vec, qq, to_fraction, vec_axpy
from .utils import SCHEMA_VERSION, frac_to_json

logger = logging.getLogger(__name__)


# =============================================================================
# 1. BisetElement
# =============================================================================

class BisetElement:
    """kB(G,H) 中的有理线性组合；coeffs: 基下标 -> QQ（零系数不出现）"""

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis: ProductBasis, coeffs: Optional[Vec] = None):
        self.basis = basis
        self.coeffs: Vec = {i: c for i, c in (coeffs or {}).items() if c}

    @classmethod
    def of(cls, label: GoursatLabel, coeff: Any = 1) -> "BisetElement":
        basis = product_basis(label.left.group, label.right.group)
        return cls(basis, {label.index: qq(coeff)})

    @property
    def target(self) -> PermGroup:
        return self.basis.G

    @property
    def source(self) -> PermGroup:
        return self.basis.H

    def terms(self) -> List[Tuple[GoursatLabel, Any]]:
        return [(self.basis[i], c) for i, c in sorted(self.coeffs.items())]

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "BisetElement"):
        if self.basis is not other.basis:
            raise SourceTargetMismatch("biset elements live in different modules")

    def __add__(self, other: "BisetElement") -> "BisetElement":
        self._check(other)
        acc = dict(self.coeffs)
        vec_axpy(acc, ONE, other.coeffs)
        return BisetElement(self.basis, acc)

    def __sub__(self, other: "BisetElement") -> "BisetElement":
        self._check(other)
        acc = dict(self.coeffs)
        vec_axpy(acc, -ONE, other.coeffs)
        return BisetElement(self.basis, acc)

    def scale(self, c: Any) -> "BisetElement":
        c = qq(c)
        return BisetElement(self.basis, {i: c * x for i, x in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BisetElement):
            return NotImplemented
        return self.basis is other.basis and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.basis), tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        body = " + ".join(f"{to_fraction(c)}*[{lab.key}]" for lab, c in self.terms()) or "0"
        return f"BisetElement({body})"

    def to_json(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "target": _group_name(self.target),
            "source": _group_name(self.source),
            "coeffs": [{"label": lab.key, **frac_to_json(to_fraction(c))} for lab, c in self.terms()],
        }


def _group_name(g: PermGroup) -> str:
    return g.description or g.iso_name or f"order{g.order}"


# =============================================================================
# 2. 复合
# =============================================================================

@lru_cache(maxsize=None)
def double_coset_reps(H: PermGroup, left: Subgroup, right: Subgroup) -> Tuple[int, ...]:
    """left\\H/right 的代表，取规范序下最小元"""
    table = H.table
    seen: Set[int] = set()
    reps = []
    for h in range(H.order):
        if h in seen:
            continue
        reps.append(h)
        for p in left:
            row = table[table[p][h]]
            seen.update(row[q] for q in right)
    return tuple(reps)


def _star(a: GoursatLabel, b: GoursatLabel, t: int, target: ProductBasis) -> GoursatLabel:
    """L * (t,1)M(t,1)^-1，直接在 Goursat 数据上计算"""
    H = a.right.group
    ht = H.table
    ti = H.inv[t]
    bl, br = b.left, b.right
    # res[q]: 与 L 的左商元 q 相连的 K 侧商元集合
    res: Dict[int, Set[int]] = {}
    for q in range(a.left.quotient.order):
        found = set()
        for h in a.right.cosets[a.eta[q]]:
            qm = bl.proj.get(ht[ht[ti][h]][t])
            if qm is not None:
                found.add(b.eta[qm])
        if found:
            res[q] = found
    lc, rc = a.left.cosets, br.cosets
    one_k = br.proj[0]
    p1 = frozenset().union(*(lc[q] for q in res))
    k1 = frozenset().union(*(lc[q] for q, ts in res.items() if one_k in ts))
    reached = set().union(*res.values())
    p2 = frozenset().union(*(rc[r] for r in reached))
    k2 = frozenset().union(*(rc[r] for r in res[a.left.proj[0]]))
    lproj, rlift = a.left.proj, br.lift
    return target.identify_datum(p1, k1, p2, k2, lambda x: rlift[min(res[lproj[x]])])


@lru_cache(maxsize=None)
def compose_labels(a: GoursatLabel, b: GoursatLabel) -> Tuple[Tuple[int, int], ...]:
    """两个基元的复合：((目标基下标, 重数), ...)"""
    if a.right.group is not b.left.group:
        raise SourceTargetMismatch(f"cannot compose {a.key} with {b.key}")
    H = a.right.group
    target = product_basis(a.left.group, b.right.group)
    out: Counter = Counter()
    for t in double_coset_reps(H, a.right.P, b.left.P):
        out[_star(a, b, t, target).index] += 1
    return tuple(sorted(out.items()))


def compose(a: BisetElement, b: BisetElement) -> BisetElement:
    """a ∈ B(G,H), b ∈ B(H,K) -> a∘b ∈ B(G,K)"""
    if a.source is not b.target:
        raise SourceTargetMismatch(
            f"source of the left factor ({_group_name(a.source)}) differs from "
            f"target of the right factor ({_group_name(b.target)})"
        )
    target = product_basis(a.target, b.source)
    acc: Vec = {}
    for i, c in a.coeffs.items():
        la = a.basis[i]
        for j, d in b.coeffs.items():
            cd = c * d
            for k, n in compose_labels(la, b.basis[j]):
                v = acc.get(k, ZERO) + cd * n
                if v:
                    acc[k] = v
                else:
                    acc.pop(k, None)
    return BisetElement(target, acc)


# =============================================================================
# 3. 对偶与初等 biset
# =============================================================================

def opposite_label(label: GoursatLabel) -> GoursatLabel:
    target = product_basis(label.right.group, label.left.group)
    inv = [0] * len(label.eta)
    for q, v in enumerate(label.eta):
        inv[v] = q
    return target.lookup(label.right, label.left, tuple(inv))


def opposite(a: BisetElement) -> BisetElement:
    target = product_basis(a.source, a.target)
    return BisetElement(target, {opposite_label(a.basis[i]).index: c for i, c in a.coeffs.items()})


def graph_biset(target: PermGroup, source: PermGroup, pairs: Iterable[Pair]) -> BisetElement:
    """由子群 L ≤ target×source 给出的可迁 biset"""
    basis = product_basis(target, source)
    return BisetElement(basis, {basis.identify_pairs(pairs).index: ONE})


def _check_hom(src: PermGroup, dst: PermGroup, m: Sequence[int], injective: bool, what: str):
    if len(m) != src.order:
        raise InvalidData(f"{what}: map has {len(m)} entries, expected {src.order}")
    st, dt = src.table, dst.table
    for a in src.generators:
        for b in range(src.order):
            if m[st[a][b]] != dt[m[a]][m[b]]:
                raise InvalidData(f"{what}: map is not a homomorphism")
    if injective and len(set(m)) != src.order:
        raise InvalidData(f"{what}: map is not injective")


def identity(G: PermGroup) -> BisetElement:
    return graph_biset(G, G, ((g, g) for g in range(G.order)))


def induction(G: PermGroup, H: PermGroup, embedding: Sequence[int]) -> BisetElement:
    """Ind_H^G ∈ B(G,H)，L = {(h, h)}"""
    _check_hom(H, G, embedding, True, "Ind")
    return graph_biset(G, H, ((embedding[h], h) for h in range(H.order)))


def restriction(G: PermGroup, H: PermGroup, embedding: Sequence[int]) -> BisetElement:
    """Res^G_H ∈ B(H,G)"""
    return opposite(induction(G, H, embedding))


def inflation(G: PermGroup, normal: Subgroup) -> BisetElement:
    """Inf_{G/N}^G ∈ B(G, G/N)，L = {(g, gN)}"""
    normal = frozenset(normal)
    if not G.is_subgroup(normal) or not G.is_normal_in(normal, G.full):
        raise InvalidData("Inf: N is not a normal subgroup")
    q = G.quotient(G.full, normal)
    return graph_biset(G, q.group, ((g, q.proj[g]) for g in range(G.order)))


def deflation(G: PermGroup, normal: Subgroup) -> BisetElement:
    """Def^G_{G/N} ∈ B(G/N, G)"""
    return opposite(inflation(G, normal))


def isogation(src: PermGroup, dst: PermGroup, phi: Sequence[int]) -> BisetElement:
    """Iso(phi) ∈ B(dst, src)，L = {(phi(g), g)}"""
    if src.order != dst.order:
        raise InvalidData("Iso: groups of different orders")
    _check_hom(src, dst, phi, True, "Iso")
    return graph_biset(dst, src, ((phi[g], g) for g in range(src.order)))


def elementary(kind: str, **data) -> BisetElement:
    """kind ∈ {Ind, Res, Inf, Def, Iso}"""
    try:
        if kind == "Ind":
            return induction(data["G"], data["H"], data["embedding"])
        if kind == "Res":
            return restriction(data["G"], data["H"], data["embedding"])
        if kind == "Inf":
            return inflation(data["G"], data["normal"])
        if kind == "Def":
            return deflation(data["G"], data["normal"])
        if kind == "Iso":
            return isogation(data["source"], data["target"], data["phi"])
    except KeyError as e:
        raise InvalidData(f"{kind}: missing datum {e}") from None
    raise InvalidData(f"unknown elementary biset kind '{kind}'")


# =============================================================================
# 4. 结构常数
# =============================================================================

class AlgebraTable:
    """kB(G,G) 的结构常数：products[i][j] = e_i e_j（稀疏向量）"""

    def __init__(self, G: PermGroup, basis: ProductBasis, products: List[List[Vec]]):
        self.group = G
        self.basis = basis
        self.products = products
        self.dim = len(basis)
        self.identity_index = next(iter(identity(G).coeffs))

    def mul(self, x: Vec, y: Vec) -> Vec:
        acc: Vec = {}
        for i, c in x.items():
            row = self.products[i]
            for j, d in y.items():
                vec_axpy(acc, c * d, row[j])
        return acc

    @cached_property
    def left_matrices(self) -> List[QMatrix]:
        """L_k: x -> e_k x（作用于列向量）"""
        n = self.dim
        return [QMatrix.from_columns(self.products[k], n) for k in range(n)]

    def is_associative(self, triples: Optional[Iterable[Tuple[int, int, int]]] = None) -> bool:
        n = self.dim
        if triples is None:
            triples = ((i, j, k) for i in range(n) for j in range(n) for k in range(n))
        for i, j, k in triples:
            left = self.mul(self.products[i][j], {k: ONE})
            right = self.mul({i: ONE}, self.products[j][k])
            if left != right:
                return False
        return True

    def to_json(self) -> Dict[str, Any]:
        triples = []
        for i in range(self.dim):
            for j in range(self.dim):
                prod = self.products[i][j]
                if prod:
                    triples.append([i, j, [[self.basis[k].key, *_num_den(c)] for k, c in sorted(prod.items())]])
        return {
            "schema_version": SCHEMA_VERSION,
            "group": _group_name(self.group),
            "basis": [lab.key for lab in self.basis],
            "products": triples,
        }

    @classmethod
    def from_json(cls, G: PermGroup, data: Dict[str, Any]) -> "AlgebraTable":
        basis = product_basis(G, G)
        if data.get("schema_version") != SCHEMA_VERSION or data.get("basis") != [lab.key for lab in basis]:
            raise InvalidData("cached algebra table does not match the current basis")
        n = len(basis)
        products: List[List[Vec]] = [[{} for _ in range(n)] for _ in range(n)]
        for i, j, terms in data["products"]:
            products[i][j] = {basis.by_key(key).index: qq(num) / qq(den) for key, num, den in terms}
        return cls(G, basis, products)


def _num_den(c) -> Tuple[int, int]:
    f = to_fraction(c)
    return f.numerator, f.denominator


# ---- 并行计算（每个进程按描述重建群与基） ----
_WORKER: Dict[str, Any] = {}

# 子进程的注册表独立重建，行与项都按标签键传递，主进程按键对齐
KeyedRow = List[Tuple[str, Tuple[Tuple[str, int], ...]]]


def _init_worker(description: str, bound: int):
    from .grammar import parse_group

    G = parse_group(description, bound)
    _WORKER["basis"] = product_basis(G, G)


def _row(key: str) -> Tuple[str, KeyedRow]:
    basis: ProductBasis = _WORKER["basis"]
    try:
        a = basis.by_key(key)
    except KeyError:
        raise InvalidData(f"label {key} is unknown to the worker basis") from None
    return key, [(b.key, tuple((basis[k].key, m) for k, m in compose_labels(a, b))) for b in basis]


def _key_index(basis: ProductBasis, key: str) -> int:
    try:
        return basis.by_key(key).index
    except KeyError:
        raise InvalidData(f"worker label {key} is not in the basis") from None


def _align_row(basis: ProductBasis, row: KeyedRow) -> List[Tuple[Tuple[int, int], ...]]:
    out: List[Optional[Tuple[Tuple[int, int], ...]]] = [None] * len(basis)
    for bkey, terms in row:
        out[_key_index(basis, bkey)] = tuple(sorted((_key_index(basis, k), m) for k, m in terms))
    if len(row) != len(basis) or any(r is None for r in out):
        raise InvalidData("worker row does not cover the basis")
    return out  # type: ignore[return-value]


def structure_constants(G: PermGroup, jobs: int = 1, bound: int = DEFAULT_BOUND) -> AlgebraTable:
    basis = product_basis(G, G)
    n = len(basis)
    logger.info("structure constants of kB(%s,%s): %d x %d", _group_name(G), _group_name(G), n, n)
    rows: List[List[Tuple[Tuple[int, int], ...]]] = [None] * n  # type: ignore[list-item]
    if jobs > 1 and G.description and n > 1:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(G.description, bound)) as pool:
            keys = [lab.key for lab in basis]
            for key, row in pool.map(_row, keys, chunksize=max(1, n // (4 * jobs))):
                rows[_key_index(basis, key)] = _align_row(basis, row)
    else:
        for i in range(n):
            rows[i] = [compose_labels(basis[i], basis[j]) for j in range(n)]
    products = [[{k: qq(m) for k, m in rows[i][j]} for j in range(n)] for i in range(n)]
    return AlgebraTable(G, basis, products)


# =============================================================================
# 5. 轨道验证：直接构造 X ×_H Y
# =============================================================================

def _coset_space(A: PermGroup, B: PermGroup, l_set: FrozenSet[Pair]):
    """(A×B)/L 的陪集、左 A 作用表与右 B 作用表"""
    at, bt = A.table, B.table
    index: Dict[FrozenSet[Pair], int] = {}
    of_elem: Dict[Pair, int] = {}
    for a in range(A.order):
        for b in range(B.order):
            if (a, b) in of_elem:
                continue
            coset = frozenset((at[a][x], bt[b][y]) for x, y in l_set)
            idx = index.setdefault(coset, len(index))
            for z in coset:
                of_elem[z] = idx
    reps: List[Pair] = [None] * len(index)  # type: ignore[list-item]
    for coset, idx in index.items():
        reps[idx] = min(coset)
    left = [[of_elem[(at[g][a], b)] for a, b in reps] for g in range(A.order)]
    right = [[of_elem[(a, bt[B.inv[h]][b])] for a, b in reps] for h in range(B.order)]
    return len(reps), left, right


def compose_by_orbits(a: GoursatLabel, b: GoursatLabel) -> Tuple[Tuple[int, int], ...]:
    """把 X ×_H Y 分解为可迁 G×K 轨道并识别稳定子；仅用于小群"""
    G, H, K = a.left.group, a.right.group, b.right.group
    if b.left.group is not H:
        raise SourceTargetMismatch(f"cannot compose {a.key} with {b.key}")
    nx, x_left, x_right = _coset_space(G, H, a.elements())
    ny, y_left, y_right = _coset_space(H, K, b.elements())
    # (x·h, y) ~ (x, h·y)
    cls_of: Dict[Pair, int] = {}
    classes: List[Pair] = []
    for x in range(nx):
        for y in range(ny):
            if (x, y) in cls_of:
                continue
            for h in range(H.order):
                cls_of[(x_right[h][x], y_left[H.inv[h]][y])] = len(classes)
            classes.append((x, y))
    target = product_basis(G, K)
    out: Counter = Counter()
    seen: Set[int] = set()
    for c, (x, y) in enumerate(classes):
        if c in seen:
            continue
        orbit = set()
        stab = []
        for g in range(G.order):
            for k in range(K.order):
                d = cls_of[(x_left[g][x], y_right[K.inv[k]][y])]
                orbit.add(d)
                if d == c:
                    stab.append((g, k))
        seen |= orbit
        out[target.identify_pairs(stab).index] += 1
    return tuple(sorted(out.items()))

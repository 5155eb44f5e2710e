"""
G×H 子群共轭类的 Goursat 枚举
- 每个类由一对截段类 (P1/K1, P2/K2) 与同构 eta 在 N_G(P1,K1)×N_H(P2,K2) 作用下的轨道确定
- 从不把 G×H 作为一个群枚举（仅测试用的小规模验证路径除外）
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .automorphisms import isomorphisms
from .errors import NotASubgroup
from .groups import PermGroup, Section, Subgroup, closure

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


# =============================================================================
# 1. 数据类型
# =============================================================================

@dataclass(frozen=True, eq=False)
class GoursatLabel:
    """B(G,H) 的基元：G×H 中一个子群共轭类的规范名字"""
    key: str
    left: Section
    right: Section
    eta: Tuple[int, ...]
    eta_index: int
    index: int = -1

    @property
    def order(self) -> int:
        return len(self.left.P) * len(self.right.K)

    @property
    def quotient_order(self) -> int:
        return self.left.quotient.order

    def contains(self, x: int, y: int) -> bool:
        q = self.left.proj.get(x)
        return q is not None and self.right.proj.get(y) == self.eta[q]

    def elements(self) -> FrozenSet[Pair]:
        return datum_to_subgroup(self.datum())

    def datum(self) -> "GoursatDatum":
        partner = {x: self.right.lift[self.eta[q]] for x, q in self.left.proj.items()}
        return GoursatDatum(self.left.group, self.right.group,
                            self.left.P, self.left.K, self.right.P, self.right.K, partner)

    def __repr__(self):
        return f"GoursatLabel({self.key})"

    def __str__(self):
        return self.key


@dataclass(frozen=True)
class GoursatDatum:
    """(P1, K1, P2, K2, eta)；eta 由 partner 给出：partner[x] 是满足 (x, y) ∈ L 的一个 y"""
    G: PermGroup
    H: PermGroup
    P1: Subgroup
    K1: Subgroup
    P2: Subgroup
    K2: Subgroup
    partner: Dict[int, int]

    @property
    def order(self) -> int:
        return len(self.P1) * len(self.K2)


# =============================================================================
# 2. datum <-> subgroup
# =============================================================================

def datum_to_subgroup(d: GoursatDatum) -> FrozenSet[Pair]:
    """L(d) = {(x, y k) : x ∈ P1, k ∈ K2}"""
    table = d.H.table
    return frozenset((x, table[y][k]) for x, y in d.partner.items() for k in d.K2)


def _pair_closure(G: PermGroup, H: PermGroup, gens: List[Pair], limit: Set[Pair]) -> Optional[Set[Pair]]:
    """gens 生成的子群；一旦越出 limit 返回 None"""
    gt, ht = G.table, H.table
    result = {(0, 0)}
    queue = [(0, 0)]
    while queue:
        x, y = queue.pop()
        for a, b in gens:
            z = (gt[a][x], ht[b][y])
            if z not in result:
                if z not in limit:
                    return None
                result.add(z)
                queue.append(z)
    return result


def check_product_subgroup(G: PermGroup, H: PermGroup, pairs: Iterable[Pair]) -> FrozenSet[Pair]:
    l_set = set(pairs)
    if (0, 0) not in l_set or (G.order * H.order) % len(l_set):
        raise NotASubgroup("element set is not a subgroup of G×H")
    gens: List[Pair] = []
    reached: Set[Pair] = {(0, 0)}
    for z in sorted(l_set):
        if z in reached:
            continue
        gens.append(z)
        got = _pair_closure(G, H, gens, l_set)
        if got is None:
            raise NotASubgroup("element set is not closed under multiplication")
        reached = got
    return frozenset(l_set)


def subgroup_to_datum(G: PermGroup, H: PermGroup, pairs: Iterable[Pair]) -> GoursatDatum:
    l_set = check_product_subgroup(G, H, pairs)
    p1 = frozenset(x for x, _ in l_set)
    p2 = frozenset(y for _, y in l_set)
    k1 = frozenset(x for x, y in l_set if y == 0)
    k2 = frozenset(y for x, y in l_set if x == 0)
    partner: Dict[int, int] = {}
    for x, y in sorted(l_set):
        partner.setdefault(x, y)
    return GoursatDatum(G, H, p1, k1, p2, k2, partner)


# =============================================================================
# 3. 枚举
# =============================================================================

def _eta_orbits(s1: Section, s2: Section, G: PermGroup, H: PermGroup) -> List[List[Tuple[int, ...]]]:
    """同构集合在联合正规化子作用下的轨道，按最小元组排序"""
    isos = isomorphisms(s1.quotient, s2.quotient)
    if not isos:
        return []
    auts1 = [s1.induced_automorphism(n) for n in G.small_generators(s1.normalizer)]
    auts2 = [s2.induced_automorphism(n) for n in H.small_generators(s2.normalizer)]
    moves: List[Callable[[Tuple[int, ...]], Tuple[int, ...]]] = []
    for a1 in auts1:
        moves.append(lambda eta, a1=a1: _twist(eta, a1, None))
    for a2 in auts2:
        moves.append(lambda eta, a2=a2: tuple(a2[v] for v in eta))
    seen: Set[Tuple[int, ...]] = set()
    orbits = []
    for eta in isos:
        if eta in seen:
            continue
        orbit = {eta}
        queue = [eta]
        while queue:
            e = queue.pop()
            for mv in moves:
                f = mv(e)
                if f not in orbit:
                    orbit.add(f)
                    queue.append(f)
        seen |= orbit
        orbits.append(sorted(orbit))
    orbits.sort(key=lambda o: o[0])
    return orbits


def _twist(eta: Tuple[int, ...], a1: Tuple[int, ...], a2: Optional[Tuple[int, ...]]) -> Tuple[int, ...]:
    """eta' = a2 ∘ eta ∘ a1^-1"""
    out = [0] * len(eta)
    for q, v in enumerate(eta):
        out[a1[q]] = v if a2 is None else a2[v]
    return tuple(out)


class ProductBasis:
    """B(G,H) 的有序基以及从任意 Goursat 数据到标签的识别"""

    def __init__(self, G: PermGroup, H: PermGroup):
        self.G = G
        self.H = H
        raw: List[Tuple[Section, Section, int, List[Tuple[int, ...]]]] = []
        for s1 in G.section_classes:
            for s2 in H.section_classes:
                if s1.quotient.order != s2.quotient.order:
                    continue
                for idx, orbit in enumerate(_eta_orbits(s1, s2, G, H)):
                    raw.append((s1, s2, idx, orbit))
        raw.sort(key=lambda r: (-len(r[0].P) * len(r[1].K), f"{r[0].key}|{r[1].key}|{r[2]}"))
        self.labels: List[GoursatLabel] = []
        self._eta_lookup: Dict[Tuple[int, int, Tuple[int, ...]], GoursatLabel] = {}
        for s1, s2, idx, orbit in raw:
            label = GoursatLabel(f"{s1.key}|{s2.key}|{idx}", s1, s2, orbit[0], idx, len(self.labels))
            self.labels.append(label)
            for eta in orbit:
                self._eta_lookup[(s1.index, s2.index, eta)] = label
        self._by_key = {lab.key: lab for lab in self.labels}
        logger.info("basis B(%s, %s): %d labels", _name(G), _name(H), len(self.labels))

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __getitem__(self, i: int) -> GoursatLabel:
        return self.labels[i]

    def by_key(self, key: str) -> GoursatLabel:
        return self._by_key[key]

    def lookup(self, s1: Section, s2: Section, eta: Tuple[int, ...]) -> GoursatLabel:
        """截段类代表上的 eta -> 标签"""
        return self._eta_lookup[(s1.index, s2.index, eta)]

    def identify_datum(self, p1: Subgroup, k1: Subgroup, p2: Subgroup, k2: Subgroup,
                       partner: Callable[[int], int]) -> GoursatLabel:
        """任意 (P1,K1,P2,K2,eta) -> 规范标签；partner(x) 给出 (x, y) ∈ L 的一个 y"""
        G, H = self.G, self.H
        s1, h1 = G.locate_section(p1, k1)
        s2, h2 = H.locate_section(p2, k2)
        h1i = G.inv[h1]
        eta = tuple(s2.proj[H.conj(h2, partner(G.conj(h1i, x)))] for x in s1.lift)
        return self._eta_lookup[(s1.index, s2.index, eta)]

    def identify(self, d: GoursatDatum) -> GoursatLabel:
        return self.identify_datum(d.P1, d.K1, d.P2, d.K2, d.partner.__getitem__)

    def identify_pairs(self, pairs: Iterable[Pair]) -> GoursatLabel:
        return self.identify(subgroup_to_datum(self.G, self.H, pairs))


def _name(g: PermGroup) -> str:
    return g.description or g.iso_name or f"order {g.order}"


@lru_cache(maxsize=None)
def product_basis(G: PermGroup, H: PermGroup) -> ProductBasis:
    return ProductBasis(G, H)


def product_subgroup_classes(G: PermGroup, H: PermGroup) -> List[GoursatLabel]:
    return list(product_basis(G, H).labels)


# =============================================================================
# 4. 共轭判定与小规模验证
# =============================================================================

def are_conjugate(G: PermGroup, H: PermGroup, l1: Iterable[Pair], l2: Iterable[Pair]) -> bool:
    """分量共轭的轨道搜索"""
    a, b = frozenset(l1), frozenset(l2)
    if len(a) != len(b):
        return False
    if len({x for x, _ in a}) != len({x for x, _ in b}) or len({y for _, y in a}) != len({y for _, y in b}):
        return False
    gt, ht = G.table, H.table
    moves = [(g, 0) for g in G.generators] + [(0, h) for h in H.generators]

    def conj(s: FrozenSet[Pair], g: int, h: int) -> FrozenSet[Pair]:
        gi, hi = G.inv[g], H.inv[h]
        return frozenset((gt[gt[g][x]][gi], ht[ht[h][y]][hi]) for x, y in s)

    orbit = {a}
    queue = [a]
    while queue:
        s = queue.pop()
        if s == b:
            return True
        for g, h in moves:
            t = conj(s, g, h)
            if t not in orbit:
                orbit.add(t)
                queue.append(t)
    return False


def direct_product(G: PermGroup, H: PermGroup, bound: int = 10_000) -> Tuple[PermGroup, Dict[Pair, int]]:
    """G×H 作为不交点集上的置换群，以及 (x, y) -> 下标（仅用于小规模验证）"""
    n, m = G.degree, H.degree

    def join(p, q):
        return tuple(p) + tuple(n + v for v in q)

    gens = [join(G.elements[g], range(m)) for g in G.generators]
    gens += [join(range(n), H.elements[h]) for h in H.generators]
    prod = closure(gens, bound=bound, degree=n + m)
    index = {(x, y): prod.index[join(G.elements[x], H.elements[y])]
             for x in range(G.order) for y in range(H.order)}
    return prod, index

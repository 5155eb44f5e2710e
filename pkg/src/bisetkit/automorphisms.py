"""
自同构群与外自同构群
自同构以映射元组表示：phi[i] = 元素 i 的像（下标）
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

from .errors import BoundExceeded
from .groups import DEFAULT_BOUND, PermGroup, isomorphisms_iter, iso_test

logger = logging.getLogger(__name__)

Map = Tuple[int, ...]


def compose_maps(f: Map, g: Map) -> Map:
    """f ∘ g"""
    return tuple(f[x] for x in g)


def inner_automorphism(g: PermGroup, x: int) -> Map:
    return tuple(g.conj(x, y) for y in range(g.order))


@lru_cache(maxsize=None)
def automorphism_list(g: PermGroup, bound: int = DEFAULT_BOUND) -> Tuple[Map, ...]:
    """Aut(G) 全部元素，按元组排序（恒等在首位）"""
    if g.order > bound:
        raise BoundExceeded(bound, repr(g))
    auts = sorted(isomorphisms_iter(g, g))
    logger.debug("%r: |Aut| = %d", g, len(auts))
    return tuple(auts)


def isomorphisms(a: PermGroup, b: PermGroup) -> List[Map]:
    """全部同构 a -> b：iso0 ∘ Aut(a)"""
    iso0 = iso_test(a, b)
    if iso0 is None:
        return []
    return sorted(compose_maps(iso0, phi) for phi in automorphism_list(a))


@dataclass(frozen=True, eq=False)
class OutGroup:
    """Out(H) = Aut(H)/Inn(H)；reps[i] 为陪集中最小的自同构"""
    base: PermGroup
    aut_order: int
    reps: Tuple[Map, ...]
    table: Tuple[Tuple[int, ...], ...]
    class_of: Dict[Map, int]

    @property
    def order(self) -> int:
        return len(self.reps)

    @property
    def inn_order(self) -> int:
        return self.base.order // len(self.base.center)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse(self, i: int) -> int:
        row = self.table[i]
        return row.index(0)

    def classify(self, phi: Map) -> int:
        """任意自同构所在的外自同构类"""
        return self.class_of[phi]

    @property
    def generators(self) -> Tuple[int, ...]:
        """贪心生成元（下标升序）"""
        gens: List[int] = []
        reached = {0}
        for x in range(self.order):
            if len(reached) == self.order:
                break
            if x in reached:
                continue
            gens.append(x)
            reached = {0}
            queue = [0]
            while queue:
                y = queue.pop()
                for g in gens:
                    z = self.table[g][y]
                    if z not in reached:
                        reached.add(z)
                        queue.append(z)
        return tuple(gens)

    def __repr__(self):
        return f"OutGroup(base={self.base!r}, order={self.order})"


@lru_cache(maxsize=None)
def out_group(h: PermGroup, bound: int = DEFAULT_BOUND) -> OutGroup:
    """Out(H)，陪集代表取最小元组，恒等在首位"""
    auts = automorphism_list(h, bound)
    inner = sorted({inner_automorphism(h, x) for x in range(h.order)})
    class_of: Dict[Map, int] = {}
    reps: List[Map] = []
    for phi in auts:
        if phi in class_of:
            continue
        idx = len(reps)
        reps.append(phi)
        for c in inner:
            class_of[compose_maps(phi, c)] = idx
    table = tuple(
        tuple(class_of[compose_maps(a, b)] for b in reps) for a in reps
    )
    out = OutGroup(h, len(auts), tuple(reps), table, class_of)
    logger.debug("%r: |Aut|=%d |Inn|=%d |Out|=%d", h, len(auts), len(inner), out.order)
    return out

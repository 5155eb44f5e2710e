"""
置换群引擎
- Perm: 0-based 像元组；乘法 (p*q)(x) = p(q(x))
- PermGroup: 完全枚举的有限置换群，元素按像序列排序（单位元下标为 0），乘法表按下标
- 子群 / 共轭类 / 截段 (P, K) / 商群 / 同构判定 / 同构类命名
"""

import itertools
import logging
import threading
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import BoundExceeded, InvalidData, NotASubgroup
from .utils import stable_digest

logger = logging.getLogger(__name__)

Perm = Tuple[int, ...]
Subgroup = frozenset

DEFAULT_BOUND = 400


# =============================================================================
# 1. 置换基本运算
# =============================================================================

def perm_mul(p: Perm, q: Perm) -> Perm:
    """先作用 q 再作用 p"""
    return tuple(p[x] for x in q)


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def is_perm(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


def cycles_to_perm(cycles: Sequence[Sequence[int]], degree: int) -> Perm:
    """0-based 轮换列表 -> 置换"""
    img = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[a] = b
    if not is_perm(img):
        raise InvalidData(f"cycles {cycles} do not define a permutation")
    return tuple(img)


def format_perm(p: Perm) -> str:
    """1-based 轮换记号；单位元记作 ()"""
    seen = set()
    parts = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        parts.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(parts) or "()"


# =============================================================================
# 2. PermGroup
# =============================================================================

class PermGroup:
    """完全枚举的置换群；所有子群数据以元素下标的 frozenset 表示"""

    def __init__(self, degree: int, elements: Iterable[Perm], generators: Sequence[Perm] = (),
                 description: Optional[str] = None):
        self.degree = degree
        self.elements: List[Perm] = sorted(set(elements))
        self.index: Dict[Perm, int] = {p: i for i, p in enumerate(self.elements)}
        self.order = len(self.elements)
        self.description = description
        self.perm_generators: Tuple[Perm, ...] = tuple(generators)
        els = self.elements
        index = self.index
        self.table: List[List[int]] = [[index[perm_mul(p, q)] for q in els] for p in els]
        self.inv: List[int] = [index[perm_inv(p)] for p in els]
        self.elt_order: List[int] = [self._element_order(i) for i in range(self.order)]
        self._subgroup_groups: Dict[Subgroup, Tuple["PermGroup", Tuple[int, ...]]] = {}
        self._lock = threading.Lock()
        self.iso_name: Optional[str] = None

    def __repr__(self):
        name = self.description or self.iso_name or "?"
        return f"PermGroup({name}, order={self.order}, degree={self.degree})"

    def __len__(self):
        return self.order

    def _element_order(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.table[i][x]
            k += 1
        return k

    # ---- 元素运算 ----
    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return self.table[self.table[g][x]][self.inv[g]]

    def conjugate_set(self, s: Iterable[int], g: int) -> Subgroup:
        t, gi = self.table, self.inv[g]
        tg = t[g]
        return frozenset(t[tg[x]][gi] for x in s)

    def generate(self, seeds: Iterable[int]) -> Subgroup:
        """由下标生成的子群（左乘闭包）"""
        gens = sorted(set(seeds))
        result = {0}
        queue = [0]
        table = self.table
        while queue:
            x = queue.pop()
            for g in gens:
                y = table[g][x]
                if y not in result:
                    result.add(y)
                    queue.append(y)
        return frozenset(result)

    def small_generators(self, s: Optional[Iterable[int]] = None) -> Tuple[int, ...]:
        """贪心取生成元：元素阶降序，下标升序"""
        pool = sorted(self.elements_of(s), key=lambda i: (-self.elt_order[i], i))
        gens: List[int] = []
        current = frozenset([0])
        target = len(pool)
        for x in pool:
            if len(current) == target:
                break
            if x not in current:
                gens.append(x)
                current = self.generate(gens)
        return tuple(gens)

    def elements_of(self, s: Optional[Iterable[int]]) -> List[int]:
        return list(range(self.order)) if s is None else sorted(s)

    @cached_property
    def generators(self) -> Tuple[int, ...]:
        return self.small_generators()

    @cached_property
    def full(self) -> Subgroup:
        return frozenset(range(self.order))

    @cached_property
    def trivial(self) -> Subgroup:
        return frozenset([0])

    # ---- 子群判定 ----
    def is_subgroup(self, s: Iterable[int]) -> bool:
        s = frozenset(s)
        if 0 not in s or self.order % len(s):
            return False
        table = self.table
        return all(table[a][b] in s for a in s for b in s)

    def check_subgroup(self, s: Iterable[int]) -> Subgroup:
        s = frozenset(s)
        if not self.is_subgroup(s):
            raise NotASubgroup(f"{sorted(s)} is not a subgroup of {self!r}")
        return s

    def is_normal_in(self, k: Subgroup, p: Subgroup) -> bool:
        return all(self.conjugate_set(k, g) == k for g in self.small_generators(p))

    def normalizer(self, s: Subgroup, within: Optional[Subgroup] = None) -> Subgroup:
        pool = self.full if within is None else within
        return frozenset(g for g in pool if self.conjugate_set(s, g) == s)

    def centralizer(self, s: Iterable[int]) -> Subgroup:
        s = list(s)
        table = self.table
        return frozenset(g for g in range(self.order) if all(table[g][x] == table[x][g] for x in s))

    @cached_property
    def center(self) -> Subgroup:
        return self.centralizer(self.generators)

    @cached_property
    def order_signature(self) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
        return self.order, tuple(sorted(Counter(self.elt_order).items()))

    # ---- 子群枚举 ----
    @cached_property
    def all_subgroups(self) -> Tuple[Subgroup, ...]:
        """全部子群：先取循环子群，再逐层与循环子群取 join"""
        cyclic: Dict[Subgroup, int] = {}
        for x in range(self.order):
            cyclic.setdefault(self.generate([x]), x)
        gens_of: Dict[Subgroup, Tuple[int, ...]] = {c: (x,) for c, x in cyclic.items()}
        frontier = list(gens_of)
        while frontier:
            new = []
            for s in frontier:
                for x in cyclic.values():
                    if x in s:
                        continue
                    t = self.generate(gens_of[s] + (x,))
                    if t not in gens_of:
                        gens_of[t] = gens_of[s] + (x,)
                        new.append(t)
            frontier = new
        subs = sorted(gens_of, key=_subgroup_sort_key)
        logger.debug("%r: %d subgroups", self, len(subs))
        return tuple(subs)

    @cached_property
    def subgroup_classes(self) -> List["SubgroupClass"]:
        """共轭类，代表元取排序元素列表最小者"""
        assigned: Dict[Subgroup, int] = {}
        raw: List[Tuple[Subgroup, List[Subgroup]]] = []
        for s in self.all_subgroups:
            if s in assigned:
                continue
            members = sorted({self.conjugate_set(s, g) for g in range(self.order)}, key=_subgroup_sort_key)
            for m in members:
                assigned[m] = len(raw)
            raw.append((s, members))
        classes = []
        seen_names: Counter = Counter()
        for idx, (rep, members) in enumerate(raw):
            name = iso_name(self.subgroup_group(rep)[0])
            seen_names[name] += 1
            key = name if seen_names[name] == 1 else f"{name}_{seen_names[name]}"
            classes.append(SubgroupClass(idx, key, rep, tuple(members)))
        logger.debug("%r: %d subgroup classes", self, len(classes))
        return classes

    @cached_property
    def subgroup_class_index(self) -> Dict[Subgroup, int]:
        return {m: c.index for c in self.subgroup_classes for m in c.members}

    def class_of(self, s: Subgroup) -> "SubgroupClass":
        return self.subgroup_classes[self.subgroup_class_index[s]]

    # ---- 子群作为群 ----
    def subgroup_group(self, s: Subgroup) -> Tuple["PermGroup", Tuple[int, ...]]:
        """子群作为独立 PermGroup，以及嵌入（子群下标 -> 本群下标）"""
        if len(s) == self.order:
            return self, tuple(range(self.order))
        with self._lock:
            hit = self._subgroup_groups.get(s)
        if hit is not None:
            return hit
        sub = PermGroup(self.degree, [self.elements[i] for i in s])
        emb = tuple(self.index[p] for p in sub.elements)
        with self._lock:
            self._subgroup_groups.setdefault(s, (sub, emb))
            return self._subgroup_groups[s]

    def quotient(self, p: Subgroup, k: Subgroup) -> "Quotient":
        """P/K 实现为陪集作用；K 平凡时直接用 P 本身"""
        if not k <= p or not self.is_normal_in(k, p):
            raise NotASubgroup("quotient needs K normal in P")
        if len(k) == 1:
            grp, emb = self.subgroup_group(p)
            proj = {x: i for i, x in enumerate(emb)}
            return Quotient(grp, proj)
        table = self.table
        coset_of: Dict[int, int] = {}
        reps: List[int] = []
        for x in sorted(p):
            if x in coset_of:
                continue
            for y in k:
                coset_of[table[x][y]] = len(reps)
            reps.append(x)

        def action(x: int) -> Perm:
            return tuple(coset_of[table[x][r]] for r in reps)

        images = {x: action(x) for x in p}
        grp = PermGroup(len(reps), set(images.values()))
        proj = {x: grp.index[img] for x, img in images.items()}
        return Quotient(grp, proj)

    # ---- 截段 ----
    @cached_property
    def section_classes(self) -> List["Section"]:
        """(P, K)，K ⊴ P ≤ G，模同时共轭"""
        out: List[Section] = []
        keys: Counter = Counter()
        for cls in self.subgroup_classes:
            p = cls.rep
            normal = [t for t in self.all_subgroups if t <= p and self.is_normal_in(t, p)]
            n_p = self.normalizer(p)
            done = set()
            for k in normal:
                if k in done:
                    continue
                done.update(self.conjugate_set(k, g) for g in n_p)
                base = f"{cls.key}/{self.class_of(k).key}"
                keys[base] += 1
                key = base if keys[base] == 1 else f"{base}#{keys[base]}"
                q = self.quotient(p, k)
                out.append(Section(
                    index=len(out), key=key, group=self, P=p, K=k,
                    quotient=q.group, proj=q.proj, lift=q.lift, cosets=q.cosets,
                    normalizer=frozenset(g for g in n_p if self.conjugate_set(k, g) == k),
                ))
        logger.debug("%r: %d section classes", self, len(out))
        return out

    @cached_property
    def section_lookup(self) -> Dict[Tuple[Subgroup, Subgroup], Tuple["Section", int]]:
        """(P, K) -> (截段类, h)，其中 h (P, K) h^-1 为类代表"""
        lookup: Dict[Tuple[Subgroup, Subgroup], Tuple[Section, int]] = {}
        for sec in self.section_classes:
            for g in range(self.order):
                key = (self.conjugate_set(sec.P, g), self.conjugate_set(sec.K, g))
                if key not in lookup:
                    lookup[key] = (sec, self.inv[g])
        return lookup

    def locate_section(self, p: Subgroup, k: Subgroup) -> Tuple["Section", int]:
        try:
            return self.section_lookup[(p, k)]
        except KeyError:
            raise NotASubgroup("not a section of the group") from None


def _subgroup_sort_key(s: Subgroup):
    return len(s), sorted(s)


@dataclass(frozen=True)
class SubgroupClass:
    index: int
    key: str
    rep: Subgroup
    members: Tuple[Subgroup, ...]

    @property
    def order(self) -> int:
        return len(self.rep)

    @property
    def size(self) -> int:
        return len(self.members)


class Quotient:
    """商群及其投影"""

    def __init__(self, group: PermGroup, proj: Dict[int, int]):
        self.group = group
        self.proj = proj
        lift = [-1] * group.order
        cosets: List[List[int]] = [[] for _ in range(group.order)]
        for x in sorted(proj):
            q = proj[x]
            if lift[q] < 0:
                lift[q] = x
            cosets[q].append(x)
        self.lift: Tuple[int, ...] = tuple(lift)
        self.cosets: Tuple[Subgroup, ...] = tuple(frozenset(c) for c in cosets)


@dataclass(frozen=True, eq=False)
class Section:
    """截段类代表 (P, K) 及商群 P/K 的忠实置换实现"""
    index: int
    key: str
    group: PermGroup
    P: Subgroup
    K: Subgroup
    quotient: PermGroup
    proj: Dict[int, int]
    lift: Tuple[int, ...]
    cosets: Tuple[Subgroup, ...]
    normalizer: Subgroup

    @property
    def quotient_order(self) -> int:
        return self.quotient.order

    def induced_automorphism(self, n: int) -> Tuple[int, ...]:
        """n ∈ N_G(P, K) 在 P/K 上诱导的自同构"""
        g = self.group
        return tuple(self.proj[g.conj(n, x)] for x in self.lift)

    def __repr__(self):
        return f"Section({self.key})"


# =============================================================================
# 3. closure
# =============================================================================

def closure(generators: Sequence[Sequence[int]], bound: int = DEFAULT_BOUND,
            degree: Optional[int] = None, description: Optional[str] = None) -> PermGroup:
    """生成元的闭包；元素数超过 bound 时抛出 BoundExceeded"""
    gens = [tuple(g) for g in generators]
    if degree is None:
        degree = len(gens[0]) if gens else 1
    for g in gens:
        if len(g) != degree or not is_perm(g):
            raise InvalidData(f"generator {g} is not a permutation of degree {degree}")
    ident = tuple(range(degree))
    seen = {ident}
    queue = [ident]
    while queue:
        x = queue.pop()
        for g in gens:
            y = perm_mul(g, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > bound:
                    raise BoundExceeded(bound, description or "group")
                queue.append(y)
    logger.debug("closure: %d generators -> order %d", len(gens), len(seen))
    return PermGroup(degree, seen, gens, description)


# =============================================================================
# 4. 同构判定
# =============================================================================

def extend_homomorphism(a: PermGroup, b: PermGroup, gens: Sequence[int],
                        images: Sequence[int]) -> Optional[List[int]]:
    """把生成元的像扩张为同态；不相容时返回 None"""
    m = [-1] * a.order
    m[0] = 0
    queue = [0]
    at, bt = a.table, b.table
    while queue:
        x = queue.pop()
        mx = m[x]
        for g, im in zip(gens, images):
            y = at[g][x]
            v = bt[im][mx]
            if m[y] < 0:
                m[y] = v
                queue.append(y)
            elif m[y] != v:
                return None
    return m


def isomorphisms_iter(a: PermGroup, b: PermGroup):
    """回溯生成元的像（按元素阶约束），逐个产出同构映射"""
    if a.order_signature != b.order_signature:
        return
    gens = a.generators
    candidates = [[y for y in range(b.order) if b.elt_order[y] == a.elt_order[g]] for g in gens]
    for images in itertools.product(*candidates):
        m = extend_homomorphism(a, b, gens, images)
        if m is not None and len(set(m)) == b.order:
            yield tuple(m)


def iso_test(a: PermGroup, b: PermGroup) -> Optional[Tuple[int, ...]]:
    if a is b:
        return tuple(range(a.order))
    return next(isomorphisms_iter(a, b), None)


# =============================================================================
# 5. 同构类命名
# =============================================================================

# 阶不超过此值时用极小乘法表作同构类键
CANONICAL_LIMIT = 24

Table = Tuple[Tuple[int, ...], ...]

_CANONICAL: Dict[Tuple[Perm, ...], Table] = {}


def _generating_tuples(g: PermGroup) -> List[Tuple[int, ...]]:
    """长度最小的全部有序生成组（逐个加入不在已生成子群中的元素）"""
    n = g.order
    if n == 1:
        return [()]
    level: List[Tuple[Tuple[int, ...], Subgroup]] = [((), g.trivial)]
    while True:
        grown, done = [], []
        for gens, sub in level:
            for x in range(1, n):
                if x in sub:
                    continue
                t = gens + (x,)
                s = g.generate(t)
                if len(s) == n:
                    done.append(t)
                else:
                    grown.append((t, s))
        if done:
            return done
        level = grown


def _bfs_order(g: PermGroup, gens: Tuple[int, ...]) -> List[int]:
    """从单位元出发依次右乘生成元的广度优先编号"""
    order = [0]
    seen = {0}
    k = 0
    while k < len(order):
        row = g.table[order[k]]
        k += 1
        for x in gens:
            y = row[x]
            if y not in seen:
                seen.add(y)
                order.append(y)
    return order


def _relabelled(g: PermGroup, order: List[int], best: Optional[Table]) -> Optional[Table]:
    """按 order 重新编号的乘法表；不比 best 小时提前返回 None"""
    pos = {x: i for i, x in enumerate(order)}
    smaller = best is None
    rows = []
    for i, a in enumerate(order):
        ta = g.table[a]
        row = tuple(pos[ta[b]] for b in order)
        if not smaller:
            if row > best[i]:
                return None
            if row < best[i]:
                smaller = True
        rows.append(row)
    return tuple(rows) if smaller else None


def canonical_table(g: PermGroup) -> Optional[Table]:
    """所有极小生成组的 BFS 编号下字典序最小的乘法表；阶超过 CANONICAL_LIMIT 时为 None"""
    if g.order > CANONICAL_LIMIT:
        return None
    cache_key = tuple(g.elements)
    hit = _CANONICAL.get(cache_key)
    if hit is not None:
        return hit
    best: Optional[Table] = None
    tuples = _generating_tuples(g)
    for gens in tuples:
        cand = _relabelled(g, _bfs_order(g, gens), best)
        if cand is not None:
            best = cand
    logger.debug("%r: canonical table over %d generating tuples", g, len(tuples))
    _CANONICAL[cache_key] = best
    return best


def canonical_key(g: PermGroup) -> Optional[str]:
    """(阶, 元素阶分布, 极小乘法表) 的摘要；两群同构当且仅当键相等"""
    table = canonical_table(g)
    if table is None:
        return None
    return stable_digest([g.order_signature, table])


_NAMED_SIGNATURES: Dict[Tuple[int, Tuple[Tuple[int, int], ...]], str] = {
    (4, ((1, 1), (2, 3))): "V4",
    (6, ((1, 1), (2, 3), (3, 2))): "S3",
    (8, ((1, 1), (2, 1), (4, 6))): "Q8",
    (8, ((1, 1), (2, 3), (4, 4))): "C2xC4",
    (8, ((1, 1), (2, 7))): "C2^3",
    (9, ((1, 1), (3, 8))): "C3xC3",
    (12, ((1, 1), (2, 3), (3, 8))): "A4",
    (12, ((1, 1), (2, 3), (3, 2), (6, 6))): "C2xC6",
    (12, ((1, 1), (2, 1), (3, 2), (4, 6), (6, 2))): "Dic12",
    (16, ((1, 1), (2, 15))): "C2^4",
    (24, ((1, 1), (2, 9), (3, 8), (4, 6))): "S4",
    (60, ((1, 1), (2, 15), (3, 20), (5, 24))): "A5",
    (120, ((1, 1), (2, 25), (3, 20), (4, 30), (5, 24), (6, 20))): "S5",
}


def base_name(g: PermGroup) -> str:
    """由元素阶统计得到的名字；未命名的小群带极小乘法表摘要，大群带统计摘要（可能碰撞）"""
    n = g.order
    if n == 1:
        return "1"
    orders = Counter(g.elt_order)
    if orders.get(n):
        return f"C{n}"
    sig = g.order_signature
    if sig in _NAMED_SIGNATURES:
        return _NAMED_SIGNATURES[sig]
    m = n // 2
    if n % 2 == 0 and m >= 3 and orders.get(m) and orders.get(2, 0) == m + (1 - m % 2):
        return f"D{n}"
    key = canonical_key(g)
    if key is not None:
        return f"G{n}_{key[:6]}"
    return f"G{n}_{stable_digest(sig, 6)}"


class IsoRegistry:
    """同构类名字注册表

    阶 ≤ CANONICAL_LIMIT 时按极小乘法表判同构，未命名的小群名字本身带表摘要，碰撞后缀也取表摘要；
    更大的群用 iso_test，碰撞后缀 ~k 按登记顺序编号。
    """

    def __init__(self):
        self._entries: Dict[str, List[Tuple[str, PermGroup]]] = {}
        self._lock = threading.RLock()

    def name(self, g: PermGroup) -> str:
        if g.iso_name is not None:
            return g.iso_name
        base = base_name(g)
        key = canonical_key(g)
        with self._lock:
            entries = self._entries.setdefault(base, [])
            for name, rep in entries:
                same = canonical_key(rep) == key if key is not None else iso_test(rep, g) is not None
                if same:
                    g.iso_name = name
                    return name
            if not entries:
                name = base
            elif key is not None:
                name = f"{base}~{key[:6]}"
            else:
                name = f"{base}~{len(entries) + 1}"
            if entries:
                logger.warning("iso-class collision on %s, new class %s", base, name)
            entries.append((name, g))
            g.iso_name = name
            return name


REGISTRY = IsoRegistry()


def iso_name(g: PermGroup) -> str:
    return REGISTRY.name(g)

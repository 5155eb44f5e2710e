"""
群描述语法
  1 | C<n> | S<n> | A<n> | D<n>（阶为 n 的二面体群）| V4 | Q8
  | <因子>x<因子>...（不交点集上的直积）
  | gens:(1 2)(3 4);(1 2 3)（1-based 轮换，生成元以 ; 分隔）
"""

import re
from functools import lru_cache
from typing import List, Sequence, Tuple

from .errors import GrammarError, InvalidData
from .groups import DEFAULT_BOUND, Perm, PermGroup, closure, cycles_to_perm, format_perm

GRAMMAR_HELP = (
    "group grammar: 1 | C<n> | S<n> | A<n> | D<n> (dihedral of order n) | V4 | Q8 | "
    "products with 'x' (e.g. C2xC2) | gens:(1 2)(3 4);(1 2 3)"
)

# =============================================================================
# 1. 词法
# =============================================================================

_FACTOR_RE = re.compile(r"^(?:(1)|([CSAD])(\d{1,3})|(V4)|(Q8))$")
_CYCLE_RE = re.compile(r"\(([\d\s,]*)\)")

# 生成元：(度数, 0-based 轮换列表的列表)
Factor = Tuple[int, List[List[List[int]]]]


# =============================================================================
# 2. 因子族
# =============================================================================

class GroupFactory:
    """各群族的生成元（0-based 轮换）"""

    @staticmethod
    def cyclic(n: int) -> Factor:
        if n < 1:
            raise GrammarError(f"C{n}: order must be positive. {GRAMMAR_HELP}")
        if n == 1:
            return 1, []
        return n, [[list(range(n))]]

    @staticmethod
    def symmetric(n: int) -> Factor:
        if n < 1:
            raise GrammarError(f"S{n}: degree must be positive. {GRAMMAR_HELP}")
        if n == 1:
            return 1, []
        if n == 2:
            return 2, [[[0, 1]]]
        return n, [[[0, 1]], [list(range(n))]]

    @staticmethod
    def alternating(n: int) -> Factor:
        if n < 1:
            raise GrammarError(f"A{n}: degree must be positive. {GRAMMAR_HELP}")
        if n < 3:
            return n, []
        return n, [[[0, 1, k]] for k in range(2, n)]

    @staticmethod
    def dihedral(n: int) -> Factor:
        """阶为 n 的二面体群"""
        if n < 2 or n % 2:
            raise GrammarError(f"D{n}: the order of a dihedral group is even. {GRAMMAR_HELP}")
        if n == 2:
            return 2, [[[0, 1]]]
        if n == 4:
            return GroupFactory.klein()
        m = n // 2
        rotation = [list(range(m))]
        reflection = [[i, m - i] for i in range(1, (m + 1) // 2)]
        return m, [rotation, reflection]

    @staticmethod
    def klein() -> Factor:
        return 4, [[[0, 1], [2, 3]], [[0, 2], [1, 3]]]

    @staticmethod
    def quaternion() -> Factor:
        # Q8 的正则表示：i = (1 2 3 4)(5 6 7 8)，j = (1 5 3 7)(2 8 4 6)
        return 8, [[[0, 1, 2, 3], [4, 5, 6, 7]], [[0, 4, 2, 6], [1, 7, 3, 5]]]


def _factor(token: str) -> Factor:
    m = _FACTOR_RE.match(token)
    if not m:
        raise GrammarError(f"unknown group factor '{token}'. {GRAMMAR_HELP}")
    if m.group(1):
        return 1, []
    if m.group(4):
        return GroupFactory.klein()
    if m.group(5):
        return GroupFactory.quaternion()
    family, n = m.group(2), int(m.group(3))
    return {
        "C": GroupFactory.cyclic,
        "S": GroupFactory.symmetric,
        "A": GroupFactory.alternating,
        "D": GroupFactory.dihedral,
    }[family](n)


# =============================================================================
# 3. 解析
# =============================================================================

def _parse_gens(body: str) -> List[Perm]:
    chunks = [c.strip() for c in body.split(";")]
    if not any(chunks):
        return []
    cycle_lists: List[List[List[int]]] = []
    degree = 1
    for chunk in chunks:
        if not chunk:
            raise GrammarError(f"empty generator in 'gens:{body}'. {GRAMMAR_HELP}")
        if _CYCLE_RE.sub("", chunk).strip():
            raise GrammarError(f"cannot parse generator '{chunk}'. {GRAMMAR_HELP}")
        cycles = []
        for inner in _CYCLE_RE.findall(chunk):
            points = [int(x) for x in re.split(r"[\s,]+", inner.strip()) if x]
            if any(p < 1 for p in points) or len(set(points)) != len(points):
                raise GrammarError(f"bad cycle '({inner})': points are distinct and 1-based")
            if points:
                cycles.append([p - 1 for p in points])
                degree = max(degree, max(points))
        cycle_lists.append(cycles)
    try:
        return [cycles_to_perm(c, degree) for c in cycle_lists]
    except InvalidData as e:
        raise GrammarError(f"{e}. {GRAMMAR_HELP}") from None


def parse_generators(text: str) -> Tuple[int, List[Perm]]:
    """群描述 -> (度数, 生成元)"""
    text = text.strip()
    if not text:
        raise GrammarError(f"empty group description. {GRAMMAR_HELP}")
    if text.startswith("gens:"):
        gens = _parse_gens(text[len("gens:"):])
        degree = len(gens[0]) if gens else 1
        return degree, gens
    offset = 0
    shifted: List[List[List[int]]] = []
    for token in text.split("x"):
        deg, gens = _factor(token.strip())
        for cycles in gens:
            shifted.append([[p + offset for p in cyc] for cyc in cycles])
        offset += deg
    degree = max(offset, 1)
    return degree, [cycles_to_perm(c, degree) for c in shifted]


def parse_group(text: str, bound: int = DEFAULT_BOUND) -> PermGroup:
    degree, gens = parse_generators(text)
    return closure(gens, bound=bound, degree=degree, description=text.strip())


@lru_cache(maxsize=None)
def _load(text: str, bound: int) -> PermGroup:
    return parse_group(text, bound)


def load_group(text: str, bound: int = DEFAULT_BOUND) -> PermGroup:
    """同一描述返回同一个 PermGroup 对象，下游按对象缓存的计算得以复用"""
    return _load(text.strip(), bound)


def describe(gens: Sequence[Perm]) -> str:
    """生成元 -> gens: 语法（可再次解析）"""
    return "gens:" + ";".join(format_perm(g) for g in gens)

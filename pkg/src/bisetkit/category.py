"""
范畴 Σ(G)：G 的截段商群的同构类代表
- 每个同构类取第一个实现它的截段类的商群作为代表群
- 截段关系 ⊑ / ⊏
- 单函子标签 (H, V) 与 Λ 序
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, List, Tuple

from .automorphisms import OutGroup, out_group
from .groups import PermGroup, Section, iso_name
from .reps import OutSimple, qout_simples

logger = logging.getLogger(__name__)


class Relation(str, Enum):
    STRICT = "⊏"
    EQUAL = "="
    OTHER = "incomparable-or-⊐"


class LabelOrder(str, Enum):
    LESS = "<"
    EQUAL = "="
    GREATER = ">"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True, order=False)
class SimpleLabel:
    """(H, V)：H 为 Σ(G) 中的同构类名，V 为 Out(H) 有理单模的名字"""
    H: str
    V: str

    def __str__(self):
        return f"({self.H}, {self.V})"

    def to_json(self) -> Dict[str, str]:
        return {"H": self.H, "V": self.V}


@dataclass(frozen=True, eq=False)
class Subquotient:
    key: str
    group: PermGroup
    section: Section

    @property
    def order(self) -> int:
        return self.group.order

    @cached_property
    def out(self) -> OutGroup:
        return out_group(self.group)

    @cached_property
    def simples(self) -> Tuple[OutSimple, ...]:
        return qout_simples(self.out)

    @cached_property
    def section_keys(self) -> FrozenSet[str]:
        """本群全部截段商群的同构类名（含自身与平凡群）"""
        return frozenset(iso_name(s.quotient) for s in self.group.section_classes)


class Category:
    """Σ(G)"""

    def __init__(self, G: PermGroup):
        self.G = G
        by_key: Dict[str, Subquotient] = {}
        for sec in G.section_classes:
            key = iso_name(sec.quotient)
            if key not in by_key:
                by_key[key] = Subquotient(key, sec.quotient, sec)
        self.objects: List[Subquotient] = sorted(by_key.values(), key=lambda s: (-s.order, s.key))
        self._by_key = {s.key: s for s in self.objects}
        logger.info("Σ(%s): %d iso classes %s", iso_name(G), len(self.objects), [s.key for s in self.objects])

    def __repr__(self):
        return f"Category({iso_name(self.G)}, objects={[s.key for s in self.objects]})"

    def __contains__(self, key: str) -> bool:
        return key in self._by_key

    def get(self, key: str) -> Subquotient:
        try:
            return self._by_key[key]
        except KeyError:
            raise KeyError(f"{key} is not a subquotient of {iso_name(self.G)}; "
                           f"available: {', '.join(s.key for s in self.objects)}") from None

    def keys(self) -> List[str]:
        return [s.key for s in self.objects]

    # ---- 截段关系 ----
    def is_subquotient(self, a: str, b: str) -> bool:
        """a ⊑ b"""
        return a in self.get(b).section_keys

    def is_strict_subquotient(self, a: str, b: str) -> bool:
        return a != b and self.is_subquotient(a, b)

    def strict_subquotients(self, key: str) -> List[str]:
        return [s.key for s in self.objects if self.is_strict_subquotient(s.key, key)]

    def subquotient_order(self, a: str, b: str) -> Relation:
        if a == b:
            return Relation.EQUAL
        if self.is_subquotient(a, b):
            return Relation.STRICT
        return Relation.OTHER

    # ---- 标签 ----
    @cached_property
    def labels(self) -> List[SimpleLabel]:
        """全部 (H, V)，按 |H| 降序（与 Λ 序相容）"""
        return [SimpleLabel(s.key, v.name) for s in self.objects for v in s.simples]

    def simple(self, label: SimpleLabel) -> OutSimple:
        for v in self.get(label.H).simples:
            if v.name == label.V:
                return v
        raise KeyError(f"{label.V} is not a simple kOut({label.H})-module")

    def label(self, h: str, v: str) -> SimpleLabel:
        lab = SimpleLabel(h, v)
        self.simple(lab)
        return lab

    def lambda_order(self, l1: SimpleLabel, l2: SimpleLabel) -> LabelOrder:
        """(H,V) < (K,W) 当且仅当 K ⊏ H"""
        if l1 == l2:
            return LabelOrder.EQUAL
        if self.is_strict_subquotient(l2.H, l1.H):
            return LabelOrder.LESS
        if self.is_strict_subquotient(l1.H, l2.H):
            return LabelOrder.GREATER
        return LabelOrder.INCOMPARABLE


@lru_cache(maxsize=None)
def category(G: PermGroup) -> Category:
    return Category(G)

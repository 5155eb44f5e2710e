"""
本质商 Hom-bar(H,K)
I(H,K) ⊆ B(K,H) 为经过 H 的真截段复合而来的态射张成的子空间，
Hom-bar(H,K) = B(K,H) / I(H,K)，右 kOut(H) 作用 x·phi = x ∘ Iso(phi)。
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Dict, List, Optional, Tuple

from .automorphisms import OutGroup, out_group
from .burnside import BisetElement, compose_labels, isogation
from .errors import InvalidData
from .goursat import ProductBasis, product_basis
from .groups import PermGroup, iso_name
from .linalg import ONE, ZERO, Echelon, QMatrix, Subspace, Vec, vec_axpy

logger = logging.getLogger(__name__)


# =============================================================================
# 1. 理想 I(H,K)
# =============================================================================

def proper_subquotients(H: PermGroup, one_per_class: bool = True) -> List[PermGroup]:
    """H 的真截段商群；默认每个同构类取一个（阶降序）"""
    seen: Dict[str, PermGroup] = {}
    out: List[PermGroup] = []
    for sec in H.section_classes:
        q = sec.quotient
        if q.order == H.order:
            continue
        if one_per_class:
            key = iso_name(q)
            if key in seen:
                continue
            seen[key] = q
        out.append(q)
    out.sort(key=lambda g: -g.order)
    return out


def _low_labels(basis: ProductBasis, h_order: int) -> int:
    """商群阶 < |H| 的标签数：理想维数的上界"""
    return sum(1 for lab in basis if lab.quotient_order < h_order)


def ideal(H: PermGroup, K: PermGroup, exhaustive: bool = False) -> Subspace:
    """I(H,K) = Σ_{X ⊏ H} B(K,X)∘B(X,H)

    复合结果总落在商群阶 < |H| 的标签张成内，张成达到该维数时提前停止；
    exhaustive=True 时遍历所有截段与所有基元对。
    """
    target = product_basis(K, H)
    n = len(target)
    bound = _low_labels(target, H.order)
    ech = Echelon(n)
    for X in proper_subquotients(H, one_per_class=not exhaustive):
        if not exhaustive and ech.dim == bound:
            break
        left = product_basis(K, X)
        right = product_basis(X, H)
        for f in left:
            for g in right:
                v: Vec = {}
                for k, m in compose_labels(f, g):
                    v[k] = v.get(k, ZERO) + m
                ech.add(v)
                if not exhaustive and ech.dim == bound:
                    break
            if not exhaustive and ech.dim == bound:
                break
    sub = ech.subspace()
    logger.debug("I(%s,%s): dim %d of %d", iso_name(H), iso_name(K), sub.dim, n)
    return sub


# =============================================================================
# 2. HomBar
# =============================================================================

@dataclass(frozen=True, eq=False)
class HomBar:
    """Hom-bar(H,K)：B(K,H) 模理想的商；代表元为 rref 非主元列对应的基元"""
    H: PermGroup
    K: PermGroup
    basis: ProductBasis
    ideal: Subspace
    reps: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.reps)

    def project(self, v: Vec) -> Vec:
        return self.ideal.quotient_coords(v)

    def project_element(self, x: BisetElement) -> Vec:
        if x.basis is not self.basis:
            raise InvalidData("element does not live in the ambient module of this quotient")
        return self.project(x.coeffs)

    def lift(self, x: Vec) -> Vec:
        return {self.reps[k]: c for k, c in x.items()}

    @cached_property
    def out(self) -> OutGroup:
        return out_group(self.H)

    @cached_property
    def out_matrices(self) -> Tuple[QMatrix, ...]:
        """M(phi) 的第 k 列为 a_k·phi；满足 M(phi psi) = M(psi) M(phi)"""
        mats = []
        for phi in self.out.reps:
            iso = isogation(self.H, self.H, phi)
            (iso_idx, _), = iso.coeffs.items()
            iso_label = iso.basis[iso_idx]
            cols = []
            for r in self.reps:
                v: Vec = {}
                for k, m in compose_labels(self.basis[r], iso_label):
                    v[k] = v.get(k, ZERO) + m
                cols.append(self.project(v))
            mats.append(QMatrix.from_columns(cols, self.dim))
        return tuple(mats)

    def out_action(self, x: Vec, phi: int) -> Vec:
        """x·phi（phi 为 Out(H) 元素下标）"""
        return self.out_matrices[phi].apply(x)

    def left_action(self, b_label_index: int) -> QMatrix:
        """b ∈ B(K,K) 的基元在 Hom-bar(H,K) 上的左作用"""
        lk = product_basis(self.K, self.K)[b_label_index]
        cols = []
        for r in self.reps:
            v: Vec = {}
            for k, m in compose_labels(lk, self.basis[r]):
                v[k] = v.get(k, ZERO) + m
            cols.append(self.project(v))
        return QMatrix.from_columns(cols, self.dim)

    def to_json(self) -> Dict[str, Any]:
        return {
            "source": iso_name(self.H),
            "target": iso_name(self.K),
            "ambient_dim": len(self.basis),
            "ideal_dim": self.ideal.dim,
            "dim": self.dim,
            "representatives": [self.basis[i].key for i in self.reps],
        }


@lru_cache(maxsize=None)
def hombar(H: PermGroup, K: PermGroup) -> HomBar:
    basis = product_basis(K, H)
    sub = ideal(H, K)
    hb = HomBar(H, K, basis, sub, tuple(sub.complement_columns()))
    logger.info("hombar(%s,%s): dim %d", iso_name(H), iso_name(K), hb.dim)
    return hb


# =============================================================================
# 3. Hom-bar(H,H) ≅ kOut(H)
# =============================================================================

@lru_cache(maxsize=None)
def out_coordinates(H: PermGroup) -> Optional[QMatrix]:
    """列 i = Iso(phi_i) 在 Hom-bar(H,H) 中的坐标；不构成基时返回 None"""
    hb = hombar(H, H)
    out = hb.out
    cols = [hb.project_element(isogation(H, H, phi)) for phi in out.reps]
    m = QMatrix.from_columns(cols, hb.dim)
    if hb.dim != out.order or m.rank() != out.order:
        return None
    return m


def to_out_algebra(H: PermGroup, x: Vec) -> Vec:
    """Hom-bar(H,H) 坐标 -> kOut(H) 中的系数（按 Out 元素下标）"""
    m = out_coordinates(H)
    if m is None:
        raise InvalidData(f"Hom-bar({iso_name(H)},{iso_name(H)}) is not spanned by the Iso(phi)")
    return _out_inverse(H).apply(x)


@lru_cache(maxsize=None)
def _out_inverse(H: PermGroup) -> QMatrix:
    return out_coordinates(H).inv()


def is_out_group_algebra(H: PermGroup) -> bool:
    """Hom-bar(H,H) 的复合乘法与 kOut(H) 的群乘法一致"""
    m = out_coordinates(H)
    if m is None:
        return False
    hb = hombar(H, H)
    out = hb.out
    isos = [isogation(H, H, phi) for phi in out.reps]
    for i, a in enumerate(isos):
        la = a.basis[next(iter(a.coeffs))]
        for j, b in enumerate(isos):
            lb = b.basis[next(iter(b.coeffs))]
            v: Vec = {}
            for k, mult in compose_labels(la, lb):
                vec_axpy(v, ONE, {k: mult})
            if hb.project(v) != m.column(out.mul(i, j)):
                return False
    return True

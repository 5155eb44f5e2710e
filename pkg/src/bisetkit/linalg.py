"""
精确有理线性代数
- QMatrix: 基于 sympy DomainMatrix(QQ) 的稀疏矩阵包装
- Subspace: 行最简形（rref）基表示的子空间
- spin / 商空间 / 解方程
全程不出现浮点数。
"""

from fractions import Fraction
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import DimensionMismatch, InconsistentSystem

# 稀疏向量：列号 -> QQ 元素（零不出现）
Vec = Dict[int, Any]

ZERO = QQ.zero
ONE = QQ.one


# =============================================================================
# 1. 标量转换
# =============================================================================

def qq(x: Any):
    """任意整数 / Fraction / QQ 元素 -> QQ 元素"""
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, int):
        return QQ(x)
    return QQ.convert(x)


def to_fraction(x: Any) -> Fraction:
    return Fraction(int(QQ.numer(x)), int(QQ.denom(x)))


def is_integral(x: Any) -> bool:
    return int(QQ.denom(x)) == 1


# =============================================================================
# 2. 稀疏向量工具
# =============================================================================

def vec_axpy(acc: Vec, c: Any, v: Vec):
    """acc += c * v（原地）"""
    if not c:
        return
    for j, x in v.items():
        y = acc.get(j, ZERO) + c * x
        if y:
            acc[j] = y
        else:
            acc.pop(j, None)


def vec_scale(v: Vec, c: Any) -> Vec:
    if not c:
        return {}
    return {j: c * x for j, x in v.items()}


def vec_from_list(values: Sequence[Any]) -> Vec:
    return {j: qq(x) for j, x in enumerate(values) if x}


def unit(j: int) -> Vec:
    return {j: ONE}


# =============================================================================
# 3. QMatrix
# =============================================================================

class QMatrix:
    """有理矩阵（行字典稀疏存储，运算委托给 DomainMatrix）"""

    __slots__ = ("_dm",)

    def __init__(self, dm: DomainMatrix):
        self._dm = dm.to_sparse()

    # ---- 构造 ----
    @classmethod
    def from_dict(cls, rows: Dict[int, Vec], shape: Tuple[int, int]) -> "QMatrix":
        clean = {i: dict(r) for i, r in rows.items() if r}
        return cls(DomainMatrix(clean, shape, QQ))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], ncols: Optional[int] = None) -> "QMatrix":
        m = len(rows)
        n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
        return cls.from_dict({i: vec_from_list(r) for i, r in enumerate(rows)}, (m, n))

    @classmethod
    def from_vecs(cls, vecs: Sequence[Vec], ncols: int) -> "QMatrix":
        """每个稀疏向量作为一行"""
        return cls.from_dict({i: v for i, v in enumerate(vecs)}, (len(vecs), ncols))

    @classmethod
    def from_columns(cls, cols: Sequence[Vec], nrows: int) -> "QMatrix":
        rows: Dict[int, Vec] = {}
        for j, col in enumerate(cols):
            for i, x in col.items():
                if x:
                    rows.setdefault(i, {})[j] = x
        return cls.from_dict(rows, (nrows, len(cols)))

    @classmethod
    def zeros(cls, m: int, n: int) -> "QMatrix":
        return cls.from_dict({}, (m, n))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls.from_dict({i: {i: ONE} for i in range(n)}, (n, n))

    # ---- 访问 ----
    @property
    def dm(self) -> DomainMatrix:
        return self._dm

    @property
    def shape(self) -> Tuple[int, int]:
        return self._dm.shape

    @property
    def nrows(self) -> int:
        return self._dm.shape[0]

    @property
    def ncols(self) -> int:
        return self._dm.shape[1]

    def row_dicts(self) -> Dict[int, Vec]:
        return {i: dict(r) for i, r in self._dm.rep.items() if r}

    def row(self, i: int) -> Vec:
        return dict(self._dm.rep.get(i, {}))

    def rows_list(self) -> List[Vec]:
        rep = self._dm.rep
        return [dict(rep.get(i, {})) for i in range(self.nrows)]

    def column(self, j: int) -> Vec:
        return {i: r[j] for i, r in self._dm.rep.items() if j in r}

    def columns(self) -> List[Vec]:
        cols: List[Vec] = [{} for _ in range(self.ncols)]
        for i, r in self._dm.rep.items():
            for j, x in r.items():
                cols[j][i] = x
        return cols

    def entry(self, i: int, j: int):
        return self._dm.rep.get(i, {}).get(j, ZERO)

    def entries(self) -> Iterator[Tuple[int, int, Any]]:
        for i, r in sorted(self._dm.rep.items()):
            for j, x in sorted(r.items()):
                yield i, j, x

    def to_fractions(self) -> List[List[Fraction]]:
        m, n = self.shape
        out = [[Fraction(0)] * n for _ in range(m)]
        for i, j, x in self.entries():
            out[i][j] = to_fraction(x)
        return out

    def is_zero(self) -> bool:
        return not any(self._dm.rep.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self.row_dicts() == other.row_dicts()

    def __hash__(self):
        return hash((self.shape, tuple(self.entries())))

    def __repr__(self):
        return f"QMatrix({self.shape[0]}x{self.shape[1]}, nnz={sum(len(r) for r in self._dm.rep.values())})"

    # ---- 运算 ----
    def _check(self, other: "QMatrix", op: str, a: int, b: int):
        if a != b:
            raise DimensionMismatch(f"{op}: {self.shape} vs {other.shape}")

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        self._check(other, "matmul", self.ncols, other.nrows)
        return QMatrix(self._dm.matmul(other._dm))

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"add: {self.shape} vs {other.shape}")
        return QMatrix(self._dm + other._dm)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"sub: {self.shape} vs {other.shape}")
        return QMatrix(self._dm - other._dm)

    def __neg__(self) -> "QMatrix":
        return QMatrix(-self._dm)

    def scale(self, c: Any) -> "QMatrix":
        c = qq(c)
        if not c:
            return QMatrix.zeros(*self.shape)
        return QMatrix.from_dict({i: vec_scale(r, c) for i, r in self.row_dicts().items()}, self.shape)

    def transpose(self) -> "QMatrix":
        return QMatrix(self._dm.transpose())

    T = property(transpose)

    def apply(self, v: Vec) -> Vec:
        """矩阵乘列向量"""
        out: Vec = {}
        if not v:
            return out
        for i, r in self._dm.rep.items():
            s = ZERO
            for j, x in r.items():
                y = v.get(j)
                if y:
                    s += x * y
            if s:
                out[i] = s
        return out

    def trace(self):
        s = ZERO
        for i, r in self._dm.rep.items():
            s += r.get(i, ZERO)
        return s

    def vstack(self, *others: "QMatrix") -> "QMatrix":
        rows = self.row_dicts()
        offset = self.nrows
        for o in others:
            if o.ncols != self.ncols:
                raise DimensionMismatch(f"vstack: {self.shape} vs {o.shape}")
            for i, r in o.row_dicts().items():
                rows[offset + i] = r
            offset += o.nrows
        return QMatrix.from_dict(rows, (offset, self.ncols))

    # ---- 消元 ----
    def rref(self) -> Tuple["QMatrix", Tuple[int, ...]]:
        if self.nrows == 0 or self.ncols == 0:
            return self, ()
        r, pivots = self._dm.rref()
        return QMatrix(r), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> "QMatrix":
        """右零空间 {x : Mx = 0}，每行一个基向量"""
        n = self.ncols
        r, pivots = self.rref()
        pivot_set = set(pivots)
        rows = r.rows_list()
        basis: List[Vec] = []
        for f in range(n):
            if f in pivot_set:
                continue
            v: Vec = {f: ONE}
            for k, p in enumerate(pivots):
                x = rows[k].get(f)
                if x:
                    v[p] = -x
            basis.append(v)
        return QMatrix.from_vecs(basis, n)

    def det(self):
        if self.nrows != self.ncols:
            raise DimensionMismatch(f"det of non-square {self.shape}")
        if self.nrows == 0:
            return ONE
        return self._dm.to_dense().det()

    def inv(self) -> "QMatrix":
        if self.nrows != self.ncols:
            raise DimensionMismatch(f"inverse of non-square {self.shape}")
        if self.nrows == 0:
            return self
        if self.det() == 0:
            raise InconsistentSystem("matrix is singular")
        return QMatrix(self._dm.to_dense().inv())

    def charpoly(self) -> List[Any]:
        """特征多项式系数（首项在前）"""
        if self.nrows == 0:
            return [ONE]
        return list(self._dm.to_dense().charpoly())

    def power_apply(self, coeffs: Sequence[Any]) -> "QMatrix":
        """Horner 求多项式在矩阵处的值，coeffs 首项在前"""
        n = self.nrows
        acc = QMatrix.zeros(n, n)
        eye = QMatrix.identity(n)
        for c in coeffs:
            acc = (acc @ self) + eye.scale(c)
        return acc


def linear_combination(mats: Sequence[QMatrix], coeffs: Sequence[Any], shape: Tuple[int, int]) -> QMatrix:
    rows: Dict[int, Vec] = {}
    for m, c in zip(mats, coeffs):
        if not c:
            continue
        for i, r in m.row_dicts().items():
            vec_axpy(rows.setdefault(i, {}), c, r)
    return QMatrix.from_dict(rows, shape)


def solve(a: QMatrix, b: Vec) -> Vec:
    """求 a x = b 的一个解；无解时抛出 InconsistentSystem"""
    m, n = a.shape
    rows = a.row_dicts()
    for i, x in b.items():
        rows.setdefault(i, {})[n] = x
    aug = QMatrix.from_dict(rows, (m, n + 1))
    r, pivots = aug.rref()
    if n in pivots:
        raise InconsistentSystem("linear system has no solution")
    sol: Vec = {}
    rr = r.rows_list()
    for k, p in enumerate(pivots):
        x = rr[k].get(n)
        if x:
            sol[p] = x
    return sol


# =============================================================================
# 4. 子空间
# =============================================================================

class Subspace:
    """Q^n 的子空间，基为 rref 行（主元为 1，主元列在其他行为 0）"""

    __slots__ = ("ambient", "basis", "pivots", "_rows")

    def __init__(self, basis: QMatrix, pivots: Tuple[int, ...], ambient: int):
        self.ambient = ambient
        self.basis = basis
        self.pivots = pivots
        self._rows = basis.rows_list()[: len(pivots)]

    @classmethod
    def span(cls, vecs: Iterable[Vec], ambient: int) -> "Subspace":
        vecs = [v for v in vecs if v]
        if not vecs:
            return cls.zero(ambient)
        r, pivots = QMatrix.from_vecs(vecs, ambient).rref()
        keep = r.rows_list()[: len(pivots)]
        return cls(QMatrix.from_vecs(keep, ambient), pivots, ambient)

    @classmethod
    def row_space(cls, m: QMatrix) -> "Subspace":
        return cls.span(m.rows_list(), m.ncols)

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(QMatrix.zeros(0, ambient), (), ambient)

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls(QMatrix.identity(ambient), tuple(range(ambient)), ambient)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def vectors(self) -> List[Vec]:
        return [dict(r) for r in self._rows]

    def reduce(self, v: Vec) -> Vec:
        """模去子空间后的规范余项（主元列为 0）"""
        out = dict(v)
        for row, p in zip(self._rows, self.pivots):
            c = out.get(p)
            if c:
                vec_axpy(out, -c, row)
        return out

    def contains(self, v: Vec) -> bool:
        return not self.reduce(v)

    def coords_vec(self, v: Vec) -> Vec:
        return {k: v[p] for k, p in enumerate(self.pivots) if v.get(p)}

    def complement_columns(self) -> List[int]:
        ps = set(self.pivots)
        return [j for j in range(self.ambient) if j not in ps]

    def quotient_coords(self, v: Vec) -> Vec:
        """v 在商空间 Q^n / self 中的坐标（以非主元列为基）"""
        cols = self.complement_columns()
        red = self.reduce(v)
        return {k: red[c] for k, c in enumerate(cols) if red.get(c)}

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise DimensionMismatch(f"subspace sum: {self.ambient} vs {other.ambient}")
        return Subspace.span(self.vectors() + other.vectors(), self.ambient)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient:
            raise DimensionMismatch(f"subspace intersection: {self.ambient} vs {other.ambient}")
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient)
        # x = Σ a_i u_i = Σ b_j w_j  <=>  [U; -W]^T (a, b) = 0
        u = self.vectors()
        w = [vec_scale(x, -ONE) for x in other.vectors()]
        sys = QMatrix.from_columns(u + w, self.ambient)
        ker = sys.kernel()
        out: List[Vec] = []
        for coeffs in ker.rows_list():
            acc: Vec = {}
            for i, c in coeffs.items():
                if i < len(u):
                    vec_axpy(acc, c, u[i])
            out.append(acc)
        return Subspace.span(out, self.ambient)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self._rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.pivots == other.pivots and self._rows == other._rows

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


class Echelon:
    """增量阶梯形：按插入顺序消元，用于 spin"""

    def __init__(self, ambient: int):
        self.ambient = ambient
        self.rows: List[Tuple[int, Vec]] = []

    def add(self, v: Vec) -> Optional[Vec]:
        """若 v 不在当前张成中则加入并返回约化后的向量"""
        red = dict(v)
        for p, row in self.rows:
            c = red.get(p)
            if c:
                vec_axpy(red, -c, row)
        if not red:
            return None
        p = min(red)
        inv = ONE / red[p]
        red = vec_scale(red, inv)
        self.rows.append((p, red))
        return red

    @property
    def dim(self) -> int:
        return len(self.rows)

    def subspace(self) -> Subspace:
        return Subspace.span([r for _, r in self.rows], self.ambient)


def spin(vectors: Iterable[Vec], actions: Sequence[QMatrix], ambient: int) -> Subspace:
    """包含 vectors 的最小 actions-不变子空间"""
    ech = Echelon(ambient)
    queue = []
    for v in vectors:
        r = ech.add(v)
        if r is not None:
            queue.append(r)
    while queue:
        v = queue.pop()
        for a in actions:
            r = ech.add(a.apply(v))
            if r is not None:
                queue.append(r)
        if ech.dim == ambient:
            break
    return ech.subspace()


def restrict(action: QMatrix, sub: Subspace) -> QMatrix:
    """不变子空间上的限制（以 rref 基为坐标）"""
    cols = [sub.coords_vec(action.apply(b)) for b in sub.vectors()]
    return QMatrix.from_columns(cols, sub.dim)


def induce_quotient(action: QMatrix, sub: Subspace) -> QMatrix:
    """不变子空间 sub 的商空间上诱导的作用"""
    comp = sub.complement_columns()
    cols = [sub.quotient_coords(action.apply(unit(c))) for c in comp]
    return QMatrix.from_columns(cols, len(comp))

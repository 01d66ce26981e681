"""Exact linear algebra over the Gaussian rationals Q(i).

Everything downstream (algebras, bimodules, connections) reduces to solving
linear systems over this field, so all arithmetic here is exact: a scalar is
re + im*i with re, im rational, stored over a common positive denominator
with gcd(re_num, im_num, den) == 1.  There is no floating point anywhere.

Row reduction keeps rows as {column: Scalar} dicts; the systems produced by
structure constants are very sparse and this is what makes desk-scale
examples run in seconds.  Echelon bases are fully reduced (RREF) so that a
subspace has exactly one representation and equality of subspaces is
equality of bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence


class LinAlgError(ValueError):
    """Contract violation in a linear-algebra call (dimension mismatch etc.)."""


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------

class Scalar:
    """An element of Q(i), immutable and canonical.

    Internally (rn + im*i) / dn with integer rn, im, dn, dn > 0 and
    gcd(rn, im, dn) == 1.
    """

    __slots__ = ("rn", "im", "dn")

    def __init__(self, rn: int, im: int = 0, dn: int = 1):
        if dn == 0:
            raise LinAlgError("scalar with zero denominator")
        if dn < 0:
            rn, im, dn = -rn, -im, -dn
        g = gcd(rn, im, dn)
        if g > 1:
            rn //= g
            im //= g
            dn //= g
        self.rn = rn
        self.im = im
        self.dn = dn

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_fractions(re: Fraction, im: Fraction = Fraction(0)) -> "Scalar":
        re = Fraction(re)
        im = Fraction(im)
        dn = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        return Scalar(re.numerator * (dn // re.denominator),
                      im.numerator * (dn // im.denominator), dn)

    # -- properties ---------------------------------------------------------

    @property
    def re(self) -> Fraction:
        return Fraction(self.rn, self.dn)

    @property
    def imag(self) -> Fraction:
        return Fraction(self.im, self.dn)

    def is_zero(self) -> bool:
        return self.rn == 0 and self.im == 0

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, o: "Scalar") -> "Scalar":
        ad, od = self.dn, o.dn
        return Scalar(self.rn * od + o.rn * ad, self.im * od + o.im * ad, ad * od)

    def __sub__(self, o: "Scalar") -> "Scalar":
        ad, od = self.dn, o.dn
        return Scalar(self.rn * od - o.rn * ad, self.im * od - o.im * ad, ad * od)

    def __mul__(self, o: "Scalar") -> "Scalar":
        return Scalar(self.rn * o.rn - self.im * o.im,
                      self.rn * o.im + self.im * o.rn, self.dn * o.dn)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.rn, -self.im, self.dn)

    def conjugate(self) -> "Scalar":
        return Scalar(self.rn, -self.im, self.dn)

    def inverse(self) -> "Scalar":
        n = self.rn * self.rn + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar(self.dn * self.rn, -self.dn * self.im, n)

    def __truediv__(self, o: "Scalar") -> "Scalar":
        return self * o.inverse()

    # -- comparison ---------------------------------------------------------

    def __eq__(self, o: object) -> bool:
        return isinstance(o, Scalar) and self.rn == o.rn and self.im == o.im and self.dn == o.dn

    def __hash__(self) -> int:
        return hash((self.rn, self.im, self.dn))

    def __repr__(self) -> str:
        if self.im == 0:
            return f"{Fraction(self.rn, self.dn)}"
        if self.rn == 0:
            return f"{Fraction(self.im, self.dn)}i"
        return f"({Fraction(self.rn, self.dn)}+{Fraction(self.im, self.dn)}i)"

    def __bool__(self) -> bool:
        return not self.is_zero()


ZERO = Scalar(0)
ONE = Scalar(1)
TWO = Scalar(2)
HALF = Scalar(1, 0, 2)
I = Scalar(0, 1)


def qi(re: int | str | Fraction | Scalar = 0, im: int | str | Fraction = 0) -> Scalar:
    """Convenience constructor: qi(2), qi("1/3"), qi(0, 1) == i."""
    if isinstance(re, Scalar):
        if im:
            raise LinAlgError("cannot add an imaginary part to a Scalar")
        return re
    return Scalar.from_fractions(Fraction(re), Fraction(im))


def scalar_to_json(s: Scalar) -> str | dict[str, str]:
    """Exact wire form: "a/b" for rationals, {"re", "im"} otherwise."""
    if s.im == 0:
        return str(s.re)
    return {"re": str(s.re), "im": str(s.imag)}


def scalar_from_json(obj: int | str | dict) -> Scalar:
    if isinstance(obj, bool):
        raise LinAlgError(f"not a scalar: {obj!r}")
    if isinstance(obj, int):
        return Scalar(obj)
    if isinstance(obj, str):
        return Scalar.from_fractions(Fraction(obj))
    if isinstance(obj, dict):
        extra = set(obj) - {"re", "im"}
        if extra:
            raise LinAlgError(f"unknown scalar fields {sorted(extra)}")
        return Scalar.from_fractions(Fraction(obj.get("re", 0)), Fraction(obj.get("im", 0)))
    raise LinAlgError(f"not a scalar: {obj!r}")


# ---------------------------------------------------------------------------
# Vectors: plain tuples of Scalar
# ---------------------------------------------------------------------------

Vector = tuple  # tuple[Scalar, ...]


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def basis_vector(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(c: Scalar, u: Vector) -> Vector:
    if c is ONE:
        return tuple(u)
    return tuple(c * a for a in u)


def vec_is_zero(u: Vector) -> bool:
    return all(a.is_zero() for a in u)


def vec_to_sparse(u: Sequence[Scalar]) -> dict[int, Scalar]:
    return {j: a for j, a in enumerate(u) if not a.is_zero()}


def sparse_to_vec(s: dict[int, Scalar], n: int) -> Vector:
    return tuple(s.get(j, ZERO) for j in range(n))


# ---------------------------------------------------------------------------
# Sparse reduced row echelon form
# ---------------------------------------------------------------------------

def _rref(rows: Iterable[dict[int, Scalar]], stop_col: int) -> tuple[dict[int, dict[int, Scalar]], list[dict[int, Scalar]]]:
    """Incremental RREF on sparse rows.

    Columns >= stop_col are never chosen as pivots (they carry augmented
    right-hand sides).  Returns (pivots, leftovers) where pivots maps a pivot
    column to its fully reduced row (pivot entry 1, no other pivot columns),
    and leftovers are surviving nonzero rows supported on cols >= stop_col.
    """
    pivots: dict[int, dict[int, Scalar]] = {}
    leftovers: list[dict[int, Scalar]] = []
    for raw in rows:
        row = {c: v for c, v in raw.items() if not v.is_zero()}
        # Eliminate all pivot columns present; pivot rows contain no other
        # pivot columns, so one pass suffices.
        for c in [c for c in row if c in pivots]:
            coef = row.pop(c)
            for cc, v in pivots[c].items():
                if cc == c:
                    continue
                cur = row.get(cc)
                nv = cur - coef * v if cur is not None else -(coef * v)
                if nv.is_zero():
                    row.pop(cc, None)
                else:
                    row[cc] = nv
        if not row:
            continue
        elig = [c for c in row if c < stop_col]
        if not elig:
            leftovers.append(row)
            continue
        c = min(elig)
        inv = row[c].inverse()
        if inv == ONE:
            newrow = row
        else:
            newrow = {cc: v * inv for cc, v in row.items()}
            newrow[c] = ONE
        # Maintain full reduction: clear the new pivot column everywhere.
        for p2 in pivots.values():
            coef = p2.pop(c, None)
            if coef is None:
                continue
            for cc, v in newrow.items():
                if cc == c:
                    continue
                cur = p2.get(cc)
                nv = cur - coef * v if cur is not None else -(coef * v)
                if nv.is_zero():
                    p2.pop(cc, None)
                else:
                    p2[cc] = nv
        pivots[c] = newrow
    return pivots, leftovers


def rref_rows(rows: Iterable[Sequence[Scalar] | dict[int, Scalar]], ncols: int) -> list[dict[int, Scalar]]:
    """Canonical RREF basis (sparse rows sorted by pivot column) of a row span."""
    sparse = (r if isinstance(r, dict) else vec_to_sparse(r) for r in rows)
    pivots, _ = _rref(sparse, ncols)
    return [pivots[c] for c in sorted(pivots)]


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------

class Subspace:
    """A subspace of K^n held as a canonical reduced-echelon basis.

    Two Subspace objects are equal iff they are the same subspace; the
    canonical basis makes this a structural comparison.
    """

    __slots__ = ("ambient_dim", "basis", "_pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence[Scalar] | dict[int, Scalar]] = ()):
        self.ambient_dim = ambient_dim
        rows = rref_rows(vectors, ambient_dim)
        self._pivots = {min(r): r for r in rows}
        self.basis: tuple[Vector, ...] = tuple(sparse_to_vec(r, ambient_dim) for r in rows)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence[Scalar]) -> Vector:
        """Residual of v modulo this subspace (zero iff v is a member)."""
        row = vec_to_sparse(v)
        for c in [c for c in row if c in self._pivots]:
            coef = row.pop(c)
            for cc, w in self._pivots[c].items():
                if cc == c:
                    continue
                cur = row.get(cc)
                nv = cur - coef * w if cur is not None else -(coef * w)
                if nv.is_zero():
                    row.pop(cc, None)
                else:
                    row[cc] = nv
        return sparse_to_vec(row, self.ambient_dim)

    def coordinates(self, v: Sequence[Scalar]) -> Vector | None:
        """Coordinates of v in self.basis, or None if v is not in the span."""
        row = vec_to_sparse(v)
        coords: dict[int, Scalar] = {}
        order = {c: k for k, c in enumerate(sorted(self._pivots))}
        for c in [c for c in row if c in self._pivots]:
            coef = row.pop(c)
            coords[order[c]] = coef
            for cc, w in self._pivots[c].items():
                if cc == c:
                    continue
                cur = row.get(cc)
                nv = cur - coef * w if cur is not None else -(coef * w)
                if nv.is_zero():
                    row.pop(cc, None)
                else:
                    row[cc] = nv
        if row:
            return None
        return sparse_to_vec(coords, self.dim)

    def contains_vector(self, v: Sequence[Scalar]) -> bool:
        return vec_is_zero(self.reduce(v))

    def contains(self, other: "Subspace") -> bool:
        """True iff other is a subspace of self."""
        self._check_ambient(other)
        return all(self.contains_vector(b) for b in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        return Subspace(self.ambient_dim, list(self.basis) + list(other.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        # x = sum a_k u_k = sum b_l v_l: kernel of [U^T | -V^T].
        k, l = self.dim, other.dim
        rows = []
        for i in range(self.ambient_dim):
            row: dict[int, Scalar] = {}
            for j in range(k):
                a = self.basis[j][i]
                if not a.is_zero():
                    row[j] = a
            for j in range(l):
                b = other.basis[j][i]
                if not b.is_zero():
                    row[k + j] = -b
            if row:
                rows.append(row)
        null = kernel_rows(rows, k + l)
        vecs = []
        for w in null:
            x = zero_vector(self.ambient_dim)
            for j in range(k):
                x = vec_add(x, vec_scale(w[j], self.basis[j]))
            vecs.append(x)
        return Subspace(self.ambient_dim, vecs)

    def complement_positions(self) -> list[int]:
        """Coordinate positions whose standard vectors complement this subspace."""
        return [j for j in range(self.ambient_dim) if j not in self._pivots]

    def _check_ambient(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise LinAlgError(
                f"ambient mismatch: {self.ambient_dim} vs {other.ambient_dim}")

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Subspace)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of K^{self.ambient_dim})"


@dataclass(frozen=True)
class SubspaceOps:
    sum: Subspace
    intersection: Subspace
    contains: bool


def subspace_ops(u: Subspace, v: Subspace) -> SubspaceOps:
    """Sum, intersection and the containment test u <= v."""
    return SubspaceOps(sum=u.sum(v), intersection=u.intersect(v), contains=v.contains(u))


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

class Matrix:
    """Dense immutable matrix over Q(i) acting on column vectors."""

    __slots__ = ("rows", "cols", "entries", "_sparse_rows")

    def __init__(self, rows: int, cols: int, entries: Sequence[Sequence[Scalar]]):
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise LinAlgError("entry grid does not match declared shape")
        self.rows = rows
        self.cols = cols
        self.entries: tuple[tuple[Scalar, ...], ...] = tuple(tuple(r) for r in entries)
        self._sparse_rows: tuple[dict[int, Scalar], ...] | None = None

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zeros(rows: int, cols: int) -> "Matrix":
        return Matrix(rows, cols, [[ZERO] * cols for _ in range(rows)])

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix(n, n, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @staticmethod
    def from_rows(entries: Sequence[Sequence[Scalar]]) -> "Matrix":
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        return Matrix(rows, cols, entries)

    @staticmethod
    def from_cols(cols: Sequence[Sequence[Scalar]], nrows: int | None = None) -> "Matrix":
        ncols = len(cols)
        if nrows is None:
            if not cols:
                raise LinAlgError("from_cols needs nrows when there are no columns")
            nrows = len(cols[0])
        return Matrix(nrows, ncols, [[cols[j][i] for j in range(ncols)] for i in range(nrows)])

    # -- access -------------------------------------------------------------

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def columns(self) -> Iterator[Vector]:
        for j in range(self.cols):
            yield self.col(j)

    def sparse_rows(self) -> tuple[dict[int, Scalar], ...]:
        if self._sparse_rows is None:
            self._sparse_rows = tuple(vec_to_sparse(r) for r in self.entries)
        return self._sparse_rows

    # -- arithmetic ---------------------------------------------------------

    def apply(self, v: Sequence[Scalar]) -> Vector:
        if len(v) != self.cols:
            raise LinAlgError(f"apply: vector of dim {len(v)} to {self.rows}x{self.cols} matrix")
        out = [ZERO] * self.rows
        for i, row in enumerate(self.sparse_rows()):
            acc = ZERO
            for j, a in row.items():
                x = v[j]
                if not x.is_zero():
                    acc = acc + a * x
            out[i] = acc
        return tuple(out)

    def apply_sparse(self, v: dict[int, Scalar]) -> dict[int, Scalar]:
        out: dict[int, Scalar] = {}
        for j, x in v.items():
            if x.is_zero():
                continue
            for i in range(self.rows):
                a = self.entries[i][j]
                if a.is_zero():
                    continue
                cur = out.get(i)
                nv = cur + a * x if cur is not None else a * x
                if nv.is_zero():
                    out.pop(i, None)
                else:
                    out[i] = nv
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinAlgError(f"matmul shape mismatch: {self.cols} vs {other.rows}")
        out = [[ZERO] * other.cols for _ in range(self.rows)]
        for i, row in enumerate(self.sparse_rows()):
            oi = out[i]
            for k, a in row.items():
                brow = other.entries[k]
                for j in range(other.cols):
                    b = brow[j]
                    if not b.is_zero():
                        oi[j] = oi[j] + a * b
        return Matrix(self.rows, other.cols, out)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols,
                      [[a + b for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(self.rows, self.cols,
                      [[a - b for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [[-a for a in r] for r in self.entries])

    def scale(self, c: Scalar) -> "Matrix":
        return Matrix(self.rows, self.cols, [[c * a for a in r] for r in self.entries])

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.entries for a in r)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Matrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols})"

    def _check_same_shape(self, other: "Matrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise LinAlgError("shape mismatch")

    # -- rank / kernel / solve ---------------------------------------------

    def rank(self) -> int:
        pivots, _ = _rref(iter(self.sparse_rows()), self.cols)
        return len(pivots)

    def kernel(self) -> Subspace:
        """Exact null space {x : Mx = 0} with canonical echelon basis."""
        return Subspace(self.cols, kernel_rows(self.sparse_rows(), self.cols))

    def column_space(self) -> Subspace:
        return Subspace(self.rows, [self.col(j) for j in range(self.cols)])

    def row_space(self) -> Subspace:
        return Subspace(self.cols, self.entries)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise LinAlgError("inverse of a non-square matrix")
        sols = solve_many(self, [basis_vector(self.rows, i) for i in range(self.rows)])
        cols = []
        for s in sols:
            if s is None:
                raise LinAlgError("matrix is singular")
            cols.append(s)
        inv = Matrix.from_cols(cols, self.cols)
        return inv


def kernel_rows(rows: Iterable[dict[int, Scalar]], ncols: int) -> list[dict[int, Scalar]]:
    """Kernel basis (sparse) of the system {row . x = 0 for each row}."""
    pivots, _ = _rref(iter(rows), ncols)
    free = [j for j in range(ncols) if j not in pivots]
    out = []
    for f in free:
        vec: dict[int, Scalar] = {f: ONE}
        for c, prow in pivots.items():
            a = prow.get(f)
            if a is not None:
                vec[c] = -a
        out.append(vec)
    return out


@dataclass(frozen=True)
class Solution:
    particular: Vector
    kernel: Subspace


def solve(m: Matrix, b: Sequence[Scalar]) -> Solution | None:
    """Solve Mx = b exactly; None when b is outside the column space."""
    if len(b) != m.rows:
        raise LinAlgError(f"solve: rhs of dim {len(b)} for {m.rows}x{m.cols} matrix")
    sols = solve_many(m, [b])
    if sols[0] is None:
        return None
    return Solution(particular=sols[0], kernel=m.kernel())


def solve_many(m: Matrix, rhs: Sequence[Sequence[Scalar]]) -> list[Vector | None]:
    """Solve Mx = b for several right-hand sides with one elimination.

    Free variables are set to zero, which makes the particular solution
    canonical and reruns deterministic.
    """
    n = m.cols
    k = len(rhs)
    aug_rows = []
    for i, row in enumerate(m.sparse_rows()):
        r = dict(row)
        for t in range(k):
            v = rhs[t][i]
            if not v.is_zero():
                r[n + t] = v
        aug_rows.append(r)
    pivots, leftovers = _rref(iter(aug_rows), n)
    bad = set()
    for row in leftovers:
        for c in row:
            bad.add(c - n)
    out: list[Vector | None] = []
    for t in range(k):
        if t in bad:
            out.append(None)
            continue
        x = [ZERO] * n
        for c, prow in pivots.items():
            v = prow.get(n + t)
            if v is not None:
                x[c] = v
        out.append(tuple(x))
    return out


def solve_through(span_cols: Sequence[Sequence[Scalar]], value_cols: Sequence[Sequence[Scalar]],
                  out_dim: int, require_spanning: bool = True) -> Matrix | None:
    """Find M with M @ span_cols[j] == value_cols[j] for every j.

    This is how a linear map gets defined by its values on a spanning set:
    it exists iff every linear relation among the spanning columns is
    satisfied by the values.  Returns None when no such map exists.  When
    require_spanning is set, raises if the columns do not span the domain
    (the map would be underdetermined).
    """
    if len(span_cols) != len(value_cols):
        raise LinAlgError("solve_through: span/value length mismatch")
    in_dim = len(span_cols[0]) if span_cols else 0
    k = len(span_cols)
    # Transposed system: span^T  M^T = value^T, one RHS per output coordinate.
    st = Matrix(k, in_dim, [list(span_cols[j]) for j in range(k)])
    rhs = [[value_cols[j][i] for j in range(k)] for i in range(out_dim)]
    if require_spanning and st.rank() != in_dim:
        raise LinAlgError("solve_through: columns do not span the domain")
    sols = solve_many(st, rhs)
    rows = []
    for s in sols:
        if s is None:
            return None
        rows.append(list(s))
    if not rows:
        return Matrix.zeros(0, in_dim)
    return Matrix(out_dim, in_dim, rows)


def solve_sparse(rows: Sequence[dict[int, Scalar]], ncols: int,
                 rhs: Sequence[Scalar]) -> tuple[Vector | None, int]:
    """Solve a sparse row system with one right-hand side.

    Returns (particular or None, rank of the coefficient part); free
    variables are pinned to zero.
    """
    if len(rhs) != len(rows):
        raise LinAlgError("solve_sparse: rhs length mismatch")
    aug = []
    for row, b in zip(rows, rhs):
        r = dict(row)
        if not b.is_zero():
            r[ncols] = b
        aug.append(r)
    pivots, leftovers = _rref(iter(aug), ncols)
    if leftovers:
        return None, len(pivots)
    x = [ZERO] * ncols
    for c, prow in pivots.items():
        v = prow.get(ncols)
        if v is not None:
            x[c] = v
    return tuple(x), len(pivots)


class ColumnSolver:
    """Reusable solver for M x = b with fixed M and many later b's.

    Eliminates once with an identity augmentation; each solve is then a
    sparse substitution.  Free variables are pinned to zero so solutions
    are canonical.
    """

    def __init__(self, m: Matrix):
        self.m = m
        n = m.cols
        rows = []
        for i, row in enumerate(m.sparse_rows()):
            r = dict(row)
            r[n + i] = ONE
            rows.append(r)
        pivots, leftovers = _rref(iter(rows), n)
        self._pivots = {c: {j - n: v for j, v in prow.items() if j >= n}
                        for c, prow in pivots.items()}
        self._leftovers = [{j - n: v for j, v in row.items()} for row in leftovers]
        self.rank = len(pivots)

    def solve(self, b: Sequence[Scalar]) -> Vector | None:
        if len(b) != self.m.rows:
            raise LinAlgError("ColumnSolver: rhs dimension mismatch")
        for row in self._leftovers:
            acc = ZERO
            for i, v in row.items():
                x = b[i]
                if not x.is_zero():
                    acc = acc + v * x
            if not acc.is_zero():
                return None
        x = [ZERO] * self.m.cols
        for c, comb in self._pivots.items():
            acc = ZERO
            for i, v in comb.items():
                bi = b[i]
                if not bi.is_zero():
                    acc = acc + v * bi
            x[c] = acc
        return tuple(x)

    def kernel(self) -> Subspace:
        return self.m.kernel()


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product with (i, j) -> i * b.rows + j index flattening."""
    out = [[ZERO] * (a.cols * b.cols) for _ in range(a.rows * b.rows)]
    for i in range(a.rows):
        arow = a.entries[i]
        for j in range(a.cols):
            aij = arow[j]
            if aij.is_zero():
                continue
            for p in range(b.rows):
                brow = b.entries[p]
                orow = out[i * b.rows + p]
                for q in range(b.cols):
                    bpq = brow[q]
                    if not bpq.is_zero():
                        orow[j * b.cols + q] = aij * bpq
    return Matrix(a.rows * b.rows, a.cols * b.cols, out)

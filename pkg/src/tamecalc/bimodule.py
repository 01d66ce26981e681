"""Bimodules over a finite-dimensional algebra.

A bimodule is a K-space with one left-action and one right-action matrix per
algebra basis element.  Tensor products over the algebra are materialized as
quotients of the plain tensor space by the middle-linearity relations, with
explicit project/section matrices; Hom spaces of right-linear maps are cut
out as exact kernels.  These constructions carry the one-forms, two-forms
and their tensor squares for the rest of the engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import Algebra
from .errors import ContractViolationError, InternalInconsistencyError
from .linalg import (
    Matrix,
    ONE,
    Scalar,
    Subspace,
    Vector,
    ZERO,
    basis_vector,
    kernel_rows,
    vec_to_sparse,
    zero_vector,
)


class Bimodule:
    """A-A-bimodule as a K-space with action tensors."""

    def __init__(self, algebra: Algebra, dim: int,
                 left: Sequence[Matrix], right: Sequence[Matrix]):
        if len(left) != algebra.dim or len(right) != algebra.dim:
            raise ContractViolationError("bimodule: one action matrix per algebra basis element")
        for m in (*left, *right):
            if m.rows != dim or m.cols != dim:
                raise ContractViolationError("bimodule: action matrix of wrong shape")
        self.algebra = algebra
        self.dim = dim
        self.left = tuple(left)
        self.right = tuple(right)

    @staticmethod
    def regular(algebra: Algebra) -> "Bimodule":
        """The algebra as a bimodule over itself."""
        n = algebra.dim
        return Bimodule(algebra, n,
                        [algebra.left_basis_matrix(i) for i in range(n)],
                        [algebra.right_basis_matrix(i) for i in range(n)])

    @staticmethod
    def zero(algebra: Algebra) -> "Bimodule":
        z = Matrix.zeros(0, 0)
        return Bimodule(algebra, 0, [z] * algebra.dim, [z] * algebra.dim)

    def left_action(self, a: Vector) -> Matrix:
        out = Matrix.zeros(self.dim, self.dim)
        for i, c in vec_to_sparse(a).items():
            out = out + self.left[i].scale(c)
        return out

    def right_action(self, a: Vector) -> Matrix:
        out = Matrix.zeros(self.dim, self.dim)
        for i, c in vec_to_sparse(a).items():
            out = out + self.right[i].scale(c)
        return out

    def validate(self) -> None:
        """Certify the bimodule axioms; raises with the failing pair."""
        alg = self.algebra
        n = alg.dim
        ident = Matrix.identity(self.dim)
        if self.left_action(alg.unit) != ident:
            raise ContractViolationError("bimodule: unit does not act as identity on the left")
        if self.right_action(alg.unit) != ident:
            raise ContractViolationError("bimodule: unit does not act as identity on the right")
        for i in range(n):
            for j in range(n):
                prod = alg.mul[i][j]
                if self.left_action(prod) != self.left[i] @ self.left[j]:
                    raise ContractViolationError(
                        f"bimodule: (ab)e != a(be) at basis pair ({i}, {j})", witness=(i, j))
                if self.right_action(prod) != self.right[j] @ self.right[i]:
                    raise ContractViolationError(
                        f"bimodule: e(ab) != (ea)b at basis pair ({i}, {j})", witness=(i, j))
                if self.left[i] @ self.right[j] != self.right[j] @ self.left[i]:
                    raise ContractViolationError(
                        f"bimodule: (a e) b != a (e b) at basis pair ({i}, {j})", witness=(i, j))

    def __repr__(self) -> str:
        return f"Bimodule(dim={self.dim} over {self.algebra!r})"


# ---------------------------------------------------------------------------
# Center and centeredness
# ---------------------------------------------------------------------------

def module_center(e: Bimodule) -> Subspace:
    """Basis of {v : a v = v a for every basis a}."""
    rows = []
    for i in range(e.algebra.dim):
        diff = e.left[i] - e.right[i]
        rows.extend(diff.sparse_rows())
    return Subspace(e.dim, kernel_rows(rows, e.dim))


def right_span_columns(e: Bimodule, vectors: Sequence[Vector]) -> list[Vector]:
    """The spanning family {v . a_r} for v in vectors, a_r an algebra basis."""
    cols = []
    for v in vectors:
        for r in range(e.algebra.dim):
            cols.append(e.right[r].apply(v))
    return cols


@dataclass(frozen=True)
class CenteredReport:
    ok: bool
    center: Subspace
    witness: Vector | None  # a direction missing from the right span of the center


def is_centered(e: Bimodule) -> CenteredReport:
    """Does the center generate e as a right module?"""
    zc = module_center(e)
    span = Subspace(e.dim, right_span_columns(e, list(zc.basis)))
    if span.dim == e.dim:
        return CenteredReport(True, zc, None)
    missing = span.complement_positions()[0]
    return CenteredReport(False, zc, basis_vector(e.dim, missing))


# ---------------------------------------------------------------------------
# Tensor products over the algebra
# ---------------------------------------------------------------------------

def _tensor_left_apply(l: Matrix, fdim: int, svec: dict[int, Scalar]) -> dict[int, Scalar]:
    """(L (x) id) on a sparse plain-tensor vector, index (s, t) -> s*fdim + t."""
    out: dict[int, Scalar] = {}
    for idx, c in svec.items():
        s, t = divmod(idx, fdim)
        for k in range(l.rows):
            a = l.entries[k][s]
            if a.is_zero():
                continue
            j = k * fdim + t
            cur = out.get(j)
            nv = cur + a * c if cur is not None else a * c
            if nv.is_zero():
                out.pop(j, None)
            else:
                out[j] = nv
    return out


def _tensor_right_apply(r: Matrix, fdim: int, svec: dict[int, Scalar]) -> dict[int, Scalar]:
    """(id (x) R) on a sparse plain-tensor vector."""
    out: dict[int, Scalar] = {}
    for idx, c in svec.items():
        s, t = divmod(idx, fdim)
        base = s * fdim
        for k in range(r.rows):
            a = r.entries[k][t]
            if a.is_zero():
                continue
            j = base + k
            cur = out.get(j)
            nv = cur + a * c if cur is not None else a * c
            if nv.is_zero():
                out.pop(j, None)
            else:
                out[j] = nv
    return out


class QuotientTensor:
    """E (x)_A F as an explicit quotient of the plain tensor space.

    project sends plain coordinates to quotient coordinates, section is the
    canonical splitting through the echelon complement of the relation
    subspace, so project @ section == identity.
    """

    def __init__(self, left_factor: Bimodule, right_factor: Bimodule):
        if left_factor.algebra is not right_factor.algebra:
            raise ContractViolationError("tensor_over_A: factors over different algebras")
        e, f = left_factor, right_factor
        self.left_factor = e
        self.right_factor = f
        self.ambient_dim = e.dim * f.dim
        alg = e.algebra

        rows = []
        for i in range(alg.dim):
            re_i = e.right[i]
            lf_i = f.left[i]
            for s in range(e.dim):
                ecol = [(k, re_i.entries[k][s]) for k in range(e.dim)
                        if not re_i.entries[k][s].is_zero()]
                for t in range(f.dim):
                    row: dict[int, Scalar] = {}
                    for k, v in ecol:
                        row[k * f.dim + t] = v
                    for k in range(f.dim):
                        v = lf_i.entries[k][t]
                        if v.is_zero():
                            continue
                        j = s * f.dim + k
                        cur = row.get(j)
                        nv = cur - v if cur is not None else -v
                        if nv.is_zero():
                            row.pop(j, None)
                        else:
                            row[j] = nv
                    if row:
                        rows.append(row)
        self.relations = Subspace(self.ambient_dim, rows)
        free = self.relations.complement_positions()
        self.dim = len(free)

        # project: reduce each ambient basis vector modulo the relations and
        # read off the free coordinates; section: include the free positions.
        proj_cols: list[Vector] = []
        pos = {f_: q for q, f_ in enumerate(free)}
        for j in range(self.ambient_dim):
            if j in pos:
                proj_cols.append(basis_vector(self.dim, pos[j]))
            else:
                red = self.relations.reduce(basis_vector(self.ambient_dim, j))
                proj_cols.append(tuple(red[f_] for f_ in free))
        self.project = Matrix.from_cols(proj_cols, self.dim)
        sec_cols = [basis_vector(self.ambient_dim, f_) for f_ in free]
        self.section = Matrix.from_cols(sec_cols, self.ambient_dim) if free else Matrix.zeros(self.ambient_dim, 0)

        left = []
        right = []
        for i in range(alg.dim):
            lcols = []
            rcols = []
            for q in range(self.dim):
                svec = {free[q]: ONE}
                lcols.append(self._project_sparse(_tensor_left_apply(e.left[i], f.dim, svec)))
                rcols.append(self._project_sparse(_tensor_right_apply(f.right[i], f.dim, svec)))
            left.append(Matrix.from_cols(lcols, self.dim) if self.dim else Matrix.zeros(0, 0))
            right.append(Matrix.from_cols(rcols, self.dim) if self.dim else Matrix.zeros(0, 0))
        self.bimodule = Bimodule(alg, self.dim, left, right)

    def _project_sparse(self, svec: dict[int, Scalar]) -> Vector:
        out = [ZERO] * self.dim
        for j, c in svec.items():
            col = self.project.col(j)
            for q in range(self.dim):
                a = col[q]
                if not a.is_zero():
                    out[q] = out[q] + c * a
        return tuple(out)

    def pure(self, e_vec: Vector, f_vec: Vector) -> Vector:
        """Quotient coordinates of the class of e (x) f."""
        svec: dict[int, Scalar] = {}
        fdim = self.right_factor.dim
        for s, a in vec_to_sparse(e_vec).items():
            for t, b in vec_to_sparse(f_vec).items():
                svec[s * fdim + t] = a * b
        return self._project_sparse(svec)

    def lift(self, x: Vector) -> Vector:
        """The canonical plain-tensor representative of a quotient class."""
        return self.section.apply(x)

    def __repr__(self) -> str:
        return f"QuotientTensor(dim={self.dim}, ambient={self.ambient_dim})"


def tensor_over_A(e: Bimodule, f: Bimodule) -> QuotientTensor:
    """E (x)_A F with induced actions and canonical project/section."""
    return QuotientTensor(e, f)


# ---------------------------------------------------------------------------
# Hom modules
# ---------------------------------------------------------------------------

class HomModule:
    """All right-A-linear maps source -> target, with its bimodule structure.

    Maps are flattened target-major: coordinate f*source.dim + e is the
    (f, e) matrix entry.  The bimodule actions are (a T)(v) = a T(v) and
    (T a)(v) = T(a v).
    """

    def __init__(self, source: Bimodule, target: Bimodule):
        if source.algebra is not target.algebra:
            raise ContractViolationError("hom_A: source and target over different algebras")
        self.source = source
        self.target = target
        alg = source.algebra
        ns, nt = source.dim, target.dim

        rows = []
        for i in range(alg.dim):
            rs = source.right[i]
            rt = target.right[i]
            for j in range(ns):
                scol = [(k, rs.entries[k][j]) for k in range(ns)
                        if not rs.entries[k][j].is_zero()]
                for f in range(nt):
                    row: dict[int, Scalar] = {}
                    for k, v in scol:
                        row[f * ns + k] = v
                    for fp in range(nt):
                        v = rt.entries[f][fp]
                        if v.is_zero():
                            continue
                        idx = fp * ns + j
                        cur = row.get(idx)
                        nv = cur - v if cur is not None else -v
                        if nv.is_zero():
                            row.pop(idx, None)
                        else:
                            row[idx] = nv
                    if row:
                        rows.append(row)
        self.flat = Subspace(ns * nt, kernel_rows(rows, ns * nt))
        self.basis: tuple[Matrix, ...] = tuple(
            Matrix(nt, ns, [v[f * ns:(f + 1) * ns] for f in range(nt)])
            for v in self.flat.basis)
        self.dim = len(self.basis)

        left = []
        right = []
        for i in range(alg.dim):
            lcols = []
            rcols = []
            for t in self.basis:
                lcols.append(self._coords(target.left[i] @ t))
                rcols.append(self._coords(t @ source.left[i]))
            left.append(Matrix.from_cols(lcols, self.dim) if self.dim else Matrix.zeros(0, 0))
            right.append(Matrix.from_cols(rcols, self.dim) if self.dim else Matrix.zeros(0, 0))
        self.bimodule = Bimodule(alg, self.dim, left, right)

    def _coords(self, m: Matrix) -> Vector:
        c = self.coords_of(m)
        if c is None:
            raise InternalInconsistencyError(
                "hom module is not closed under the bimodule actions")
        return c

    def coords_of(self, m: Matrix) -> Vector | None:
        flatv = tuple(x for row in m.entries for x in row)
        return self.flat.coordinates(flatv)

    def matrix_of(self, coords: Vector) -> Matrix:
        ns, nt = self.source.dim, self.target.dim
        out = [[ZERO] * ns for _ in range(nt)]
        for s, c in vec_to_sparse(coords).items():
            b = self.basis[s]
            for f in range(nt):
                brow = b.entries[f]
                orow = out[f]
                for e in range(ns):
                    v = brow[e]
                    if not v.is_zero():
                        orow[e] = orow[e] + c * v
        return Matrix(nt, ns, out)

    def value(self, coords: Vector, v: Vector) -> Vector:
        """Evaluate the map with the given coordinates on v."""
        out = zero_vector(self.target.dim)
        for s, c in vec_to_sparse(coords).items():
            w = self.basis[s].apply(v)
            out = tuple(x + c * y for x, y in zip(out, w))
        return out

    def __repr__(self) -> str:
        return f"HomModule(dim={self.dim}: {self.source.dim} -> {self.target.dim})"


def hom_A(e: Bimodule, f: Bimodule) -> HomModule:
    """The right-A-linear maps e -> f as a bimodule."""
    return HomModule(e, f)


def dual_module(e: Bimodule) -> HomModule:
    """E* = Hom_A(E, A) with A acting through the regular bimodule."""
    return hom_A(e, Bimodule.regular(e.algebra))


# ---------------------------------------------------------------------------
# Pairings and central decompositions
# ---------------------------------------------------------------------------

def pair_apply(qt: QuotientTensor, phi: Matrix, psi: Matrix, x: Vector) -> Vector:
    """(phi (x) psi) applied to a class in E (x)_A F, valued in A.

    Defined as phi(e) * psi(f) summed over the canonical representative;
    independent of the representative when psi is a central element of the
    dual (callers enforce that where it matters).
    """
    alg = qt.left_factor.algebra
    fdim = qt.right_factor.dim
    out = zero_vector(alg.dim)
    for idx, c in vec_to_sparse(qt.lift(x)).items():
        s, t = divmod(idx, fdim)
        prod = alg.multiply(phi.col(s), psi.col(t))
        out = tuple(u + c * v for u, v in zip(out, prod))
    return out


def central_decomposition(qt: QuotientTensor, x: Vector) -> list[tuple[Vector, Vector]]:
    """Rewrite a class of E (x)_A F as sum_i  e_i (x) h_i with h_i central in F.

    Possible exactly when F is centered; fails loudly otherwise.
    """
    f = qt.right_factor
    rep = is_centered(f)
    if not rep.ok:
        raise ContractViolationError(
            "central_decomposition: right factor is not centered", witness=rep.witness)
    zbasis = list(rep.center.basis)
    span_cols = right_span_columns(f, zbasis)
    span = Matrix.from_cols(span_cols, f.dim)
    from .linalg import ColumnSolver

    solver = ColumnSolver(span)
    nA = f.algebra.dim
    fdim = f.dim
    firsts: dict[int, Vector] = {}
    for idx, c in vec_to_sparse(qt.lift(x)).items():
        s, t = divmod(idx, fdim)
        rep_t = solver.solve(basis_vector(fdim, t))
        if rep_t is None:
            raise InternalInconsistencyError("centered module failed to span itself")
        for pos, coef in vec_to_sparse(rep_t).items():
            q, r = divmod(pos, nA)
            # e_s (x) z_q a_r  ==  (e_s . a_r) (x) z_q  since z_q is central
            piece = qt.left_factor.right[r].apply(basis_vector(qt.left_factor.dim, s))
            piece = tuple((c * coef) * v for v in piece)
            cur = firsts.get(q)
            firsts[q] = tuple(u + v for u, v in zip(cur, piece)) if cur is not None else piece
    return [(first, zbasis[q]) for q, first in sorted(firsts.items())]

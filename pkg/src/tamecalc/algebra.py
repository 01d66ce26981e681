"""Finite-dimensional associative unital algebras over Q(i).

An algebra is given by structure constants: mul[i][j] is the coordinate
vector of basis_i * basis_j.  Elements are coordinate vectors.  The center
and the derivation test reduce to exact kernels.
"""

from __future__ import annotations

from typing import Sequence

from .errors import ContractViolationError
from .linalg import (
    Matrix,
    Subspace,
    Vector,
    ZERO,
    basis_vector,
    kernel_rows,
    vec_to_sparse,
)


class Algebra:
    """Associative unital algebra via structure constants.

    The constructor checks shapes only; call validate() to certify
    associativity and the unit laws (loaders do, builders are trusted by
    their own tests).
    """

    def __init__(self, dim: int, labels: Sequence[str], unit: Vector,
                 mul: Sequence[Sequence[Vector]]):
        if len(labels) != dim or len(unit) != dim:
            raise ContractViolationError("algebra: label/unit dimensions do not match dim")
        if len(mul) != dim or any(len(r) != dim for r in mul) or any(
                len(v) != dim for r in mul for v in r):
            raise ContractViolationError("algebra: structure constant tensor has wrong shape")
        self.dim = dim
        self.labels = tuple(labels)
        self.unit = tuple(unit)
        self.mul = tuple(tuple(tuple(v) for v in r) for r in mul)
        self._left: list[Matrix | None] = [None] * dim
        self._right: list[Matrix | None] = [None] * dim

    # -- multiplication -----------------------------------------------------

    def left_basis_matrix(self, i: int) -> Matrix:
        """Matrix of x -> basis_i * x."""
        m = self._left[i]
        if m is None:
            m = Matrix.from_cols([self.mul[i][j] for j in range(self.dim)], self.dim)
            self._left[i] = m
        return m

    def right_basis_matrix(self, i: int) -> Matrix:
        """Matrix of x -> x * basis_i."""
        m = self._right[i]
        if m is None:
            m = Matrix.from_cols([self.mul[j][i] for j in range(self.dim)], self.dim)
            self._right[i] = m
        return m

    def left_mult(self, a: Vector) -> Matrix:
        out = Matrix.zeros(self.dim, self.dim)
        for i, c in vec_to_sparse(a).items():
            out = out + self.left_basis_matrix(i).scale(c)
        return out

    def multiply(self, a: Vector, b: Vector) -> Vector:
        out = [ZERO] * self.dim
        for i, ca in vec_to_sparse(a).items():
            for j, cb in vec_to_sparse(b).items():
                c = ca * cb
                for k, s in enumerate(self.mul[i][j]):
                    if not s.is_zero():
                        out[k] = out[k] + c * s
        return tuple(out)

    def commutator(self, a: Vector, b: Vector) -> Vector:
        ab = self.multiply(a, b)
        ba = self.multiply(b, a)
        return tuple(x - y for x, y in zip(ab, ba))

    def ad(self, a: Vector) -> Matrix:
        """Inner derivation x -> a*x - x*a."""
        return Matrix.from_cols(
            [self.commutator(a, basis_vector(self.dim, j)) for j in range(self.dim)],
            self.dim)

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        """Certify associativity and the unit laws; raises with the failing triple."""
        n = self.dim
        for i in range(n):
            e = basis_vector(n, i)
            if self.multiply(self.unit, e) != e or self.multiply(e, self.unit) != e:
                raise ContractViolationError(
                    f"unit law fails on basis element {self.labels[i]}", witness=i)
        for i in range(n):
            for j in range(n):
                ij = self.mul[i][j]
                for k in range(n):
                    left = self.multiply(ij, basis_vector(n, k))
                    right = self.multiply(basis_vector(n, i), self.mul[j][k])
                    if left != right:
                        raise ContractViolationError(
                            "associativity fails on basis triple "
                            f"({self.labels[i]}, {self.labels[j]}, {self.labels[k]})",
                            witness=(i, j, k))

    # -- center and derivations ---------------------------------------------

    def center(self) -> Subspace:
        """Exact basis of {z : z b = b z for every basis b}."""
        rows = []
        for i in range(self.dim):
            d = self.left_basis_matrix(i) - self.right_basis_matrix(i)
            rows.extend(d.sparse_rows())
        return Subspace(self.dim, kernel_rows(rows, self.dim))

    def is_derivation(self, delta: Matrix) -> bool:
        """Leibniz test delta(ab) = delta(a) b + a delta(b) on all basis pairs."""
        if delta.rows != self.dim or delta.cols != self.dim:
            raise ContractViolationError("derivation matrix has wrong shape")
        n = self.dim
        dcols = [delta.col(j) for j in range(n)]
        for i in range(n):
            ei = basis_vector(n, i)
            for j in range(n):
                lhs = delta.apply(self.mul[i][j])
                rhs = tuple(
                    x + y for x, y in zip(
                        self.multiply(dcols[i], basis_vector(n, j)),
                        self.multiply(ei, dcols[j])))
                if lhs != rhs:
                    return False
        return True

    def __repr__(self) -> str:
        return f"Algebra(dim={self.dim}, basis={list(self.labels)})"

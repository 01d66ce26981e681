"""Differential calculi and the constructive tameness certificate.

A calculus is (one-forms E, two-forms, d0, d1, wedge).  The wedge is given
on the plain tensor space of E (x)_K E and must factor through E (x)_A E.
Tameness is certified constructively: the candidate symmetry sigma is the
flip on central tensors extended right-linearly; the construction succeeds
exactly when the flip respects every linear relation among the spanning
tensors, and the certificate then packages sigma, the symmetrizer, the
complement of ker(wedge) and the inverse of the wedge on that complement.
Failures are returned as data, never raised: the check command is a
diagnostic tool.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .algebra import Algebra
from .bimodule import (
    Bimodule,
    QuotientTensor,
    is_centered,
    tensor_over_A,
)
from .errors import ContractViolationError, InternalInconsistencyError
from .linalg import (
    HALF,
    LinAlgError,
    Matrix,
    Subspace,
    Vector,
    ZERO,
    basis_vector,
    solve_through,
    vec_is_zero,
    vec_to_sparse,
)


class Calculus:
    """The data (A, E, Omega^2, d0, d1, wedge) with cached tensor square."""

    def __init__(self, algebra: Algebra, one_forms: Bimodule, two_forms: Bimodule,
                 d0: Matrix, d1: Matrix, wedge_plain: Matrix):
        e, w2 = one_forms, two_forms
        if d0.rows != e.dim or d0.cols != algebra.dim:
            raise ContractViolationError("calculus: d0 must map algebra coords to one-form coords")
        if d1.rows != w2.dim or d1.cols != e.dim:
            raise ContractViolationError("calculus: d1 must map one-form coords to two-form coords")
        if wedge_plain.rows != w2.dim or wedge_plain.cols != e.dim * e.dim:
            raise ContractViolationError("calculus: wedge must map the plain tensor square to two-forms")
        self.algebra = algebra
        self.one_forms = e
        self.two_forms = w2
        self.d0 = d0
        self.d1 = d1
        self.wedge_plain = wedge_plain
        self._tensor_square: QuotientTensor | None = None
        self._wedge_q: Matrix | None = None

    @property
    def tensor_square(self) -> QuotientTensor:
        if self._tensor_square is None:
            self._tensor_square = tensor_over_A(self.one_forms, self.one_forms)
        return self._tensor_square

    @property
    def wedge_q(self) -> Matrix:
        """The wedge on quotient coordinates of E (x)_A E."""
        if self._wedge_q is None:
            self._wedge_q = self.wedge_plain @ self.tensor_square.section
        return self._wedge_q

    def wedge_of(self, e_vec: Vector, f_vec: Vector) -> Vector:
        """wedge(e (x) f) straight from the plain tensor matrix."""
        n = self.one_forms.dim
        out = [ZERO] * self.two_forms.dim
        for s, a in vec_to_sparse(e_vec).items():
            for t, b in vec_to_sparse(f_vec).items():
                col = s * n + t
                c = a * b
                for r in range(self.two_forms.dim):
                    v = self.wedge_plain.entries[r][col]
                    if not v.is_zero():
                        out[r] = out[r] + c * v
        return tuple(out)

    def d_of(self, a: Vector) -> Vector:
        return self.d0.apply(a)

    def __repr__(self) -> str:
        return (f"Calculus(dim A={self.algebra.dim}, dim E={self.one_forms.dim}, "
                f"dim Omega2={self.two_forms.dim})")


# ---------------------------------------------------------------------------
# Validation report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckItem:
    name: str
    ok: bool
    witness: str | None = None


@dataclass(frozen=True)
class CalculusReport:
    items: tuple[CheckItem, ...]

    @property
    def ok(self) -> bool:
        return all(item.ok for item in self.items)

    def failures(self) -> list[CheckItem]:
        return [item for item in self.items if not item.ok]

    def __iter__(self) -> Iterator[CheckItem]:
        return iter(self.items)


def validate_calculus(calc: Calculus) -> CalculusReport:
    """Run every calculus axiom; failures are report entries with witnesses."""
    items: list[CheckItem] = []
    alg = calc.algebra
    e = calc.one_forms
    w2 = calc.two_forms
    nA, nE = alg.dim, e.dim

    def check(name: str, fn) -> None:
        try:
            witness = fn()
        except ContractViolationError as exc:
            items.append(CheckItem(name, False, str(exc)))
            return
        items.append(CheckItem(name, witness is None, witness))

    def axioms_one_forms():
        e.validate()
        return None

    def axioms_two_forms():
        w2.validate()
        return None

    def d0_leibniz():
        for i in range(nA):
            di = calc.d0.col(i)
            for j in range(nA):
                lhs = calc.d0.apply(alg.mul[i][j])
                rhs_first = e.right[j].apply(di)
                rhs_second = e.left[i].apply(calc.d0.col(j))
                if lhs != tuple(x + y for x, y in zip(rhs_first, rhs_second)):
                    return f"d(ab) != da.b + a.db at basis pair ({alg.labels[i]}, {alg.labels[j]})"
        return None

    def d_squared():
        if not (calc.d1 @ calc.d0).is_zero():
            return "d1 . d0 != 0"
        return None

    def wedge_middle_linear():
        for v in calc.tensor_square.relations.basis:
            if not vec_is_zero(calc.wedge_plain.apply(v)):
                return "wedge does not vanish on the (x)_A relation subspace"
        return None

    def wedge_bimodule_map():
        for i in range(nA):
            le, lw = e.left[i], w2.left[i]
            re, rw = e.right[i], w2.right[i]
            for s in range(nE):
                for t in range(nE):
                    base = calc.wedge_of(basis_vector(nE, s), basis_vector(nE, t))
                    lhs = calc.wedge_of(le.col(s), basis_vector(nE, t))
                    if lhs != lw.apply(base):
                        return f"wedge(a e (x) f) != a wedge(e (x) f) at (a={alg.labels[i]}, {s}, {t})"
                    rhs = calc.wedge_of(basis_vector(nE, s), re.col(t))
                    if rhs != rw.apply(base):
                        return f"wedge(e (x) f a) != wedge(e (x) f) a at (a={alg.labels[i]}, {s}, {t})"
        return None

    def graded_leibniz():
        # d(da.b) = -da ^ db, d(a.w) = da ^ w + a.dw, d(w.a) = dw.a - w ^ da
        for i in range(nA):
            da = calc.d0.col(i)
            for j in range(nA):
                lhs = calc.d1.apply(e.right[j].apply(da))
                rhs = tuple(-x for x in calc.wedge_of(da, calc.d0.col(j)))
                if lhs != rhs:
                    return f"d(da.b) != -da^db at ({alg.labels[i]}, {alg.labels[j]})"
        for i in range(nA):
            da = calc.d0.col(i)
            for s in range(nE):
                es = basis_vector(nE, s)
                ds = calc.d1.col(s)
                lhs = calc.d1.apply(e.left[i].apply(es))
                rhs = tuple(x + y for x, y in zip(calc.wedge_of(da, es), w2.left[i].apply(ds)))
                if lhs != rhs:
                    return f"d(a.w) != da^w + a.dw at (a={alg.labels[i]}, w={s})"
                lhs = calc.d1.apply(e.right[i].apply(es))
                rhs = tuple(x - y for x, y in zip(w2.right[i].apply(ds), calc.wedge_of(es, da)))
                if lhs != rhs:
                    return f"d(w.a) != dw.a - w^da at (a={alg.labels[i]}, w={s})"
        return None

    def spanned_by_da_b():
        cols = []
        for i in range(nA):
            da = calc.d0.col(i)
            for j in range(nA):
                cols.append(e.right[j].apply(da))
        if Subspace(nE, cols).dim != nE:
            return "one-forms are not the right-linear span of {da.b}"
        return None

    def wedge_surjective():
        if calc.wedge_plain.rank() != w2.dim:
            return "wedge does not reach all of the two-forms"
        return None

    check("one_forms_bimodule_axioms", axioms_one_forms)
    check("two_forms_bimodule_axioms", axioms_two_forms)
    check("d0_leibniz", d0_leibniz)
    check("d_squared_zero", d_squared)
    check("wedge_middle_linear", wedge_middle_linear)
    check("wedge_bimodule_map", wedge_bimodule_map)
    check("graded_leibniz", graded_leibniz)
    check("one_forms_spanned_by_exact_forms", spanned_by_da_b)
    check("wedge_surjective", wedge_surjective)
    return CalculusReport(tuple(items))


# ---------------------------------------------------------------------------
# Tameness certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CentralSpanning:
    """The family pi(z_p (x) z_q) . a_r indexed by (p, q, r), with caches."""

    zbasis: tuple[Vector, ...]
    pures: tuple[tuple[Vector, ...], ...]      # pures[p][q] = pi(z_p (x) z_q)
    triples: tuple[tuple[int, int, int], ...]
    columns: tuple[Vector, ...]


@dataclass(frozen=True)
class TamenessCertificate:
    calculus: Calculus
    tensor_square: QuotientTensor
    center_one_forms: Subspace
    sigma: Matrix
    p_sym: Matrix
    kernel_wedge: Subspace
    complement_f: Subspace
    q_inverse: Matrix
    spanning: CentralSpanning
    flags: dict[str, bool] = field(default_factory=dict)

    @property
    def central_basis(self) -> tuple[Vector, ...]:
        return self.center_one_forms.basis


@dataclass(frozen=True)
class TamenessFailure:
    condition: str
    detail: str
    witness: object = None


@dataclass(frozen=True)
class SymmetryOutcome:
    certificate: TamenessCertificate | None
    failure: TamenessFailure | None

    @property
    def ok(self) -> bool:
        return self.certificate is not None


def _fail(condition: str, detail: str, witness=None) -> SymmetryOutcome:
    return SymmetryOutcome(None, TamenessFailure(condition, detail, witness))


def central_spanning(calc: Calculus, zbasis: tuple[Vector, ...]) -> CentralSpanning:
    qt = calc.tensor_square
    nz = len(zbasis)
    nA = calc.algebra.dim
    pures = tuple(tuple(qt.pure(zbasis[p], zbasis[q]) for q in range(nz)) for p in range(nz))
    triples = []
    columns = []
    for p in range(nz):
        for q in range(nz):
            for r in range(nA):
                triples.append((p, q, r))
                columns.append(qt.bimodule.right[r].apply(pures[p][q]))
    return CentralSpanning(zbasis, pures, tuple(triples), tuple(columns))


def build_symmetry(calc: Calculus) -> SymmetryOutcome:
    """Construct the tameness certificate or a structured refusal.

    The symmetry is pinned on the spanning set pi(z_p (x) z_q) . a_r by
    flipping the central legs; right-linear extension exists iff the flip
    preserves every linear relation among those columns, which is a single
    kernel-inclusion computation.
    """
    e = calc.one_forms
    qt = calc.tensor_square
    rep = is_centered(e)
    if not rep.ok:
        return _fail("NotCentered",
                     "the center of the one-forms does not generate them as a right module",
                     rep.witness)
    span = central_spanning(calc, rep.center.basis)
    flipped = []
    for (p, q, r) in span.triples:
        flipped.append(qt.bimodule.right[r].apply(span.pures[q][p]))

    if qt.dim == 0:
        sigma = Matrix.zeros(0, 0)
    else:
        try:
            sigma = solve_through(list(span.columns), flipped, out_dim=qt.dim)
        except LinAlgError:
            raise InternalInconsistencyError(
                "central tensors fail to span the tensor square of a centered module")
        if sigma is None:
            return _fail("FlipNotWellDefined",
                         "flipping central tensors is incompatible with a linear relation "
                         "among the spanning tensors")

    flags = {"centered": True, "sigma_well_defined": True}
    if not (sigma @ sigma == Matrix.identity(qt.dim)):
        raise InternalInconsistencyError("flip extension failed to be an involution")
    flags["sigma_involution"] = True

    bilinear = True
    for i in range(calc.algebra.dim):
        if sigma @ qt.bimodule.left[i] != qt.bimodule.left[i] @ sigma:
            bilinear = False
            break
        if sigma @ qt.bimodule.right[i] != qt.bimodule.right[i] @ sigma:
            bilinear = False
            break
    flags["sigma_bilinear"] = bilinear
    if not bilinear:
        return _fail("SigmaNotBilinear",
                     "the central flip extends right-linearly but is not a bimodule map",
                     calc.algebra.labels[i])

    p_sym = (Matrix.identity(qt.dim) + sigma).scale(HALF)
    kernel_wedge = calc.wedge_q.kernel()
    ran_p = p_sym.column_space()
    flags["psym_projects_onto_ker_wedge"] = ran_p == kernel_wedge
    if not flags["psym_projects_onto_ker_wedge"]:
        witness = None
        for b in ran_p.basis:
            if not kernel_wedge.contains_vector(b):
                witness = b
                break
        if witness is None:
            for b in kernel_wedge.basis:
                if not ran_p.contains_vector(b):
                    witness = b
                    break
        return _fail("PsymRangeMismatch",
                     "the symmetrizer image differs from the kernel of the wedge", witness)

    complement_f = p_sym.kernel()
    w2dim = calc.two_forms.dim
    if complement_f.dim != w2dim:
        return _fail("QNotInvertible",
                     f"complement has dimension {complement_f.dim}, two-forms {w2dim}")
    if w2dim:
        fcols = Matrix.from_cols(list(complement_f.basis), qt.dim)
        wf = calc.wedge_q @ fcols
        try:
            q_inverse = fcols @ wf.inverse()
        except LinAlgError:
            return _fail("QNotInvertible",
                         "wedge restricted to the complement is singular")
    else:
        q_inverse = Matrix.zeros(qt.dim, 0)
    cert = TamenessCertificate(
        calculus=calc,
        tensor_square=qt,
        center_one_forms=rep.center,
        sigma=sigma,
        p_sym=p_sym,
        kernel_wedge=kernel_wedge,
        complement_f=complement_f,
        q_inverse=q_inverse,
        spanning=span,
        flags=flags,
    )
    return SymmetryOutcome(cert, None)


def q_inverse_apply(cert: TamenessCertificate, w: Vector) -> Vector:
    """The unique preimage of a two-form in the complement of ker(wedge)."""
    return cert.q_inverse.apply(w)

"""Pseudo-Riemannian bilinear metrics and the vector-field module.

A metric is a bilinear symmetric map on the tensor square of the one-forms
whose one-leg contraction V_g identifies the one-forms with their dual.
Pulling the center of the one-forms through V_g produces the vector fields,
which act on the algebra by derivations; the pairing they inherit drives
the Koszul machinery in the connection module.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from .bimodule import (
    Bimodule,
    HomModule,
    dual_module,
    hom_A,
    module_center,
    pair_apply,
)
from .calculus import Calculus, TamenessCertificate
from .errors import (
    CenterMismatchError,
    ContractViolationError,
    InconsistentMetricError,
    InternalInconsistencyError,
)
from .linalg import (
    ColumnSolver,
    LinAlgError,
    Matrix,
    Subspace,
    Vector,
    basis_vector,
    qi,
    vec_is_zero,
    vec_to_sparse,
    zero_vector,
)


@dataclass(frozen=True)
class Metric:
    """A validated metric: quotient-coordinate form plus both legs of V_g."""

    g: Matrix                 # A-coords <- tensor-square quotient coords
    e_star: HomModule         # Hom_A(E, A)
    v_g: Matrix               # E* coords <- E coords
    v_g_inv: Matrix

    def g_plain(self, calc: Calculus) -> Matrix:
        return self.g @ calc.tensor_square.project

    def functional(self, coords: Vector) -> Matrix:
        """The dual element with the given coordinates, as a map E -> A."""
        return self.e_star.matrix_of(coords)


@dataclass(frozen=True)
class MetricFailure:
    reason: str               # NotBilinear | NotSymmetric | VgNotInvertible
    detail: str
    witness: object = None


@dataclass(frozen=True)
class MetricOutcome:
    metric: Metric | None
    failure: MetricFailure | None

    @property
    def ok(self) -> bool:
        return self.metric is not None


def _fail(reason: str, detail: str, witness=None) -> MetricOutcome:
    return MetricOutcome(None, MetricFailure(reason, detail, witness))


def validate_metric(calc: Calculus, cert: TamenessCertificate, g_in: Matrix) -> MetricOutcome:
    """Check bilinearity, symmetry and invertibility; build both legs of V_g.

    Accepts the metric either on plain tensor coordinates (dim E^2 columns,
    lifted by checking it kills the relations) or directly on quotient
    coordinates.
    """
    qt = calc.tensor_square
    alg = calc.algebra
    e = calc.one_forms
    if g_in.rows != alg.dim:
        return _fail("NotBilinear", f"metric must be valued in the algebra ({alg.dim} rows)")
    if g_in.cols == qt.ambient_dim:
        for v in qt.relations.basis:
            if not vec_is_zero(g_in.apply(v)):
                return _fail("NotBilinear",
                             "metric on plain tensors does not kill the (x)_A relations",
                             v)
        g = g_in @ qt.section
    elif g_in.cols == qt.dim:
        g = g_in
    else:
        return _fail("NotBilinear",
                     f"metric has {g_in.cols} columns; expected {qt.ambient_dim} (plain) "
                     f"or {qt.dim} (quotient)")

    for i in range(alg.dim):
        if g @ qt.bimodule.left[i] != alg.left_basis_matrix(i) @ g:
            return _fail("NotBilinear", "metric is not left-linear", alg.labels[i])
        if g @ qt.bimodule.right[i] != alg.right_basis_matrix(i) @ g:
            return _fail("NotBilinear", "metric is not right-linear", alg.labels[i])

    if g @ cert.sigma != g:
        for j in range(qt.dim):
            col = basis_vector(qt.dim, j)
            if g.apply(cert.sigma.apply(col)) != g.apply(col):
                return _fail("NotSymmetric", "g(sigma(x)) != g(x)", col)
        raise InternalInconsistencyError("matrix inequality without a witness column")

    e_star = dual_module(e)
    if e_star.dim != e.dim:
        return _fail("VgNotInvertible",
                     f"dual module has dimension {e_star.dim}, one-forms {e.dim}")
    cols = []
    for i in range(e.dim):
        functional = Matrix.from_cols(
            [g.apply(qt.pure(basis_vector(e.dim, i), basis_vector(e.dim, j)))
             for j in range(e.dim)], alg.dim)
        coords = e_star.coords_of(functional)
        if coords is None:
            raise InternalInconsistencyError(
                "one-leg contraction of a right-linear metric is not right-linear")
        cols.append(coords)
    v_g = Matrix.from_cols(cols, e_star.dim)
    try:
        v_g_inv = v_g.inverse()
    except LinAlgError:
        kernel = v_g.kernel()
        return _fail("VgNotInvertible", "V_g has a nontrivial kernel",
                     kernel.basis[0] if kernel.dim else None)
    return MetricOutcome(Metric(g=g, e_star=e_star, v_g=v_g, v_g_inv=v_g_inv), None)


# ---------------------------------------------------------------------------
# Vector fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VectorFieldModule:
    """X(A): the image of the central one-forms under V_g.

    basis[p] are E*-coordinates of X_p = V_g(z_p); maps[p] the same elements
    as concrete functionals; deltas[p] the derivation a -> X_p(da).
    """

    basis: tuple[Vector, ...]
    maps: tuple[Matrix, ...]
    deltas: tuple[Matrix, ...]
    center_dual: Subspace              # Z(E*) in E* coordinates
    span_solver: ColumnSolver          # decomposes E* over {X_p . a_r}
    span_pairs: tuple[tuple[int, int], ...]

    @property
    def count(self) -> int:
        return len(self.basis)

    def contains(self, phi: Vector) -> bool:
        return self.center_dual.contains_vector(phi)


def vector_fields(calc: Calculus, cert: TamenessCertificate, metric: Metric) -> VectorFieldModule:
    """Build X(A) = V_g(Z(E)), certify it equals Z(E*), attach derivations."""
    alg = calc.algebra
    e_star = metric.e_star
    basis = tuple(metric.v_g.apply(z) for z in cert.central_basis)
    image = Subspace(e_star.dim, basis)
    center_dual = module_center(e_star.bimodule)
    if image != center_dual:
        raise CenterMismatchError(
            "V_g(Z(E)) differs from the center of the dual module",
            witness=(image.dim, center_dual.dim))
    maps = tuple(e_star.matrix_of(x) for x in basis)
    deltas = tuple(m @ calc.d0 for m in maps)
    for p, d in enumerate(deltas):
        if not alg.is_derivation(d):
            raise InternalInconsistencyError(
                f"vector field {p} does not act as a derivation")
    pairs = []
    cols = []
    for p, x in enumerate(basis):
        for r in range(alg.dim):
            pairs.append((p, r))
            cols.append(e_star.bimodule.right[r].apply(x))
    span = Matrix.from_cols(cols, e_star.dim) if cols else Matrix.zeros(e_star.dim, 0)
    solver = ColumnSolver(span)
    if solver.rank != e_star.dim:
        raise InternalInconsistencyError(
            "vector fields are not right-total in the dual module")
    return VectorFieldModule(
        basis=basis, maps=maps, deltas=deltas, center_dual=center_dual,
        span_solver=solver, span_pairs=tuple(pairs))


def delta_of(calc: Calculus, metric: Metric, phi: Vector) -> Matrix:
    """The map a -> phi(da) for any dual element (a derivation iff central)."""
    return metric.e_star.matrix_of(phi) @ calc.d0


# ---------------------------------------------------------------------------
# The squared metric on the tensor square
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricSquare:
    """The pairing ((h (x) x) , (h' (x) x')) -> g(h (x) g(x (x) h') x')."""

    t2_star: HomModule
    v_g2: Matrix
    v_g2_inv: Matrix
    pair_values: tuple[tuple[Vector, ...], ...]   # [x][y] = g2(x (x) y) on basis

    def pairing(self, x: Vector, y: Vector) -> Vector:
        nA = len(self.pair_values[0][0]) if self.pair_values else 0
        out = zero_vector(nA)
        for s, a in vec_to_sparse(x).items():
            for t, b in vec_to_sparse(y).items():
                c = a * b
                out = tuple(u + c * v for u, v in zip(out, self.pair_values[s][t]))
        return out


def metric_square(calc: Calculus, cert: TamenessCertificate, metric: Metric) -> MetricSquare:
    """Extend the metric to two-fold tensors and certify it stays invertible."""
    qt = calc.tensor_square
    alg = calc.algebra
    e = calc.one_forms
    g = metric.g
    g_plain = metric.g_plain(calc)

    # pair_values[x][y] on quotient basis classes: lift both legs, contract
    # the middle with g, close with g again.
    lifted = [vec_to_sparse(qt.lift(basis_vector(qt.dim, x))) for x in range(qt.dim)]
    values: list[list[Vector]] = []
    for x in range(qt.dim):
        row: list[Vector] = []
        for y in range(qt.dim):
            acc = zero_vector(alg.dim)
            for sx, cx in lifted[x].items():
                s, t = divmod(sx, e.dim)
                for sy, cy in lifted[y].items():
                    u, v = divmod(sy, e.dim)
                    mid = g_plain.col(t * e.dim + u)
                    inner = zero_vector(e.dim)
                    for i, c in vec_to_sparse(mid).items():
                        lc = e.left[i].col(v)
                        inner = tuple(p + c * q for p, q in zip(inner, lc))
                    val = g.apply(qt.pure(basis_vector(e.dim, s), inner))
                    c = cx * cy
                    acc = tuple(p + c * q for p, q in zip(acc, val))
            row.append(acc)
        values.append(row)

    t2_star = hom_A(qt.bimodule, Bimodule.regular(alg))
    if t2_star.dim != qt.dim:
        raise InconsistentMetricError(
            f"dual of the tensor square has dimension {t2_star.dim}, expected {qt.dim}")
    cols = []
    for x in range(qt.dim):
        functional = Matrix.from_cols([values[x][y] for y in range(qt.dim)], alg.dim)
        coords = t2_star.coords_of(functional)
        if coords is None:
            raise InconsistentMetricError("squared pairing is not right-linear in its second slot")
        cols.append(coords)
    v_g2 = Matrix.from_cols(cols, t2_star.dim)
    try:
        v_g2_inv = v_g2.inverse()
    except LinAlgError:
        raise InconsistentMetricError("squared contraction V_g2 is singular")

    for i in range(alg.dim):
        if v_g2 @ qt.bimodule.left[i] != t2_star.bimodule.left[i] @ v_g2:
            raise InconsistentMetricError("V_g2 is not left-linear")
        if v_g2 @ qt.bimodule.right[i] != t2_star.bimodule.right[i] @ v_g2:
            raise InconsistentMetricError("V_g2 is not right-linear")

    square = MetricSquare(t2_star=t2_star, v_g2=v_g2, v_g2_inv=v_g2_inv,
                          pair_values=tuple(tuple(r) for r in values))

    # V_g(w) (x) V_g(h) must agree with the squared contraction of h (x) w
    # on central pairs; anything else means the inputs are inconsistent.
    for zw in cert.central_basis:
        phi_w = metric.functional(metric.v_g.apply(zw))
        for zh in cert.central_basis:
            phi_h = metric.functional(metric.v_g.apply(zh))
            target = qt.pure(zh, zw)
            for y in range(qt.dim):
                ey = basis_vector(qt.dim, y)
                lhs = pair_apply(qt, phi_w, phi_h, ey)
                if lhs != square.pairing(target, ey):
                    raise InconsistentMetricError(
                        "tensor of contractions disagrees with the squared metric "
                        "on central pairs")
    return square


# ---------------------------------------------------------------------------
# The induced pairing on the dual
# ---------------------------------------------------------------------------

def g_tilde(calc: Calculus, metric: Metric, phi: Vector, psi: Vector) -> Vector:
    """g(V_g^{-1} phi (x) V_g^{-1} psi) for dual coordinates phi, psi."""
    u = metric.v_g_inv.apply(phi)
    w = metric.v_g_inv.apply(psi)
    return metric.g.apply(calc.tensor_square.pure(u, w))


# ---------------------------------------------------------------------------
# Seeded metric generator for the exercise suites
# ---------------------------------------------------------------------------

def random_metric(calc: Calculus, cert: TamenessCertificate, seed: int,
                  attempts: int = 64) -> Matrix:
    """A deterministic, seeded, valid, non-Euclidean metric on quotient coords.

    Coefficients on central generator pairs are drawn from the center of the
    algebra (symmetrically), which makes the candidate automatically bilinear
    and symmetric; invertibility of V_g is then checked exactly and failing
    draws are discarded.
    """
    rng = Random(seed)
    qt = calc.tensor_square
    alg = calc.algebra
    zc_alg = alg.center()
    nz = len(cert.central_basis)
    if nz == 0:
        raise ContractViolationError("random_metric needs at least one central one-form")
    for _ in range(attempts):
        coeff: list[list[Vector]] = [[zero_vector(alg.dim)] * nz for _ in range(nz)]
        for p in range(nz):
            for q in range(p, nz):
                vec = zero_vector(alg.dim)
                for zb in zc_alg.basis:
                    c = qi(rng.randint(-3, 3))
                    vec = tuple(x + c * y for x, y in zip(vec, zb))
                coeff[p][q] = vec
                coeff[q][p] = vec
        span_cols = list(cert.spanning.columns)
        value_cols = []
        for (p, q, r) in cert.spanning.triples:
            value_cols.append(alg.right_basis_matrix(r).apply(coeff[p][q]))
        from .linalg import solve_through

        g = solve_through(span_cols, value_cols, out_dim=alg.dim)
        if g is None:
            continue
        outcome = validate_metric(calc, cert, g)
        if not outcome.ok:
            continue
        euclidean = all(
            (coeff[p][q] == alg.unit if p == q else vec_is_zero(coeff[p][q]))
            for p in range(nz) for q in range(nz))
        if euclidean:
            continue
        return g
    raise ContractViolationError(f"no valid metric found in {attempts} seeded draws")

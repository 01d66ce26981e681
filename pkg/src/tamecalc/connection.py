"""Connections on the one-forms and both Levi-Civita solvers.

A connection is stored by its value matrix on a basis of the one-forms,
with the Leibniz rule as a checked invariant.  The module provides the
Grassmann connection of a frame, the torsionless reference connection, the
covariant derivative on vector fields, the Lie bracket, the torsion and
metric-compatibility checks in both their form-level and covariant
formulations, and two independent routes to the Levi-Civita connection:

* a Koszul route that reads every covariant derivative off the
  six-term formula and reconstructs the connection through the
  separating family of field pairs, and
* a direct route that solves the torsionless + compatible constraints
  over all Leibniz perturbations of the reference connection.

Exact equality of the two routes is the engine's own strongest self-test.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from .bimodule import HomModule, hom_A, pair_apply
from .calculus import Calculus, TamenessCertificate
from .errors import (
    BracketNotCentralError,
    BracketUnsolvableError,
    ContractViolationError,
    InternalInconsistencyError,
    NoSolutionError,
    NonUniqueSolutionError,
    NoSplittingError,
    NotRightLinearError,
    SystemSingularError,
    YNotCentralError,
)
from .linalg import (
    ColumnSolver,
    HALF,
    Matrix,
    ONE,
    Scalar,
    Vector,
    ZERO,
    basis_vector,
    qi,
    solve_sparse,
    solve_through,
    vec_is_zero,
    vec_to_sparse,
    zero_vector,
)
from .metric import Metric, VectorFieldModule, g_tilde, vector_fields


@dataclass(frozen=True)
class Connection:
    """A linear map from one-forms to the tensor square, on basis columns."""

    nabla: Matrix

    def of(self, omega: Vector) -> Vector:
        return self.nabla.apply(omega)


@dataclass(frozen=True)
class FramePresentation:
    generators: tuple[Vector, ...]
    splitting: tuple[Matrix, ...]          # one A-valued functional per generator
    idempotent: tuple[tuple[Vector, ...], ...]   # p[i][j] = s_i(Phi_j) in A
    idempotent_check: bool


Table = tuple  # Table[p][q] = coordinates of the derivative of X_q along X_p


# ---------------------------------------------------------------------------
# Leibniz validation, Grassmann and the torsionless reference connection
# ---------------------------------------------------------------------------

def leibniz_witness(calc: Calculus, conn: Connection) -> tuple[int, int] | None:
    """First basis pair violating the Leibniz rule, or None."""
    e = calc.one_forms
    qt = calc.tensor_square
    for i in range(calc.algebra.dim):
        for s in range(e.dim):
            lhs = conn.nabla.apply(e.right[i].col(s))
            rhs = qt.bimodule.right[i].apply(conn.nabla.col(s))
            extra = qt.pure(basis_vector(e.dim, s), calc.d0.col(i))
            if lhs != tuple(x + y for x, y in zip(rhs, extra)):
                return (s, i)
    return None


def is_connection(calc: Calculus, conn: Connection) -> bool:
    return leibniz_witness(calc, conn) is None


def grassmann(calc: Calculus, cert: TamenessCertificate,
              frame: tuple[Vector, ...] | None = None) -> tuple[Connection, FramePresentation]:
    """The connection of a right-linear splitting through the given frame.

    The default frame is the central basis of the one-forms, which is
    right-total whenever the calculus is tame; a splitting exists exactly
    when the module is projective over the chosen generators.
    """
    e = calc.one_forms
    alg = calc.algebra
    qt = calc.tensor_square
    gens = tuple(frame) if frame is not None else cert.central_basis
    n = len(gens)
    nA, nE = alg.dim, e.dim
    width = nA * nE

    def unknown(j: int, out_a: int, in_e: int) -> int:
        return j * width + out_a * nE + in_e

    rows: list[dict[int, Scalar]] = []
    rhs: list[Scalar] = []
    # right-linearity of each splitting component
    for j in range(n):
        for i in range(nA):
            re_i = e.right[i]
            ra_i = alg.right_basis_matrix(i)
            for k in range(nE):
                recol = [(m, re_i.entries[m][k]) for m in range(nE)
                         if not re_i.entries[m][k].is_zero()]
                for c in range(nA):
                    row: dict[int, Scalar] = {}
                    for m, v in recol:
                        row[unknown(j, c, m)] = v
                    for d in range(nA):
                        v = ra_i.entries[c][d]
                        if v.is_zero():
                            continue
                        key = unknown(j, d, k)
                        cur = row.get(key)
                        nv = cur - v if cur is not None else -v
                        if nv.is_zero():
                            row.pop(key, None)
                        else:
                            row[key] = nv
                    if row:
                        rows.append(row)
                        rhs.append(ZERO)
    # reconstruction through the frame
    rgen = [[e.right[a].apply(gens[j]) for a in range(nA)] for j in range(n)]
    for k in range(nE):
        for c in range(nE):
            row = {}
            for j in range(n):
                for a in range(nA):
                    v = rgen[j][a][c]
                    if not v.is_zero():
                        row[unknown(j, a, k)] = v
            rows.append(row)
            rhs.append(ONE if c == k else ZERO)

    sol, _ = solve_sparse(rows, n * width, rhs)
    if sol is None:
        raise NoSplittingError(
            "no right-linear splitting through the chosen frame generators",
            witness=[f"frame size {n}", f"one-forms dim {nE}"])
    splitting = tuple(
        Matrix(nA, nE, [[sol[unknown(j, c, k)] for k in range(nE)] for c in range(nA)])
        for j in range(n))

    cols = []
    for k in range(nE):
        acc = zero_vector(qt.dim)
        for j in range(n):
            da = calc.d0.apply(splitting[j].col(k))
            acc = tuple(x + y for x, y in zip(acc, qt.pure(gens[j], da)))
        cols.append(acc)
    conn = Connection(Matrix.from_cols(cols, qt.dim))
    bad = leibniz_witness(calc, conn)
    if bad is not None:
        raise InternalInconsistencyError(f"Grassmann connection fails Leibniz at {bad}")

    idem = tuple(tuple(splitting[i].apply(gens[j]) for j in range(n)) for i in range(n))
    ok = True
    for i in range(n):
        for j in range(n):
            acc = zero_vector(nA)
            for k in range(n):
                acc = tuple(x + y for x, y in zip(acc, alg.multiply(idem[i][k], idem[k][j])))
            if acc != idem[i][j]:
                ok = False
    frame_p = FramePresentation(generators=gens, splitting=splitting,
                                idempotent=idem, idempotent_check=ok)
    return conn, frame_p


def torsion(calc: Calculus, conn: Connection) -> Matrix:
    """wedge after the connection plus d; right-linear for honest connections."""
    t = calc.wedge_q @ conn.nabla + calc.d1
    e = calc.one_forms
    w2 = calc.two_forms
    for i in range(calc.algebra.dim):
        if t @ e.right[i] != w2.right[i] @ t:
            raise NotRightLinearError(
                "torsion of a malformed connection is not right-linear",
                witness=calc.algebra.labels[i])
    return t


def nabla_zero(calc: Calculus, cert: TamenessCertificate,
               frame: tuple[Vector, ...] | None = None) -> Connection:
    """Kill the Grassmann torsion through the wedge inverse on the complement."""
    gr, _ = grassmann(calc, cert, frame)
    t = torsion(calc, gr)
    conn = Connection(gr.nabla - cert.q_inverse @ t)
    if not torsion(calc, conn).is_zero():
        raise InternalInconsistencyError("reference connection kept nonzero torsion")
    return conn


# ---------------------------------------------------------------------------
# Geometry: one tame calculus + one metric, with caches
# ---------------------------------------------------------------------------

class Geometry:
    """Bundles a tame calculus with a validated metric and its vector fields.

    Everything the connection-level solvers reuse (pairing legs, bracket
    solver, reconstruction system) is cached here; all members are
    effectively immutable once built.
    """

    def __init__(self, calc: Calculus, cert: TamenessCertificate, metric: Metric,
                 fields: VectorFieldModule | None = None,
                 frame: tuple[Vector, ...] | None = None):
        self.calc = calc
        self.cert = cert
        self.metric = metric
        self.frame = frame
        self.fields = fields if fields is not None else vector_fields(calc, cert, metric)
        self.g_plain = metric.g_plain(calc)
        self._sigma_pure: dict[tuple[int, int], dict[int, Scalar]] = {}
        self._leg_sigma: list[Matrix] | None = None
        self._leg_plain: list[Matrix] | None = None
        self._lie_table: list[list[Vector]] | None = None
        self._bracket_solver: ColumnSolver | None = None
        self._field_solver: ColumnSolver | None = None
        self._recon_solver: ColumnSolver | None = None
        self._hom_e_t2: HomModule | None = None
        self._nabla0: Connection | None = None
        self._extend_cols: list[Vector] | None = None

    # -- simple accessors ---------------------------------------------------

    @property
    def nabla0(self) -> Connection:
        if self._nabla0 is None:
            self._nabla0 = nabla_zero(self.calc, self.cert, self.frame)
        return self._nabla0

    @property
    def hom_e_t2(self) -> HomModule:
        if self._hom_e_t2 is None:
            self._hom_e_t2 = hom_A(self.calc.one_forms, self.calc.tensor_square.bimodule)
        return self._hom_e_t2

    def delta(self, phi: Vector, a: Vector) -> Vector:
        """phi(da): the derivation action when phi is a vector field."""
        return self.metric.e_star.value(phi, self.calc.d0.apply(a))

    def gt(self, phi: Vector, psi: Vector) -> Vector:
        return g_tilde(self.calc, self.metric, phi, psi)

    # -- pairing legs for the compatibility map ------------------------------

    def _sigma_pure_lift(self, t: int, q: int) -> dict[int, Scalar]:
        key = (t, q)
        got = self._sigma_pure.get(key)
        if got is None:
            qt = self.calc.tensor_square
            e_dim = self.calc.one_forms.dim
            z = self.cert.central_basis[q]
            flipped = self.cert.sigma.apply(qt.pure(basis_vector(e_dim, t), z))
            got = vec_to_sparse(qt.lift(flipped))
            self._sigma_pure[key] = got
        return got

    def _left_of_g(self, s: int, u: int, v: int) -> Vector:
        """g(class of e_s (x) e_u) acting on e_v from the left."""
        e = self.calc.one_forms
        a = self.g_plain.col(s * e.dim + u)
        out = zero_vector(e.dim)
        for i, c in vec_to_sparse(a).items():
            lc = e.left[i].col(v)
            out = tuple(x + c * y for x, y in zip(out, lc))
        return out

    def leg_sigma(self, q: int) -> Matrix:
        """As a matrix in w: contract g over legs 1-2 of sigma_23(w (x) z_q)."""
        if self._leg_sigma is None:
            self._leg_sigma = [self._build_leg_sigma(qq)
                               for qq in range(len(self.cert.central_basis))]
        return self._leg_sigma[q]

    def _build_leg_sigma(self, q: int) -> Matrix:
        qt = self.calc.tensor_square
        e_dim = self.calc.one_forms.dim
        cols = []
        for y in range(qt.dim):
            rep = vec_to_sparse(qt.lift(basis_vector(qt.dim, y)))
            out = zero_vector(e_dim)
            for idx, c in rep.items():
                s, t = divmod(idx, e_dim)
                for uv, c2 in self._sigma_pure_lift(t, q).items():
                    u, v = divmod(uv, e_dim)
                    term = self._left_of_g(s, u, v)
                    cc = c * c2
                    out = tuple(x + cc * y_ for x, y_ in zip(out, term))
            cols.append(out)
        return Matrix.from_cols(cols, e_dim) if qt.dim else Matrix.zeros(e_dim, 0)

    def leg_plain(self, p: int) -> Matrix:
        """As a matrix in w: contract g over legs 1-2 of z_p (x) w."""
        if self._leg_plain is None:
            self._leg_plain = [self._build_leg_plain(pp)
                               for pp in range(len(self.cert.central_basis))]
        return self._leg_plain[p]

    def _build_leg_plain(self, p: int) -> Matrix:
        qt = self.calc.tensor_square
        e_dim = self.calc.one_forms.dim
        zp = vec_to_sparse(self.cert.central_basis[p])
        cols = []
        for y in range(qt.dim):
            rep = vec_to_sparse(qt.lift(basis_vector(qt.dim, y)))
            out = zero_vector(e_dim)
            for idx, c in rep.items():
                u, v = divmod(idx, e_dim)
                for s, cz in zp.items():
                    term = self._left_of_g(s, u, v)
                    cc = c * cz
                    out = tuple(x + cc * y_ for x, y_ in zip(out, term))
            cols.append(out)
        return Matrix.from_cols(cols, e_dim) if qt.dim else Matrix.zeros(e_dim, 0)

    # -- brackets -------------------------------------------------------------

    @property
    def bracket_solver(self) -> ColumnSolver:
        """Recovers a dual element from its values on the exact one-forms."""
        if self._bracket_solver is None:
            e_star = self.metric.e_star
            nA = self.calc.algebra.dim
            rows = []
            for i in range(nA):
                for c in range(nA):
                    row = {}
                    for s in range(e_star.dim):
                        v = (e_star.basis[s] @ self.calc.d0).entries[c][i]
                        if not v.is_zero():
                            row[s] = v
                    rows.append(sparse_row_to_vec(row, e_star.dim))
            solver = ColumnSolver(Matrix.from_rows(rows) if rows
                                  else Matrix.zeros(0, e_star.dim))
            if solver.rank != e_star.dim:
                raise BracketUnsolvableError(
                    "values on exact one-forms do not pin a dual element; "
                    "the exact forms do not span")
            self._bracket_solver = solver
        return self._bracket_solver

    @property
    def field_solver(self) -> ColumnSolver:
        if self._field_solver is None:
            self._field_solver = ColumnSolver(
                Matrix.from_cols(list(self.fields.basis), self.metric.e_star.dim))
        return self._field_solver

    @property
    def lie_table(self) -> list[list[Vector]]:
        if self._lie_table is None:
            n = self.fields.count
            self._lie_table = [[lie_bracket(self, self.fields.basis[p], self.fields.basis[q])
                                for q in range(n)] for p in range(n)]
        return self._lie_table

    # -- reconstruction and extension machinery --------------------------------

    @property
    def recon_solver(self) -> ColumnSolver:
        """The stacked pairings (X_p (x) X_q) as equations on tensor classes."""
        if self._recon_solver is None:
            qt = self.calc.tensor_square
            nA = self.calc.algebra.dim
            n = self.fields.count
            rows: list[list[Scalar]] = []
            for p in range(n):
                for q in range(n):
                    vals = [pair_apply(qt, self.fields.maps[p], self.fields.maps[q],
                                       basis_vector(qt.dim, y)) for y in range(qt.dim)]
                    for c in range(nA):
                        rows.append([vals[y][c] for y in range(qt.dim)])
            solver = ColumnSolver(Matrix.from_rows(rows) if rows
                                  else Matrix.zeros(0, qt.dim))
            if solver.rank != qt.dim:
                raise SystemSingularError(
                    "field pairings do not separate the tensor square",
                    witness=solver.rank)
            self._recon_solver = solver
        return self._recon_solver

    @property
    def extend_cols(self) -> list[Vector]:
        """Spanning family z_r . a_s of the one-forms, for Leibniz extension."""
        if self._extend_cols is None:
            e = self.calc.one_forms
            cols = []
            for z in self.cert.central_basis:
                for s in range(self.calc.algebra.dim):
                    cols.append(e.right[s].apply(z))
            self._extend_cols = cols
        return self._extend_cols


def sparse_row_to_vec(row: dict[int, Scalar], n: int) -> list[Scalar]:
    out = [ZERO] * n
    for j, v in row.items():
        out[j] = v
    return out


# ---------------------------------------------------------------------------
# Covariant derivative and brackets
# ---------------------------------------------------------------------------

def covariant_derivative(geo: Geometry, conn: Connection, field: Vector,
                         direction: Vector) -> Vector:
    """The derivative of `field` along `direction`, as a dual element.

    Pointwise on one-forms w this is direction(d(field(w))) minus the
    pairing of field (x) direction against the connection of w; the pairing
    only makes sense when the direction is central, which is checked.
    """
    if not geo.fields.contains(direction):
        raise YNotCentralError("derivative direction must be a vector field")
    e_star = geo.metric.e_star
    e = geo.calc.one_forms
    qt = geo.calc.tensor_square
    fm = e_star.matrix_of(field)
    dm = e_star.matrix_of(direction)
    delta_dir = dm @ geo.calc.d0
    cols = []
    for i in range(e.dim):
        first = delta_dir.apply(fm.col(i))
        second = pair_apply(qt, fm, dm, conn.nabla.col(i))
        cols.append(tuple(x - y for x, y in zip(first, second)))
    functional = Matrix.from_cols(cols, geo.calc.algebra.dim)
    coords = e_star.coords_of(functional)
    if coords is None:
        raise InternalInconsistencyError("covariant derivative is not right-linear")
    return coords


def covariant_table(geo: Geometry, conn: Connection) -> Table:
    n = geo.fields.count
    return tuple(
        tuple(covariant_derivative(geo, conn, geo.fields.basis[q], geo.fields.basis[p])
              for q in range(n))
        for p in range(n))


def lie_bracket(geo: Geometry, x: Vector, y: Vector) -> Vector:
    """The unique dual element whose derivation is the commutator of the two."""
    if not geo.fields.contains(x) or not geo.fields.contains(y):
        raise ContractViolationError("lie_bracket arguments must be vector fields")
    e_star = geo.metric.e_star
    dx = e_star.matrix_of(x) @ geo.calc.d0
    dy = e_star.matrix_of(y) @ geo.calc.d0
    comm = dx @ dy - dy @ dx
    nA = geo.calc.algebra.dim
    rhs = []
    for i in range(nA):
        for c in range(nA):
            rhs.append(comm.entries[c][i])
    z = geo.bracket_solver.solve(rhs)
    if z is None:
        raise BracketUnsolvableError("no dual element matches the commutator")
    if not geo.fields.contains(z):
        raise BracketNotCentralError("bracket left the vector fields")
    return z


def bracket_general(geo: Geometry, x: Vector, phi: Vector) -> Vector:
    """[x, phi] for a field x and arbitrary dual phi.

    phi decomposes over the right-total family {X_p . a}; the bracket is the
    sum of [x, X_p] a_p plus delta_x(a_p) X_p, and does not depend on the
    decomposition.
    """
    lam = geo.field_solver.solve(x)
    if lam is None:
        raise ContractViolationError("bracket_general: first argument is not a vector field")
    dec = geo.fields.span_solver.solve(phi)
    if dec is None:
        raise InternalInconsistencyError("dual element escaped the field span")
    nA = geo.calc.algebra.dim
    e_star = geo.metric.e_star
    out = zero_vector(e_star.dim)
    a_of: dict[int, list[Scalar]] = {}
    for pos, c in vec_to_sparse(dec).items():
        p, r = divmod(pos, nA)
        cur = a_of.setdefault(p, [ZERO] * nA)
        cur[r] = cur[r] + c
    for p, a_list in a_of.items():
        a_p = tuple(a_list)
        bracket_xp = zero_vector(e_star.dim)
        for m, lm in vec_to_sparse(lam).items():
            bracket_xp = tuple(u + lm * v for u, v in zip(bracket_xp, geo.lie_table[m][p]))
        term1 = e_star.bimodule.right_action(a_p).apply(bracket_xp)
        dxa = geo.delta(x, a_p)
        term2 = e_star.bimodule.left_action(dxa).apply(geo.fields.basis[p])
        out = tuple(u + v + w for u, v, w in zip(out, term1, term2))
    return out


# ---------------------------------------------------------------------------
# Torsion and compatibility in covariant form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceReport:
    ok: bool
    witnesses: tuple = ()


def check_torsionless_cov(geo: Geometry, conn: Connection) -> EquivalenceReport:
    """Field-level torsion test, cross-checked against the form-level torsion."""
    n = geo.fields.count
    witnesses = []
    for p in range(n):
        for q in range(n):
            lhs = covariant_derivative(geo, conn, geo.fields.basis[q], geo.fields.basis[p])
            rhs = covariant_derivative(geo, conn, geo.fields.basis[p], geo.fields.basis[q])
            diff = tuple(a - b - c for a, b, c in zip(lhs, rhs, geo.lie_table[p][q]))
            if not vec_is_zero(diff):
                witnesses.append((p, q))
    cov_ok = not witnesses
    form_ok = torsion(geo.calc, conn).is_zero()
    if cov_ok != form_ok:
        raise InternalInconsistencyError(
            f"torsion verdicts disagree: covariant {cov_ok}, form-level {form_ok}")
    return EquivalenceReport(cov_ok, tuple(witnesses))


def pi0_values(geo: Geometry, conn: Connection, p: int, q: int) -> Vector:
    """The compatibility one-form on the central pair (z_p, z_q)."""
    w_p = conn.nabla.apply(geo.cert.central_basis[p])
    w_q = conn.nabla.apply(geo.cert.central_basis[q])
    first = geo.leg_sigma(q).apply(w_p)
    second = geo.leg_plain(p).apply(w_q)
    return tuple(x + y for x, y in zip(first, second))


def pi_g_matrix(geo: Geometry, conn: Connection) -> Matrix:
    """The compatibility map on the whole tensor square, by spanning solve."""
    calc = geo.calc
    e = calc.one_forms
    alg = calc.algebra
    qt = calc.tensor_square
    span = geo.cert.spanning
    values = []
    base: dict[tuple[int, int], Vector] = {}
    gval: dict[tuple[int, int], Vector] = {}
    nz = len(geo.cert.central_basis)
    for p in range(nz):
        for q in range(nz):
            base[(p, q)] = pi0_values(geo, conn, p, q)
            gval[(p, q)] = geo.metric.g.apply(span.pures[p][q])
    for (p, q, r) in span.triples:
        v = e.right[r].apply(base[(p, q)])
        extra = e.left_action(gval[(p, q)]).apply(calc.d0.col(r))
        values.append(tuple(x + y for x, y in zip(v, extra)))
    m = solve_through(list(span.columns), values, out_dim=e.dim)
    if m is None:
        raise InternalInconsistencyError("compatibility map is not well-defined")
    return m


def check_compat_cov(geo: Geometry, conn: Connection) -> EquivalenceReport:
    """Covariant metric-compatibility, cross-checked at the form level."""
    n = geo.fields.count
    witnesses = []
    ders = [[covariant_derivative(geo, conn, geo.fields.basis[b], geo.fields.basis[a])
             for b in range(n)] for a in range(n)]
    for yp in range(n):
        y = geo.fields.basis[yp]
        for zp in range(n):
            z = geo.fields.basis[zp]
            for xp in range(n):
                x = geo.fields.basis[xp]
                lhs = geo.delta(y, geo.gt(z, x))
                rhs = tuple(a + b for a, b in zip(
                    geo.gt(ders[yp][zp], x), geo.gt(ders[yp][xp], z)))
                if lhs != rhs:
                    witnesses.append((yp, zp, xp))
    cov_ok = not witnesses
    form_ok = pi_g_matrix(geo, conn) == geo.calc.d0 @ geo.metric.g
    if cov_ok != form_ok:
        raise InternalInconsistencyError(
            f"compatibility verdicts disagree: covariant {cov_ok}, form-level {form_ok}")
    return EquivalenceReport(cov_ok, tuple(witnesses))


# ---------------------------------------------------------------------------
# The Koszul route
# ---------------------------------------------------------------------------

def koszul_rhs(geo: Geometry, x: Vector, y: Vector, z: Vector) -> Vector:
    """The six-term right-hand side; x, y vector fields, z any dual element."""
    t1 = geo.delta(x, geo.gt(y, z))
    t2 = geo.delta(y, geo.gt(x, z))
    t3 = geo.delta(z, geo.gt(x, y))
    b_xz = bracket_general(geo, x, z)
    b_yx = lie_bracket(geo, y, x)
    b_zy = tuple(-v for v in bracket_general(geo, y, z))
    t4 = geo.gt(y, b_xz)
    t5 = geo.gt(b_yx, z)
    t6 = geo.gt(x, b_zy)
    return tuple(a + b - c - d - e + f for a, b, c, d, e, f in
                 zip(t1, t2, t3, t4, t5, t6))


@dataclass(frozen=True)
class LeviCivitaResult:
    connection: Connection
    table: Table
    table_in_fields: bool
    kernel_dim: int | None = None


def reconstruct_from_table(geo: Geometry, table: Table) -> Connection:
    """The unique connection whose covariant derivatives match the table.

    Solved through the separating family of field pairs on central
    one-forms, then extended to everything by the Leibniz rule.
    """
    calc = geo.calc
    qt = calc.tensor_square
    nA = calc.algebra.dim
    n = geo.fields.count
    e_star = geo.metric.e_star
    ws = []
    for z in geo.cert.central_basis:
        rhs = []
        for p in range(n):
            xp_of_z = geo.fields.maps[p].apply(z)
            for q in range(n):
                first = geo.delta(geo.fields.basis[q], xp_of_z)
                second = e_star.value(table[q][p], z)
                # row order matches recon_solver: p outer, q inner, then the
                # algebra coordinate
                rhs.extend(a - b for a, b in zip(first, second))
        w = geo.recon_solver.solve(rhs)
        if w is None:
            raise SystemSingularError("reconstruction system has no solution")
        ws.append(w)
    values = []
    for r, z in enumerate(geo.cert.central_basis):
        for s in range(nA):
            v = qt.bimodule.right[s].apply(ws[r])
            extra = qt.pure(z, calc.d0.col(s))
            values.append(tuple(x + y for x, y in zip(v, extra)))
    nabla = solve_through(geo.extend_cols, values, out_dim=qt.dim)
    if nabla is None:
        raise InternalInconsistencyError("Leibniz extension is not well-defined")
    return Connection(nabla)


def levi_civita_koszul(geo: Geometry) -> LeviCivitaResult:
    """Read the covariant-derivative table off the Koszul formula, then
    rebuild the connection and certify its defining properties exactly."""
    n = geo.fields.count
    e = geo.calc.one_forms
    e_star = geo.metric.e_star
    nA = geo.calc.algebra.dim
    table = []
    in_fields = True
    for p in range(n):
        row = []
        for q in range(n):
            cols = []
            for i in range(e.dim):
                z = geo.metric.v_g.col(i)
                val = koszul_rhs(geo, geo.fields.basis[p], geo.fields.basis[q], z)
                cols.append(tuple(HALF * v for v in val))
            functional = Matrix.from_cols(cols, nA)
            coords = e_star.coords_of(functional)
            if coords is None:
                raise InternalInconsistencyError("Koszul values are not right-linear")
            if not geo.fields.contains(coords):
                in_fields = False
            row.append(coords)
        table.append(tuple(row))
    table = tuple(table)
    conn = reconstruct_from_table(geo, table)

    bad = leibniz_witness(geo.calc, conn)
    if bad is not None:
        raise InternalInconsistencyError(f"Koszul connection fails Leibniz at {bad}")
    if not torsion(geo.calc, conn).is_zero():
        raise InternalInconsistencyError("Koszul connection has torsion")
    if pi_g_matrix(geo, conn) != geo.calc.d0 @ geo.metric.g:
        raise InternalInconsistencyError("Koszul connection is not compatible")
    if covariant_table(geo, conn) != table:
        raise InternalInconsistencyError("table does not regenerate from the connection")
    return LeviCivitaResult(connection=conn, table=table, table_in_fields=in_fields)


# ---------------------------------------------------------------------------
# The direct route
# ---------------------------------------------------------------------------

def levi_civita_direct(geo: Geometry) -> LeviCivitaResult:
    """Solve for the torsionless compatible connection among all Leibniz
    perturbations of the reference connection; the constraint kernel must be
    zero, which witnesses uniqueness."""
    calc = geo.calc
    e = calc.one_forms
    alg = calc.algebra
    qt = calc.tensor_square
    hom = geo.hom_e_t2
    n0 = geo.nabla0
    span = geo.cert.spanning
    nz = len(geo.cert.central_basis)
    nh = hom.dim

    lam_cols: dict[tuple[int, int], list[Vector]] = {}
    for p in range(nz):
        for q in range(nz):
            zs_p = geo.cert.central_basis[p]
            zs_q = geo.cert.central_basis[q]
            cols = []
            for s in range(nh):
                h = hom.basis[s]
                v = geo.leg_sigma(q).apply(h.apply(zs_p))
                w = geo.leg_plain(p).apply(h.apply(zs_q))
                cols.append(tuple(x + y for x, y in zip(v, w)))
            lam_cols[(p, q)] = cols

    rows: list[dict[int, Scalar]] = []
    rhs: list[Scalar] = []
    base: dict[tuple[int, int], Vector] = {}
    gval: dict[tuple[int, int], Vector] = {}
    for p in range(nz):
        for q in range(nz):
            base[(p, q)] = pi0_values(geo, n0, p, q)
            gval[(p, q)] = geo.metric.g.apply(span.pures[p][q])
    for (p, q, r) in span.triples:
        cons = e.right[r].apply(base[(p, q)])
        extra = e.left_action(gval[(p, q)]).apply(calc.d0.col(r))
        target = calc.d0.apply(alg.right_basis_matrix(r).apply(gval[(p, q)]))
        resid = tuple(t - c - x for t, c, x in zip(target, cons, extra))
        coeff = [e.right[r].apply(lam_cols[(p, q)][s]) for s in range(nh)]
        for c in range(e.dim):
            row = {}
            for s in range(nh):
                v = coeff[s][c]
                if not v.is_zero():
                    row[s] = v
            rows.append(row)
            rhs.append(resid[c])
    # torsion stays zero: wedge after the perturbation vanishes
    wh = [calc.wedge_q @ hom.basis[s] for s in range(nh)]
    for wcoord in range(calc.two_forms.dim):
        for k in range(e.dim):
            row = {}
            for s in range(nh):
                v = wh[s].entries[wcoord][k]
                if not v.is_zero():
                    row[s] = v
            rows.append(row)
            rhs.append(ZERO)

    sol, rank = solve_sparse(rows, nh, rhs)
    if sol is None:
        raise NoSolutionError("no torsionless compatible connection exists")
    kernel_dim = nh - rank
    if kernel_dim:
        raise NonUniqueSolutionError(
            "constraint system has a nontrivial kernel", witness=kernel_dim)
    alpha = Matrix.zeros(qt.dim, e.dim)
    for s, c in vec_to_sparse(sol).items():
        alpha = alpha + hom.basis[s].scale(c)
    conn = Connection(n0.nabla + alpha)
    return LeviCivitaResult(connection=conn, table=covariant_table(geo, conn),
                            table_in_fields=True, kernel_dim=kernel_dim)


# ---------------------------------------------------------------------------
# Classical bracket identity and seeded perturbations
# ---------------------------------------------------------------------------

def classical_bracket_check(geo: Geometry) -> bool:
    """[X, Y](xi) against the reference-connection correction formula, plus
    the vanishing of the antisymmetrized reference pairing on exact forms."""
    calc = geo.calc
    e = calc.one_forms
    qt = calc.tensor_square
    n0 = geo.nabla0
    n = geo.fields.count
    for i in range(calc.algebra.dim):
        da = calc.d0.col(i)
        w = n0.nabla.apply(da)
        for p in range(n):
            for q in range(n):
                forward = pair_apply(qt, geo.fields.maps[p], geo.fields.maps[q], w)
                backward = pair_apply(qt, geo.fields.maps[q], geo.fields.maps[p], w)
                if forward != backward:
                    return False
    for p in range(n):
        for q in range(n):
            br = geo.lie_table[p][q]
            for s in range(e.dim):
                xi = basis_vector(e.dim, s)
                lhs = geo.metric.e_star.value(br, xi)
                t1 = geo.metric.e_star.value(
                    geo.fields.basis[p],
                    calc.d0.apply(geo.fields.maps[q].col(s)))
                t2 = geo.metric.e_star.value(
                    geo.fields.basis[q],
                    calc.d0.apply(geo.fields.maps[p].col(s)))
                w = n0.nabla.col(s)
                t3 = pair_apply(qt, geo.fields.maps[p], geo.fields.maps[q], w)
                t4 = pair_apply(qt, geo.fields.maps[q], geo.fields.maps[p], w)
                rhs = tuple(a - b + c - d for a, b, c, d in zip(t1, t2, t3, t4))
                if lhs != rhs:
                    return False
    return True


def random_leibniz_perturbation(geo: Geometry, seed: int) -> Connection:
    """The reference connection plus a nonzero seeded right-linear shift."""
    rng = Random(seed)
    hom = geo.hom_e_t2
    qt = geo.calc.tensor_square
    e = geo.calc.one_forms
    while True:
        alpha = Matrix.zeros(qt.dim, e.dim)
        nonzero = False
        for s in range(hom.dim):
            c = rng.randint(-2, 2)
            if c:
                nonzero = True
                alpha = alpha + hom.basis[s].scale(qi(c))
        if nonzero or hom.dim == 0:
            return Connection(geo.nabla0.nabla + alpha)

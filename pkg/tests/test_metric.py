"""Metrics, V_g, the vector-field module, the squared metric, g-tilde."""

import pytest

from tamecalc.linalg import (
    Matrix,
    ONE,
    Subspace,
    basis_vector,
    vec_is_zero,
    zero_vector,
)
from tamecalc.metric import (
    delta_of,
    g_tilde,
    metric_square,
    random_metric,
    validate_metric,
    vector_fields,
)


@pytest.fixture(scope="module")
def fuzzy(fuzzy_preset, fuzzy_geo):
    return fuzzy_preset, fuzzy_geo.cert


@pytest.fixture(scope="module")
def fuzzy_metric(fuzzy_geo):
    return fuzzy_geo.metric


@pytest.fixture(scope="module")
def fuzzy_fields(fuzzy_geo):
    return fuzzy_geo.fields


@pytest.fixture(scope="module")
def torus(torus_preset, torus_geo):
    return torus_preset, torus_geo.cert, torus_geo.metric


# -- validation ---------------------------------------------------------------

def test_euclidean_metric_is_valid(fuzzy_metric):
    m = fuzzy_metric
    assert m.v_g @ m.v_g_inv == Matrix.identity(12)


def test_euclidean_metric_values_on_generators(fuzzy, fuzzy_metric):
    p, cert = fuzzy
    qt = p.calculus.tensor_square
    theta = [basis_vector(12, j * 4) for j in range(3)]
    unit = p.calculus.algebra.unit
    for i in range(3):
        for j in range(3):
            got = fuzzy_metric.g.apply(qt.pure(theta[i], theta[j]))
            assert got == (unit if i == j else zero_vector(4))


def test_zero_metric_rejected(fuzzy):
    p, cert = fuzzy
    outcome = validate_metric(p.calculus, cert, Matrix.zeros(4, 144))
    assert not outcome.ok
    assert outcome.failure.reason == "VgNotInvertible"


def test_asymmetric_metric_rejected(fuzzy):
    # Bilinear (built through the spanning solve) but with an antisymmetric
    # defect between theta_1 and theta_2, so g sigma != g.
    from tamecalc.linalg import solve_through

    p, cert = fuzzy
    alg = p.calculus.algebra
    unit = alg.unit
    coeff = [[unit if i == j else zero_vector(4) for j in range(3)] for i in range(3)]
    coeff[0][1] = unit
    coeff[1][0] = tuple(-x for x in unit)
    values = [alg.right_basis_matrix(r).apply(coeff[pp][qq])
              for (pp, qq, r) in cert.spanning.triples]
    g = solve_through(list(cert.spanning.columns), values, out_dim=4)
    outcome = validate_metric(p.calculus, cert, g)
    assert not outcome.ok
    assert outcome.failure.reason == "NotSymmetric"


def fuzzy_euclidean_quotient(p, cert):
    return p.metric_plain @ p.calculus.tensor_square.section


def test_non_bilinear_rejected(fuzzy):
    p, cert = fuzzy
    g = fuzzy_euclidean_quotient(p, cert)
    rows = [list(r) for r in g.entries]
    rows[1][0] = rows[1][0] + ONE  # breaks left-linearity, keeps shape
    outcome = validate_metric(p.calculus, cert, Matrix(4, 36, rows))
    assert not outcome.ok
    assert outcome.failure.reason in ("NotBilinear", "NotSymmetric")


def test_plain_matrix_not_killing_relations_rejected(fuzzy):
    p, cert = fuzzy
    qt = p.calculus.tensor_square
    rel = qt.relations.basis[0]
    rows = [list(r) for r in p.metric_plain.entries]
    for col, v in enumerate(rel):
        rows[0][col] = rows[0][col] + v
    outcome = validate_metric(p.calculus, cert, Matrix(4, 144, rows))
    assert not outcome.ok
    assert outcome.failure.reason == "NotBilinear"


# -- vector fields --------------------------------------------------------------

def test_fuzzy_vector_fields_are_inner_derivations(fuzzy, fuzzy_fields):
    p, cert = fuzzy
    alg = p.calculus.algebra
    assert fuzzy_fields.count == 3
    # delta_{X_k} = ad of the k-th generator: the derivation-based picture.
    for k, gen in enumerate((1, 2, 3)):
        assert fuzzy_fields.deltas[k] == alg.ad(basis_vector(4, gen))


def test_fuzzy_fields_match_all_derivations(fuzzy, fuzzy_fields):
    # X(A) is isomorphic to Der(A) here: every derivation of the matrix
    # algebra is inner, spanned by ad U, ad V, ad W.
    p, cert = fuzzy
    alg = p.calculus.algebra
    ad_span = Subspace(16, [tuple(x for row in alg.ad(basis_vector(4, k)).entries
                                  for x in row) for k in range(4)])
    field_span = Subspace(16, [tuple(x for row in d.entries for x in row)
                               for d in fuzzy_fields.deltas])
    assert ad_span.dim == 3
    assert field_span == ad_span


def test_torus_fields_rank_two(torus):
    p, cert, metric = torus
    fields = vector_fields(p.calculus, cert, metric)
    assert fields.count == 2
    # commuting derivations
    d1, d2 = fields.deltas
    assert d1 @ d2 == d2 @ d1


def test_field_count_is_center_times_lie_dimension(fuzzy_geo, torus_geo, line_geo):
    # in the Lie-action picture the fields form a free module over the
    # algebra center with one generator per acting direction
    cases = [(fuzzy_geo, 3), (torus_geo, 2), (line_geo, 1)]
    for geo, lie_dim in cases:
        z_dim = geo.calc.algebra.center().dim
        assert geo.fields.count == z_dim * lie_dim


def test_fields_values_on_central_forms_are_central(fuzzy, fuzzy_metric, fuzzy_fields):
    # X(eta) lands in the center of the algebra for central eta.
    p, cert = fuzzy
    zc = p.calculus.algebra.center()
    for m in fuzzy_fields.maps:
        for z in cert.central_basis:
            assert zc.contains_vector(m.apply(z))


def test_fields_are_right_total(fuzzy, fuzzy_fields):
    assert fuzzy_fields.span_solver.rank == 12


def test_delta_of_noncentral_dual_is_not_derivation(fuzzy, fuzzy_metric):
    p, cert = fuzzy
    alg = p.calculus.algebra
    fields = vector_fields(p.calculus, cert, fuzzy_metric)
    # X_1 . U is right-total material but not central, so its delta fails Leibniz.
    phi = fuzzy_metric.e_star.bimodule.right[1].apply(fields.basis[0])
    assert not fields.contains(phi)
    assert not alg.is_derivation(delta_of(p.calculus, fuzzy_metric, phi))


# -- metric square ---------------------------------------------------------------

@pytest.fixture(scope="module")
def fuzzy_square(fuzzy, fuzzy_metric):
    p, cert = fuzzy
    return metric_square(p.calculus, cert, fuzzy_metric)


def test_metric_square_euclidean_values(fuzzy, fuzzy_metric, fuzzy_square):
    # g2((theta_i (x) theta_j) (x) (theta_k (x) theta_l)) = delta_jk delta_il
    p, cert = fuzzy
    qt = p.calculus.tensor_square
    unit = p.calculus.algebra.unit
    theta = [basis_vector(12, j * 4) for j in range(3)]
    for i in range(3):
        for j in range(3):
            x = qt.pure(theta[i], theta[j])
            for k in range(3):
                for l in range(3):
                    y = qt.pure(theta[k], theta[l])
                    got = fuzzy_square.pairing(x, y)
                    want = unit if (j == k and i == l) else zero_vector(4)
                    assert got == want


def test_metric_square_of_zero(fuzzy_square):
    assert vec_is_zero(fuzzy_square.pairing(zero_vector(36), basis_vector(36, 5)))


def test_metric_square_symmetrizer_identity(fuzzy, fuzzy_square):
    # the symmetrizer can hop across the squared pairing
    p, cert = fuzzy
    n = 36
    for x in range(0, n, 7):
        px = cert.p_sym.apply(basis_vector(n, x))
        for y in range(0, n, 5):
            py = cert.p_sym.apply(basis_vector(n, y))
            lhs = fuzzy_square.pairing(px, basis_vector(n, y))
            rhs = fuzzy_square.pairing(basis_vector(n, x), py)
            assert lhs == rhs


def test_metric_square_invertible(fuzzy_square):
    assert fuzzy_square.v_g2 @ fuzzy_square.v_g2_inv == Matrix.identity(36)


# -- g-tilde ---------------------------------------------------------------------

def test_g_tilde_euclidean_on_fields(fuzzy, fuzzy_metric, fuzzy_fields):
    p, cert = fuzzy
    unit = p.calculus.algebra.unit
    for i in range(3):
        for j in range(3):
            got = g_tilde(p.calculus, fuzzy_metric, fuzzy_fields.basis[i],
                          fuzzy_fields.basis[j])
            assert got == (unit if i == j else zero_vector(4))


def test_g_tilde_zero_argument(fuzzy, fuzzy_metric, fuzzy_fields):
    assert vec_is_zero(g_tilde(p_calc(fuzzy), fuzzy_metric, fuzzy_fields.basis[0],
                               zero_vector(12)))


def p_calc(fuzzy):
    return fuzzy[0].calculus


def test_g_tilde_evaluation_identity(fuzzy, fuzzy_metric):
    # phi(V_g^{-1} psi) = g~(phi (x) psi) for arbitrary dual pairs
    p, cert = fuzzy
    m = fuzzy_metric
    for i in (0, 3, 7, 11):
        phi = basis_vector(12, i)
        phim = m.e_star.matrix_of(phi)
        for j in (0, 5, 9):
            psi = basis_vector(12, j)
            lhs = phim.apply(m.v_g_inv.apply(psi))
            assert lhs == g_tilde(p.calculus, m, phi, psi)


def test_g_tilde_symmetric_when_one_leg_is_field(fuzzy, fuzzy_metric, fuzzy_fields):
    p, cert = fuzzy
    for x in fuzzy_fields.basis:
        for j in (0, 5, 9):
            psi = basis_vector(12, j)
            assert g_tilde(p.calculus, fuzzy_metric, x, psi) == \
                g_tilde(p.calculus, fuzzy_metric, psi, x)


# -- seeded metrics ---------------------------------------------------------------

def test_random_metric_is_valid_and_deterministic(fuzzy):
    p, cert = fuzzy
    g1 = random_metric(p.calculus, cert, seed=7)
    g2 = random_metric(p.calculus, cert, seed=7)
    assert g1 == g2
    outcome = validate_metric(p.calculus, cert, g1)
    assert outcome.ok
    assert g1 != fuzzy_euclidean_quotient(p, cert)


def test_random_metric_varies_with_seed(fuzzy):
    p, cert = fuzzy
    assert random_metric(p.calculus, cert, seed=1) != random_metric(p.calculus, cert, seed=2)

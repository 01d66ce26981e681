"""Shared geometry fixtures: built once per session, everything downstream
is read-only."""

import pytest

from tamecalc.algebra import Algebra
from tamecalc.builders import (
    ChevalleySpec,
    build_chevalley,
    preset_abelian_torus,
    preset_matrix_derivations,
)
from tamecalc.calculus import build_symmetry
from tamecalc.connection import Geometry
from tamecalc.linalg import Matrix, ONE, ZERO, basis_vector, qi, zero_vector
from tamecalc.metric import validate_metric


def _geometry(preset):
    cert = build_symmetry(preset.calculus).certificate
    metric = validate_metric(preset.calculus, cert, preset.metric_plain).metric
    return Geometry(preset.calculus, cert, metric)


@pytest.fixture(scope="session")
def fuzzy_preset():
    return preset_matrix_derivations(2)


@pytest.fixture(scope="session")
def torus_preset():
    return preset_abelian_torus(2)


@pytest.fixture(scope="session")
def fuzzy_geo(fuzzy_preset):
    return _geometry(fuzzy_preset)


@pytest.fixture(scope="session")
def torus_geo(torus_preset):
    return _geometry(torus_preset)


def truncated_line_spec() -> ChevalleySpec:
    """K[x]/(x^3) with the Euler derivation; commutative, tame, Z(A) = A."""
    dim = 3
    z = zero_vector(dim)
    e = [basis_vector(dim, k) for k in range(dim)]
    mul = [[z] * dim for _ in range(dim)]
    for a in range(dim):
        for b in range(dim):
            if a + b < dim:
                mul[a][b] = e[a + b]
    alg = Algebra(dim, ("1", "x", "x^2"), e[0], mul)
    alg.validate()
    euler = Matrix.from_rows([(ZERO, ZERO, ZERO), (ZERO, ONE, ZERO), (ZERO, ZERO, qi(2))])
    return ChevalleySpec(alg, 1, ((z[:1],),), (euler,))


@pytest.fixture(scope="session")
def line_geo():
    """The commutative fixture with the non-constant metric (1 + x) a b."""
    calc = build_chevalley(truncated_line_spec())
    cert = build_symmetry(calc).certificate
    alg = calc.algebra
    e0, e1 = basis_vector(3, 0), basis_vector(3, 1)
    weight = alg.left_mult(tuple(x + y for x, y in zip(e0, e1)))
    entries = [[ZERO] * 9 for _ in range(3)]
    for alpha in range(3):
        for beta in range(3):
            val = weight.apply(alg.mul[alpha][beta])
            for gamma in range(3):
                entries[gamma][alpha * 3 + beta] = val[gamma]
    metric = validate_metric(calc, cert, Matrix(3, 9, entries)).metric
    return Geometry(calc, cert, metric)

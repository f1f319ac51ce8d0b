"""Connection and curvature against an independent symbolic computation.

The oracle works with sympy vector fields on the frame: it applies the
Koszul formula to basis vectors one at a time and builds R(X, Y)Z from
nabla compositions, sharing no code with the package.
"""
import itertools

import numpy as np
import pytest
import sympy as sp

from lorgeo.connection import (bianchi_residual, covariant_derivative, curvature, is_locally_symmetric, levi_civita,
                               metric_residual, ricci, torsion_residual)
from lorgeo.families import FamilyTag
from lorgeo.sampling import random_any

G = sp.diag(1, 1, -1)


def _oracle(inst):
    C = inst.constants.exact
    E = [sp.Matrix([1 if k == i else 0 for k in range(3)]) for i in range(3)]

    def br(x, y):
        return sp.Matrix([sum(x[i] * y[j] * sp.Rational(C[i][j][k]) for i in range(3) for j in range(3))
                          for k in range(3)])

    def ip(x, y):
        return (x.T * G * y)[0]

    def nab(x, y):
        # <nabla_X Y, Z> = (<[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>) / 2 for constant-coefficient fields
        low = sp.Matrix([(ip(br(x, y), z) - ip(br(y, z), x) + ip(br(z, x), y)) / 2 for z in E])
        return G * low

    def R(x, y, z):
        return nab(x, nab(y, z)) - nab(y, nab(x, z)) - nab(br(x, y), z)

    gamma = [[[nab(E[i], E[j])[k] for k in range(3)] for j in range(3)] for i in range(3)]
    riem = [[[[R(E[i], E[j], E[k])[m] for m in range(3)] for k in range(3)] for j in range(3)] for i in range(3)]
    ric = sp.Matrix(3, 3, lambda j, k: sum(R(E[i], E[j], E[k])[i] for i in range(3)))
    return gamma, riem, ric


def _exact_instances(n, seed):
    rng = np.random.default_rng(seed)
    tags = list(FamilyTag)
    return [random_any(tags[i % len(tags)], rng) for i in range(n)]


@pytest.mark.parametrize("inst", _exact_instances(14, 11), ids=lambda i: i.label())
def test_exact_connection_and_curvature_match_symbolic_oracle(inst):
    gamma, riem, ric = _oracle(inst)
    data = curvature(inst.constants, order=0, exact=True)
    assert levi_civita(inst.constants, exact=True).tolist() == gamma
    for i, j, k, m in itertools.product(range(3), repeat=4):
        assert data.riemann[i, j, k, m] == riem[i][j][k][m]
    assert sp.Matrix(data.ricci.tolist()) == ric
    np.testing.assert_allclose(ricci(inst.constants), np.array(ric.tolist(), dtype=float), atol=1e-10)


@pytest.mark.parametrize("inst", _exact_instances(21, 12), ids=lambda i: i.label())
def test_float_identities(inst):
    c = inst.constants
    gamma = levi_civita(c)
    scale = max(1.0, float(np.max(np.abs(c.c))))
    assert torsion_residual(c, gamma) <= 1e-12 * scale
    assert metric_residual(gamma) <= 1e-12 * scale
    data = curvature(c, gamma, order=1)
    assert bianchi_residual(data.riemann) <= 1e-11 * scale ** 2
    np.testing.assert_allclose(data.ricci, data.ricci.T, atol=1e-11 * scale ** 2)


def test_covariant_derivative_order_checks():
    gamma = np.zeros((3, 3, 3))
    with pytest.raises(ValueError):
        covariant_derivative(np.eye(3), gamma, order=3)
    assert np.all(covariant_derivative(np.eye(3), gamma, 2)[1] == 0)


def test_metric_is_parallel():
    c = _exact_instances(1, 3)[0].constants
    dg = covariant_derivative(np.diag([1.0, 1.0, -1.0]), levi_civita(c), 1)[0]
    assert np.max(np.abs(dg)) <= 1e-12 * max(1.0, float(np.max(np.abs(c.c))))


def test_local_symmetry_examples():
    from lorgeo.families import build_family

    assert is_locally_symmetric(build_family("g5", alpha=1, beta=0, gamma=0, delta=1).constants)
    assert not is_locally_symmetric(build_family("g5", alpha=1, beta=2, gamma=-4, delta=2).constants)

import math

import numpy as np
import pytest

from lorgeo.algebra import causal_character
from lorgeo.enumeration import (UnsupportedFamily, binary_roots, count_independent, enumerate_families,
                                has_null_homogeneous, rank_of, stated_count)
from lorgeo.families import build_family
from lorgeo.geodesics import (_jacobian, _solve_spd4, _system, canonical_direction, completion_residuals,
                              covariant_self_derivative, fibonacci_sphere, geodesic_residual, is_geodesic_vector,
                              make_geodesic_vector, nabla_parallel_check, null_directions, numeric_search)
from lorgeo.isotropy import SymmetricInstance, compute_l
from lorgeo.sampling import random_instance

G5 = build_family("g5", alpha=1, beta=2, gamma=-4, delta=2)


def test_frame_axis_e3_is_geodesic_in_g5():
    assert is_geodesic_vector(G5, (), [0, 0, 1]) == (0.0, ())
    gv = make_geodesic_vector(G5, (), [0, 0, 2.0])
    assert gv.causal == "timelike" and gv.residual == 0.0
    assert is_geodesic_vector(G5, (), [1, 0, 0]) is None
    with pytest.raises(ValueError):
        is_geodesic_vector(G5, (), [0, 0, 0])


def test_null_geodesic_needs_nonzero_k():
    inst = build_family("g7", alpha=1, beta=1, gamma=0, delta=2)
    found = null_directions(inst)
    assert found and all(causal_character(g.vector) == "null" for g in found)
    assert any(abs(g.k) > 1e-6 for g in found)
    for g in found:
        assert np.max(np.abs(geodesic_residual(inst, (), g.xm, g.k, g.isotropy_part))) <= 1e-9


def test_isotropy_part_completes_geodesic_vectors():
    inst = build_family("g3", alpha=1, beta=1, gamma=2)
    l = compute_l(inst.constants)
    assert l.dim == 1
    x = np.array([0.3, 0.4, 1.1])
    assert is_geodesic_vector(inst, (), x) is None
    k, t = is_geodesic_vector(inst, l, x)
    assert np.max(np.abs(geodesic_residual(inst, l, x, k, t))) <= 1e-9


def test_nabla_identity_for_k_zero():
    x = np.array([0.0, 0.0, 1.0])
    assert np.allclose(covariant_self_derivative(G5, x), 0)
    gv = make_geodesic_vector(G5, (), x)
    assert nabla_parallel_check(G5, gv)


def test_canonical_direction():
    np.testing.assert_allclose(canonical_direction([0, -3, 4]), [0, 0.6, -0.8])
    np.testing.assert_allclose(canonical_direction([1e-12, -1, 0]), [-1e-12, 1, 0])


def test_fibonacci_sphere_unit_and_spread():
    P = fibonacci_sphere(1000)
    np.testing.assert_allclose(np.linalg.norm(P, axis=1), 1.0)
    assert abs(P.mean(axis=0)).max() < 1e-2


def test_jacobian_matches_finite_differences():
    rng = np.random.default_rng(1)
    inst = build_family("g5", alpha=1, beta=2, gamma=-2, delta=1)
    mats = np.array([m.matrix().astype(float) for m in compute_l(inst.constants).basis])
    X, k, T = rng.standard_normal((4, 3)), rng.standard_normal(4), rng.standard_normal((4, 1))
    J = _jacobian(inst.constants, mats, X, k, T)
    z = np.concatenate([X, k[:, None], T], axis=1)
    h = 1e-6
    for p in range(z.shape[1]):
        zp, zm = z.copy(), z.copy()
        zp[:, p] += h
        zm[:, p] -= h
        fp = _system(inst.constants, mats, zp[:, :3], zp[:, 3], zp[:, 4:])
        fm = _system(inst.constants, mats, zm[:, :3], zm[:, 3], zm[:, 4:])
        np.testing.assert_allclose(J[:, :, p], (fp - fm) / (2 * h), atol=1e-6)


def test_batched_spd_solve():
    rng = np.random.default_rng(2)
    J = rng.standard_normal((200, 4, 6))
    H = J @ J.transpose(0, 2, 1)
    b = rng.standard_normal((200, 4))
    np.testing.assert_allclose(_solve_spd4(H, b), np.linalg.solve(H, b[:, :, None])[:, :, 0], rtol=1e-8, atol=1e-10)


def test_binary_roots():
    assert binary_roots(0, 0, 0) is None
    roots = binary_roots(1, 0, -1)
    for s, t in roots:
        assert abs(s * s - t * t) <= 1e-12 * (s * s + t * t)
    assert binary_roots(1, 0, 1) == []


def test_enumerated_members_are_geodesic():
    rng = np.random.default_rng(5)
    for tag, branch in (("g5", "any"), ("g6", "any"), ("g7", "A"), ("g7", "B")):
        for _ in range(10):
            inst = random_instance(tag, rng, branch)
            c = inst.constants
            for fam in enumerate_families(inst):
                X = fam.sample(50, rng)
                if len(X):
                    scale = float(np.max(np.abs(c.c)))
                    assert completion_residuals(c, (), X, 1e-9 * scale)[2].max() <= 1e-9 * scale


def test_enumeration_refuses_unimodular_and_symmetric():
    with pytest.raises(UnsupportedFamily):
        enumerate_families(build_family("g3", alpha=1, beta=2, gamma=3))
    with pytest.raises(SymmetricInstance):
        enumerate_families(build_family("g5", alpha=1, beta=0, gamma=0, delta=1))


def test_numeric_search_is_deterministic_and_on_families():
    a = numeric_search(G5, (), 2000, seed=3)
    b = numeric_search(G5, (), 2000, seed=3)
    assert [g.xm for g in a] == [g.xm for g in b]
    fams = enumerate_families(G5)
    U = np.array([g.xm for g in a])
    assert np.min([f.distance(U) for f in fams], axis=0).max() <= 1e-6
    assert rank_of(U, 1e-6) == count_independent(G5)
    with pytest.raises(ValueError):
        numeric_search(G5, (), 0)


def test_counts_and_null_on_known_instances():
    g7b = build_family("g7", alpha=1, beta=0, gamma=0, delta=2)
    assert count_independent(g7b) == 2
    assert stated_count(g7b) == 3
    assert has_null_homogeneous(g7b)
    found = numeric_search(g7b, (), 4000)
    assert rank_of([g.xm for g in found], 1e-6) == 2


def test_null_directions_on_light_cone_plane():
    # a member plane crossing the light cone holds two null lines that sphere sampling cannot hit
    rng = np.random.default_rng(6)
    for _ in range(20):
        inst = random_instance("g6", rng, "any")
        found = null_directions(inst)
        assert bool(found) == has_null_homogeneous(inst)
        for g in found:
            q = g.xm[0] ** 2 + g.xm[1] ** 2 - g.xm[2] ** 2
            assert abs(q) <= 1e-12 and math.isclose(np.linalg.norm(g.xm), 1.0)

"""g.o. and naturally reductive classification.

``is_go`` answers by the classification loci and cross-checks by sampling:
a space is g.o. exactly when every tangent direction completes to a
geodesic vector over the isotropy algebra. Natural reductivity is decided
independently by searching for a reductive split m = {X + phi(X)} of
g + l on which <[X,Y]_m, Z> + <[X,Z]_m, Y> vanishes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import METRIC, DEFAULT_TOL
from .connection import curvature, is_locally_symmetric
from .families import AlgebraInstance, FamilyTag, symmetric_locus
from .geodesics import (_iso_mats, is_geodesic_vector, make_geodesic_vector, null_directions,
                        numeric_search)
from .enumeration import count_independent, enumerate_families, has_null_homogeneous, rank_of
from .isotropy import compute_l

NR_TOL = 1e-9


def is_symmetric(instance: AlgebraInstance) -> bool:
    """Local symmetry: exact parameter loci for g5-g7, nabla R = 0 otherwise."""
    if not instance.unimodular:
        return symmetric_locus(instance.tag, instance.params) is not None
    c = instance.constants
    if c.exact is not None:
        data = curvature(c, order=1, exact=True)
        return all(v == 0 for v in np.asarray(data.nabla_riemann[0]).ravel())
    return is_locally_symmetric(c)


def go_by_classification(instance: AlgebraInstance) -> bool:
    """g.o. property read off the classification loci."""
    if is_symmetric(instance):
        return True
    a, b, g, _ = instance.params.as_tuple()
    if instance.tag is FamilyTag.G3:
        return (a == b != g) or (a == g != b) or (b == g != a)
    if instance.tag is FamilyTag.G4:
        return a == b - instance.params.epsilon
    return False


def _nr_system(c: np.ndarray, mats: np.ndarray):
    """Linear system in phi (phi(e_i) = sum_j P[i, j] A_j): the 27 basis
    residuals of the naturally reductive condition plus equivariance of phi."""
    h = len(mats)
    rows, rhs = [], []
    g = METRIC
    for x, y, z in itertools.product(range(3), repeat=3):
        coef = np.zeros((3, h))
        for j, A in enumerate(mats):
            # [X,Y]_m = [X,Y] + phi(X) Y - phi(Y) X
            coef[x, j] += A[:, y] @ g[:, z] + A[:, z] @ g[:, y]
            coef[y, j] -= A[:, x] @ g[:, z]
            coef[z, j] -= A[:, x] @ g[:, y]
        rows.append(coef.ravel())
        rhs.append(-(c[x, y] @ g[:, z] + c[x, z] @ g[:, y]))
    for Aa in mats:
        for x in range(3):
            for comp in range(9):
                coef = np.zeros((3, h))
                for j, Aj in enumerate(mats):
                    coef[x, j] += (Aa @ Aj - Aj @ Aa).ravel()[comp]
                    for p in range(3):
                        coef[p, j] -= Aa[p, x] * Aj.ravel()[comp]
                rows.append(coef.ravel())
                rhs.append(0.0)
    return np.array(rows).reshape(len(rows), 3 * h), np.array(rhs)


def nr_residual(instance, split_h_basis=(), phi=None) -> float:
    """Largest of the 27 basis residuals <[X,Y]_m,Z> + <[X,Z]_m,Y>.

    The split is m = {X + phi(X)} inside g + h, where h is spanned by
    ``split_h_basis`` (SkewMaps acting as derivations) and phi is given by
    its 3 x dim(h) coefficient matrix (zero by default, i.e. m = g).
    """
    c = (instance.constants if isinstance(instance, AlgebraInstance) else instance).c
    mats = _iso_mats(split_h_basis)
    M, b = _nr_system(c, mats)
    P = np.zeros(M.shape[1]) if phi is None else np.asarray(phi, dtype=float).ravel()
    return float(np.max(np.abs(M[:27] @ P - b[:27])))


def check_nr_condition(instance, split_h_basis=(), phi=None, tol: float = NR_TOL) -> bool:
    """True iff every basis residual of the naturally reductive condition is <= tol."""
    return nr_residual(instance, split_h_basis, phi) <= tol


def find_nr_split(instance, h_basis=None, tol: float = NR_TOL):
    """phi making m = {X + phi(X)} a naturally reductive complement, or None.

    h defaults to the derivation isotropy algebra l. The condition is linear
    in phi, so a least-squares solve decides existence.
    """
    if h_basis is None:
        h_basis = compute_l(instance.constants)
    c = instance.constants.c
    mats = _iso_mats(h_basis)
    M, b = _nr_system(c, mats)
    if M.shape[1] == 0:
        return np.zeros((3, 0)) if np.max(np.abs(b)) <= tol else None
    P, *_ = np.linalg.lstsq(M, b, rcond=None)
    if np.max(np.abs(M @ P - b)) > tol * max(1.0, float(np.max(np.abs(c)))):
        return None
    return P.reshape(3, len(mats))


@dataclass
class GoReport:
    is_go: bool
    is_naturally_reductive: bool
    independent_count: int
    has_null_homogeneous: bool
    witnesses: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    sampling_go: bool | None = None
    agreement: bool = True
    symmetric: bool = False

    def as_dict(self) -> dict:
        return {
            "is_go": self.is_go,
            "is_naturally_reductive": self.is_naturally_reductive,
            "independent_count": self.independent_count,
            "has_null_homogeneous": self.has_null_homogeneous,
            "sampling_go": self.sampling_go,
            "agreement": self.agreement,
            "witnesses": [w.as_dict() for w in self.witnesses],
            "failures": [[float(v) for v in f] for f in self.failures],
        }


def sample_directions(samples: int, seed: int) -> np.ndarray:
    """The frame vectors followed by seeded Gaussian directions."""
    rng = np.random.default_rng(seed)
    extra = rng.standard_normal((max(samples - 3, 0), 3))
    X = np.vstack([np.eye(3), extra])[:samples]
    return X / np.linalg.norm(X, axis=1)[:, None]


def sampling_check(instance, l_basis, samples: int = 500, tol: float = DEFAULT_TOL, seed: int = 0, keep: int = 5):
    """(all completable, witnesses, failures) over sampled tangent directions."""
    witnesses, failures = [], []
    for x in sample_directions(samples, seed):
        if is_geodesic_vector(instance, l_basis, x, tol) is None:
            failures.append(x)
        elif len(witnesses) < keep:
            witnesses.append(make_geodesic_vector(instance, l_basis, x, tol))
    return not failures, witnesses, failures[:keep]


def is_go(instance: AlgebraInstance, samples: int = 500, tol: float = DEFAULT_TOL, seed: int = 0,
          search_samples: int = 10_000) -> GoReport:
    """Classification answer plus a sampling cross-check."""
    if is_symmetric(instance):
        return GoReport(True, True, 3, True, symmetric=True)
    shortcut = go_by_classification(instance)
    l = compute_l(instance.constants)
    ok, witnesses, failures = sampling_check(instance, l, samples, tol, seed)
    nr = find_nr_split(instance, l) is not None
    if not instance.unimodular:
        count, null = count_independent(instance), has_null_homogeneous(instance)
        members = [f.member(1.0) for f in enumerate_families(instance) if not f.empty]
        witnesses = [w for w in (make_geodesic_vector(instance, (), x, tol) for x in members) if w is not None]
    elif ok:
        count, null = 3, True
    else:
        found = numeric_search(instance, l, search_samples, tol, seed)
        count = rank_of([g.xm for g in found], 1e-6)
        null = bool(found and null_directions(instance, l, tol=tol))
        witnesses = witnesses or found[:5]
    return GoReport(shortcut, nr, count, null, witnesses, failures, ok, ok == shortcut == nr)

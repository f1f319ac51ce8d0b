"""Levi-Civita connection and curvature of a left-invariant Lorentzian metric.

Left-invariant tensors have constant frame components, so every covariant
derivative reduces to a contraction with the connection coefficients.
Conventions:

* ``gamma[i, j, k]``: nabla_{e_i} e_j = sum_k gamma[i, j, k] e_k
* ``riemann[i, j, k, l]``: component l of R(e_i, e_j) e_k, where
  R(X, Y) = [nabla_X, nabla_Y] - nabla_[X, Y]
* ``ricci[j, k]`` = trace(Z -> R(Z, e_j) e_k)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import METRIC, StructureConstants

SYMMETRIC_TOL = 1e-8

EXACT_METRIC = np.array([[Fraction(int(v)) for v in row] for row in METRIC], dtype=object)


def table(c: StructureConstants, exact: bool = False) -> np.ndarray:
    """Structure constants as floats, or as a Fraction object array."""
    if not exact:
        return c.c
    if c.exact is None:
        raise ValueError("exact arithmetic requested but the structure constants are not rational")
    return np.array(c.exact, dtype=object)


def _metric_like(t: np.ndarray) -> np.ndarray:
    return EXACT_METRIC if t.dtype == object else METRIC


def levi_civita(c: StructureConstants, exact: bool = False) -> np.ndarray:
    """Koszul formula 2<nabla_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>.

    With ``exact=True`` the coefficients come back as Fractions.
    """
    cc = table(c, exact)
    g = _metric_like(cc)
    cl = np.einsum("ijm,ml->ijl", cc, g)  # <[e_i, e_j], e_l>
    low = (cl - np.einsum("jli->ijl", cl) + np.einsum("lij->ijl", cl)) / 2
    # low[i, j, l] = <nabla_{e_i} e_j, e_l>
    return np.einsum("ijl,lk->ijk", low, g)


def torsion_residual(c: StructureConstants, gamma: np.ndarray) -> float:
    return float(np.max(np.abs(gamma - gamma.transpose(1, 0, 2) - c.c)))


def metric_residual(gamma: np.ndarray) -> float:
    low = np.einsum("ijk,kl->ijl", gamma, METRIC)
    return float(np.max(np.abs(low + low.transpose(0, 2, 1))))


def riemann_tensor(c: StructureConstants, gamma: np.ndarray) -> np.ndarray:
    cc = table(c, gamma.dtype == object)
    t1 = np.einsum("jkm,imn->ijkn", gamma, gamma)
    t3 = np.einsum("ijm,mkn->ijkn", cc, gamma)
    return t1 - t1.transpose(1, 0, 2, 3) - t3


def lower_last(t: np.ndarray) -> np.ndarray:
    return np.tensordot(t, _metric_like(t), axes=([t.ndim - 1], [0]))


def covariant_derivative(tensor: np.ndarray, gamma: np.ndarray, order: int = 1) -> list[np.ndarray]:
    """Chain [nabla T, nabla^2 T, ...] of a covariant left-invariant tensor.

    The new derivative index is placed first:
    (nabla T)[a, i1, ..., ir] = -sum_s sum_m gamma[a, i_s, m] T[..., m, ...].
    """
    if order not in (1, 2):
        raise ValueError("only first and second covariant derivatives are supported")
    chain = []
    t = np.asarray(tensor)
    if t.dtype != object:
        t = t.astype(float)
    for _ in range(order):
        t = _nabla(t, gamma)
        chain.append(t)
    return chain


def _nabla(t: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    r = t.ndim
    out = np.zeros((3,) + t.shape, dtype=t.dtype)
    for s in range(r):
        # contract gamma[a, i_s, m] with slot s of t, then move a to front, i_s back
        term = np.tensordot(gamma, t, axes=([2], [s]))  # [a, i_s, rest...]
        order = [0] + [2 + q for q in range(s)] + [1] + [2 + q for q in range(s, r - 1)]
        out -= term.transpose(order)
    return out


@dataclass(frozen=True, eq=False)
class CurvatureData:
    riemann: np.ndarray
    ricci: np.ndarray
    ricci_operator: np.ndarray
    nabla_ricci: list = field(default_factory=list)
    nabla_riemann: np.ndarray | None = None

    @property
    def riemann_lowered(self) -> np.ndarray:
        return lower_last(self.riemann)


def ricci_from_riemann(riemann: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ric = np.einsum("zjkz->jk", riemann)
    q = _metric_like(ric) @ ric  # raise first index; the metric is its own inverse
    return ric, q


def curvature(
    c: StructureConstants, gamma: np.ndarray | None = None, order: int = 2, exact: bool = False
) -> CurvatureData:
    if gamma is None:
        gamma = levi_civita(c, exact)
    riem = riemann_tensor(c, gamma)
    ric, q = ricci_from_riemann(riem)
    chain = covariant_derivative(ric, gamma, order) if order else []
    nabla_r = covariant_derivative(lower_last(riem), gamma, 1)[0]
    return CurvatureData(riem, ric, q, chain, nabla_r)


def ricci(c: StructureConstants) -> np.ndarray:
    return ricci_from_riemann(riemann_tensor(c, levi_civita(c)))[0]


def bianchi_residual(riemann: np.ndarray) -> float:
    cyc = riemann + riemann.transpose(1, 2, 0, 3) + riemann.transpose(2, 0, 1, 3)
    return float(np.max(np.abs(cyc)))


def nabla_riemann_norm(c: StructureConstants) -> float:
    gamma = levi_civita(c)
    riem = lower_last(riemann_tensor(c, gamma))
    return float(np.max(np.abs(covariant_derivative(riem, gamma, 1)[0])))


def is_locally_symmetric(c: StructureConstants, tol: float = SYMMETRIC_TOL) -> bool:
    """max |nabla R| <= tol."""
    return nabla_riemann_norm(c) <= tol

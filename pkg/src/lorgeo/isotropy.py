"""Isotropy candidates: metric-skew endomorphisms and their filtration.

A ``SkewMap`` (a, b, c) acts as
    A e1 = b e2 + c e3,   A e2 = -b e1 + a e3,   A e3 = c e1 + a e2,
which is exactly the general endomorphism that is skew with respect to the
Lorentz form diag(1, 1, -1).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import StructureConstants, is_exact
from .connection import curvature
from .families import AlgebraInstance, FamilyTag, symmetric_locus

PIVOT_TOL = 1e-10


class SymmetricInstance(ValueError):
    """The metric is locally symmetric; the requested analysis does not apply."""


@dataclass(frozen=True)
class SkewMap:
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0

    @property
    def coords(self) -> tuple:
        return (self.a, self.b, self.c)

    def matrix(self) -> np.ndarray:
        """Column j holds the components of A e_j."""
        a, b, c = self.coords
        dtype = object if is_exact(a, b, c) else float
        return np.array([[0, -b, c], [b, 0, a], [c, a, 0]], dtype=dtype)

    def __call__(self, x) -> np.ndarray:
        return self.matrix().astype(float) @ np.asarray(x, dtype=float)


@dataclass(frozen=True)
class IsotropySubspace:
    basis: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self) -> np.ndarray:
        return np.array([[float(v) for v in m.coords] for m in self.basis]).reshape(-1, 3)

    def contains(self, other: "IsotropySubspace", tol: float = 1e-8) -> bool:
        """Every basis map of ``other`` lies in the span of this basis."""
        if other.dim == 0:
            return True
        if self.dim == 0:
            return False
        mine = self.coords()
        q, _ = np.linalg.qr(mine.T)
        for v in other.coords():
            v = v / np.linalg.norm(v)
            if np.linalg.norm(v - q @ (q.T @ v)) > tol:
                return False
        return True


def kernel(rows: Sequence[Sequence], ncols: int, tol: float = PIVOT_TOL) -> list[list]:
    """Null space basis of a small dense matrix by Gaussian elimination.

    Works in exact arithmetic when every entry is rational; otherwise uses
    partial pivoting and treats pivots below ``tol`` (relative to the largest
    entry) as zero.
    """
    exact = all(is_exact(v) for row in rows for v in row)
    m = [[Fraction(v) if exact else float(v) for v in row] for row in rows]
    scale = max([abs(v) for row in m for v in row], default=0)
    thresh = 0 if exact else tol * max(1.0, float(scale))
    pivots = []
    r = 0
    for col in range(ncols):
        if r >= len(m):
            break
        best = max(range(r, len(m)), key=lambda i: abs(m[i][col]))
        if abs(m[best][col]) <= thresh:
            if not exact:
                for i in range(r, len(m)):
                    m[i][col] = 0.0
            continue
        m[r], m[best] = m[best], m[r]
        p = m[r][col]
        m[r] = [v / p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    basis = []
    for free in (j for j in range(ncols) if j not in pivots):
        v = [zero] * ncols
        v[free] = one
        for row, pc in enumerate(pivots):
            v[pc] = -m[row][free]
        basis.append(v)
    return basis


def _unit_maps(exact: bool):
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    return [SkewMap(*(one if i == j else zero for j in range(3))) for i in range(3)]


def _derivation_defect(A: np.ndarray, cc: np.ndarray) -> list:
    """Components of A[e_i,e_j] - [A e_i, e_j] - [e_i, A e_j] for i < j."""
    out = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        lhs = A @ cc[i, j]
        br1 = sum(A[p, i] * cc[p, j] for p in range(3))
        br2 = sum(A[q, j] * cc[i, q] for q in range(3))
        out.extend(list(lhs - br1 - br2))
    return out


def derivation_residual(A: SkewMap, c: StructureConstants) -> float:
    """Max-norm of the derivation defect of A over the pairs (i, j)."""
    defect = _derivation_defect(A.matrix().astype(float), c.c)
    return float(max(abs(v) for v in defect))


def _system(c: StructureConstants, exact: bool) -> list[list]:
    cc = np.array(c.exact, dtype=object) if exact else c.c
    cols = [_derivation_defect(m.matrix(), cc) for m in _unit_maps(exact)]
    return [list(r) for r in zip(*cols)]


def compute_l(c: StructureConstants, exact: bool | None = None) -> IsotropySubspace:
    """Skew derivations of the bracket (the torsion-preserving maps)."""
    if exact is None:
        exact = c.exact is not None
    rows = _system(c, exact)
    return IsotropySubspace(tuple(SkewMap(*v) for v in kernel(rows, 3)))


def act_on_tensor(A: SkewMap, T: np.ndarray) -> np.ndarray:
    """(A.T)(X1, ..., Xr) = -sum_s T(..., A X_s, ...) for a covariant tensor T."""
    T = np.asarray(T)
    if not 2 <= T.ndim <= 6:
        raise ValueError(f"unsupported tensor rank {T.ndim}")
    M = A.matrix()
    if T.dtype != object:
        M = M.astype(float)
    out = np.zeros(T.shape, dtype=T.dtype)
    for s in range(T.ndim):
        # T(..., A e_i, ...) = sum_m M[m, i] T[..., m, ...]
        term = np.tensordot(T, M, axes=([s], [0]))  # slot s moved to the end
        out = out - np.moveaxis(term, -1, s)
    return out


def metric_tensor(exact: bool = False) -> np.ndarray:
    from .connection import EXACT_METRIC, METRIC

    return EXACT_METRIC if exact else METRIC


def _annihilator_rows(T: np.ndarray, exact: bool) -> list[list]:
    cols = [act_on_tensor(m, T).ravel() for m in _unit_maps(exact)]
    block = [list(r) for r in zip(*cols)]
    if not exact and block:
        s = max(1.0, max(abs(float(v)) for r in block for v in r))
        block = [[v / s for v in r] for r in block]
    return block


def _annihilator(tensors: Sequence[np.ndarray], exact: bool) -> IsotropySubspace:
    rows = [r for T in tensors for r in _annihilator_rows(T, exact)]
    return IsotropySubspace(tuple(SkewMap(*v) for v in kernel(rows, 3)))


def _normalized(c: StructureConstants) -> StructureConstants:
    s = float(np.max(np.abs(c.c)))
    return c if s == 0 else StructureConstants(c.c / s)


def compute_h_chain(instance, k_max: int = 2, exact: bool | None = None) -> list[IsotropySubspace]:
    """[h_0, ..., h_kmax]: skew maps annihilating rho, nabla rho, ..., nabla^k rho."""
    c = instance.constants if isinstance(instance, AlgebraInstance) else instance
    if exact is None:
        exact = c.exact is not None
    if not exact:
        # kernels are invariant under rescaling the bracket
        c = _normalized(c)
    data = curvature(c, order=max(k_max, 1), exact=exact)
    tensors = [data.ricci] + list(data.nabla_ricci[:k_max])
    chain, rows = [], []
    for T in tensors:
        rows.extend(_annihilator_rows(T, exact))
        chain.append(IsotropySubspace(tuple(SkewMap(*v) for v in kernel(rows, 3))))
    return chain


def first_stable_index(instance, k_max: int = 2) -> int | None:
    """Least k with h_k = l, or None if none up to k_max."""
    l = compute_l(instance.constants)
    for k, h in enumerate(compute_h_chain(instance, k_max)):
        if h.dim == l.dim:
            return k
    return None


def stated_stable_index(instance: AlgebraInstance) -> int:
    """Least k with h_k = l according to the stated case table
    (non-unimodular, non-symmetric instances)."""
    a, b, g, d = instance.params.as_tuple()
    tag = instance.tag
    if tag is FamilyTag.G5:
        if (a == 0 and b == 0 and g != 0 and d != 0) or (g == 0 and d == 0 and a != 0 and b != 0):
            return 2
        return 1 if b * d != 0 else 0
    if tag is FamilyTag.G6:
        return 2 if b * (b * b - a * a) != 0 else 0
    if tag is FamilyTag.G7:
        if a == 0 and b == 0 and g != 0:
            return 2
        return 1 if g == 0 and a * d * (a * a - d * d) != 0 else 0
    raise ValueError(f"no stated filtration index for {tag.value}")


def isotropy_algebra(instance: AlgebraInstance) -> IsotropySubspace:
    """The derivation algebra l used as isotropy of a non-symmetric instance.

    l is always contained in the true isotropy algebra; equality is
    certified when some h_k (k <= 2) collapses to l, see first_stable_index.
    """
    if not instance.unimodular and symmetric_locus(instance.tag, instance.params) is not None:
        raise SymmetricInstance(f"{instance.label()} is locally symmetric")
    return compute_l(instance.constants)

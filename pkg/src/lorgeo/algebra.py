"""Three-dimensional Lie algebras in a pseudo-orthonormal frame {e1, e2, e3}.

The metric is fixed to diag(+1, +1, -1): e3 is the timelike frame vector.
Structure constants are stored as ``c[i, j, k]`` with
``[e_i, e_j] = sum_k c[i, j, k] e_k`` (zero-based indices).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

METRIC = np.diag([1.0, 1.0, -1.0])
METRIC.flags.writeable = False
SIGNS = (1, 1, -1)

DEFAULT_TOL = 1e-9
BOUNDARY_TOL = 1e-10


class BoundaryAmbiguous(ValueError):
    """A float quantity sits too close to zero to pick a branch reliably."""


def is_exact(*values) -> bool:
    """True when every value is an int or a Fraction (and not a bool or float)."""
    return all(isinstance(v, Rational) and not isinstance(v, bool) for v in values)


def sign_of(value, tol: float = BOUNDARY_TOL) -> int:
    """Sign of ``value`` for branch decisions.

    Rational inputs are decided exactly. A float that is exactly zero counts as
    zero; a nonzero float with ``|value| <= tol`` raises BoundaryAmbiguous.
    """
    if is_exact(value):
        return (value > 0) - (value < 0)
    value = float(value)
    if value == 0.0:
        return 0
    if abs(value) <= tol:
        raise BoundaryAmbiguous(f"value {value!r} is within {tol:g} of zero")
    return 1 if value > 0 else -1


def as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected three frame components, got shape {v.shape}")
    return v


def inner(x, y) -> float:
    """Lorentzian inner product x1*y1 + x2*y2 - x3*y3."""
    return float(x[0] * y[0] + x[1] * y[1] - x[2] * y[2])


def lower(x) -> np.ndarray:
    """Metric dual of x: the components <x, e_i>."""
    return METRIC @ as_vector(x)


def causal_character(x, tol: float = DEFAULT_TOL) -> str:
    """Return 'zero', 'null', 'spacelike' or 'timelike'."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    v = as_vector(x)
    if np.all(np.abs(v) <= tol):
        return "zero"
    q = inner(v, v)
    if abs(q) <= tol:
        return "null"
    return "spacelike" if q > 0 else "timelike"


@dataclass(frozen=True, eq=False)
class StructureConstants:
    """Antisymmetric bracket table of a 3D Lie algebra.

    ``exact`` optionally carries the same table as nested tuples of Fractions
    so that linear-algebra predicates can run in rational arithmetic.
    """

    c: np.ndarray
    exact: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        arr = np.array(self.c, dtype=float)
        if arr.shape != (3, 3, 3):
            raise ValueError(f"structure constants must have shape (3, 3, 3), got {arr.shape}")
        if not np.allclose(arr, -arr.transpose(1, 0, 2), atol=0.0, rtol=0.0):
            raise ValueError("structure constants are not antisymmetric in the first two indices")
        arr.flags.writeable = False
        object.__setattr__(self, "c", arr)

    @classmethod
    def from_brackets(cls, brackets: dict[tuple[int, int], Sequence]) -> "StructureConstants":
        """Build from ``{(i, j): [c1, c2, c3]}`` with zero-based i < j.

        Entries may be ints, Fractions or floats; an exact table is kept when
        every entry is rational.
        """
        table = [[[0] * 3 for _ in range(3)] for _ in range(3)]
        for (i, j), comps in brackets.items():
            if i == j:
                raise ValueError("diagonal brackets vanish by antisymmetry")
            for k, v in enumerate(comps):
                table[i][j][k] = v
                table[j][i][k] = -v
        flat = [v for plane in table for row in plane for v in row]
        exact = None
        if is_exact(*flat):
            exact = tuple(tuple(tuple(Fraction(v) for v in row) for row in plane) for plane in table)
        return cls(np.array(table, dtype=float), exact)

    @classmethod
    def zero(cls) -> "StructureConstants":
        return cls.from_brackets({})

    def bracket(self, x, y) -> np.ndarray:
        return bracket(self, x, y)

    def ad(self, x) -> np.ndarray:
        """Matrix of ad_x; column j holds the components of [x, e_j]."""
        return np.einsum("ijk,i->kj", self.c, as_vector(x))

    def perturbed(self, i: int, j: int, k: int, eps: float) -> "StructureConstants":
        """Copy with c[i,j,k] (and its antisymmetric partner) shifted by eps."""
        arr = self.c.copy()
        arr[i, j, k] += eps
        arr[j, i, k] -= eps
        return StructureConstants(arr)


def bracket(c: StructureConstants, x, y) -> np.ndarray:
    return np.einsum("ijk,i,j->k", c.c, as_vector(x), as_vector(y))


def jacobi_residual(c: StructureConstants) -> float:
    """Max-norm of the cyclic sum [e1,[e2,e3]] + [e2,[e3,e1]] + [e3,[e1,e2]]."""
    e = np.eye(3)
    total = np.zeros(3)
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        total += bracket(c, e[i], bracket(c, e[j], e[k]))
    return float(np.max(np.abs(total)))


def ad_traces(c: StructureConstants) -> list:
    """tr(ad_{e_i}) for i = 1, 2, 3, exact when the table is rational."""
    if c.exact is not None:
        return [sum(c.exact[i][j][j] for j in range(3)) for i in range(3)]
    return [float(np.trace(c.ad(np.eye(3)[i]))) for i in range(3)]


def is_unimodular(c: StructureConstants, tol: float = DEFAULT_TOL) -> bool:
    traces = ad_traces(c)
    if c.exact is not None:
        return all(t == 0 for t in traces)
    return all(abs(t) <= tol for t in traces)


def frame_vector(components: Iterable[float]) -> np.ndarray:
    return as_vector(list(components))

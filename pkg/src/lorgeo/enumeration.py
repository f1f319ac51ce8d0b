"""Closed-form geodesic vectors of the non-unimodular families g5, g6, g7.

Each row of the classification becomes a ``GeodesicFamily`` whose members
form finitely many lines or one plane through the origin. Sign decisions
on discriminants are exact for rational parameters; float parameters close
to a boundary raise ``BoundaryAmbiguous``.

Two versions of the headline predicates are provided. ``count_independent``
and ``has_null_homogeneous`` are derived from the enumerated rows, while
``stated_count`` and ``stated_has_null`` encode the stated case lists.
They differ on a few loci (see ``predicate_discrepancies``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import BoundaryAmbiguous, causal_character, is_exact, sign_of
from .families import AlgebraInstance, FamilyTag, invariant_D, symmetric_locus
from .isotropy import SymmetricInstance

RANK_TOL = 1e-9
NULL_TOL = 1e-9


class UnsupportedFamily(ValueError):
    """Closed forms are only available for g5, g6 and g7."""


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def _orthonormal(u, v) -> np.ndarray:
    q, _ = np.linalg.qr(np.array([u, v], dtype=float).T)
    return q.T


def binary_roots(a, b, c) -> list[tuple[float, float]] | None:
    """Real projective roots (s, t) of a s^2 + b s t + c t^2 = 0.

    Returns None when the form vanishes identically. A double root is
    returned once.
    """
    if all(sign_of(x) == 0 for x in (a, b, c)):
        return None
    disc = b * b - 4 * a * c
    sd = sign_of(disc)
    if sd < 0:
        return []
    af, bf, cf = float(a), float(b), float(c)
    if sign_of(a) == 0:
        # t (b s + c t) = 0
        roots = [(1.0, 0.0)]
        if sign_of(b) != 0:
            roots.append((-cf, bf))
        return roots
    if sd == 0:
        return [(-bf, 2 * af)]
    r = math.sqrt(float(disc))
    q = -0.5 * (bf + math.copysign(r, bf if bf != 0 else 1.0))
    # stable pair: s/t = q/a and c/q
    return [(q, af), (cf, q)]


@dataclass(frozen=True)
class GeodesicFamily:
    """One row of the geodesic-vector table, resolved for given parameters.

    kind: "axis", "plane_conic", "span" or "null_cone".
    constraint: coefficients (a, b, c) of the defining binary quadratic, or ().
    lines: unit generators of the member lines; plane: orthonormal basis of a
    member plane (shape (2, 3)) or None.
    """

    kind: str
    label: str
    constraint: tuple = ()
    lines: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))
    plane: np.ndarray | None = None

    @property
    def empty(self) -> bool:
        return self.plane is None and len(self.lines) == 0

    def generators(self) -> np.ndarray:
        parts = [np.asarray(self.lines).reshape(-1, 3)]
        if self.plane is not None:
            parts.append(self.plane)
        return np.vstack(parts)

    def has_null(self, tol: float = NULL_TOL) -> bool:
        if self.plane is not None:
            u, v = self.plane
            G = np.array([[_q(u, u), _q(u, v)], [_q(u, v), _q(v, v)]])
            if np.linalg.det(G) <= tol:
                return True
        return any(causal_character(x, tol) == "null" for x in self.lines)

    def member(self, s: float, t: float = 0.0, which: int = 0) -> np.ndarray:
        """s times line ``which``, or s u + t v on the member plane."""
        if self.plane is not None:
            return s * self.plane[0] + t * self.plane[1]
        return s * np.asarray(self.lines[which])

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n random nonzero members (empty array for an empty row)."""
        if self.empty:
            return np.zeros((0, 3))
        scale = rng.uniform(0.2, 5.0, n) * rng.choice([-1.0, 1.0], n)
        if self.plane is not None:
            phi = rng.uniform(0, 2 * math.pi, n)
            return scale[:, None] * (np.cos(phi)[:, None] * self.plane[0] + np.sin(phi)[:, None] * self.plane[1])
        idx = rng.integers(0, len(self.lines), n)
        return scale[:, None] * np.asarray(self.lines)[idx]

    def distance(self, U) -> np.ndarray:
        """Distance from unit directions U (up to sign) to the member set."""
        U = np.atleast_2d(np.asarray(U, dtype=float))
        U = U / np.linalg.norm(U, axis=1)[:, None]
        best = np.full(len(U), np.inf)
        if self.plane is not None:
            best = np.linalg.norm(U - (U @ self.plane.T) @ self.plane, axis=1)
        for x in self.lines:
            gap = np.minimum(np.linalg.norm(U - x, axis=1), np.linalg.norm(U + x, axis=1))
            best = np.minimum(best, gap)
        return best

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "label": self.label,
            "constraint": [_num(v) for v in self.constraint],
            "lines": [[float(v) for v in x] for x in self.lines],
            "plane": None if self.plane is None else [[float(v) for v in x] for x in self.plane],
        }


def _num(v):
    return v if is_exact(v) else float(v)


def _q(x, y) -> float:
    return float(x[0] * y[0] + x[1] * y[1] - x[2] * y[2])


def _lines(vectors) -> np.ndarray:
    if not vectors:
        return np.zeros((0, 3))
    return np.array([_unit(v) for v in vectors])


def _conic_row(label, coeffs, u, v) -> GeodesicFamily:
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    roots = binary_roots(*coeffs)
    if roots is None:
        return GeodesicFamily("plane_conic", label, tuple(coeffs), plane=_orthonormal(u, v))
    return GeodesicFamily("plane_conic", label, tuple(coeffs), _lines([s * u + t * v for s, t in roots]))


def _require_table(instance: AlgebraInstance):
    if instance.tag.unimodular:
        raise UnsupportedFamily(f"{instance.tag.value}: closed forms only for g5, g6, g7")
    if symmetric_locus(instance.tag, instance.params) is not None:
        raise SymmetricInstance(f"{instance.label()} is locally symmetric")


def _g5(a, b, g, d) -> list[GeodesicFamily]:
    rows = [
        GeodesicFamily("axis", "x3 e3", (), _lines([(0, 0, 1)])),
        _conic_row("x1 e1 + x2 e2 with alpha x1^2 + (beta+gamma) x1 x2 + delta x2^2 = 0",
                   (a, b + g, d), (1, 0, 0), (0, 1, 0)),
    ]
    if sign_of(a) == 0 and sign_of(b) == 0:
        rows.append(GeodesicFamily("span", "x1 (delta e1 - gamma e2) + x3 e3", (),
                                   plane=_orthonormal((d, -g, 0), (0, 0, 1))))
    if sign_of(g) == 0 and sign_of(d) == 0:
        rows.append(GeodesicFamily("span", "x2 (-beta e1 + alpha e2) + x3 e3", (),
                                   plane=_orthonormal((-b, a, 0), (0, 0, 1))))
    coeffs = (g, d - a, -b)
    roots = binary_roots(*coeffs) or []
    null = []
    for s, t in roots:
        w = _unit((s, t, 0.0))
        null += [(w[0], w[1], 1.0), (w[0], w[1], -1.0)]
    rows.append(GeodesicFamily(
        "null_cone", "x1 e1 + x2 e2 +- sqrt(x1^2 + x2^2) e3 with gamma x1^2 + (delta-alpha) x1 x2 - beta x2^2 = 0",
        coeffs, _lines(null)))
    return rows


def _g6(a, b, g, d) -> list[GeodesicFamily]:
    rows = [
        GeodesicFamily("axis", "x1 e1", (), _lines([(1, 0, 0)])),
        _conic_row("x2 e2 + x3 e3 with alpha x2^2 + (gamma-beta) x2 x3 - delta x3^2 = 0",
                   (a, g - b, -d), (0, 1, 0), (0, 0, 1)),
    ]
    if sign_of(a) == 0 and sign_of(b) == 0:
        rows.append(GeodesicFamily("span", "x1 e1 + x2 (delta e2 + gamma e3)", (),
                                   plane=_orthonormal((1, 0, 0), (0, d, g))))
    if sign_of(g) == 0 and sign_of(d) == 0:
        rows.append(GeodesicFamily("span", "x1 e1 + x3 (beta e2 + alpha e3)", (),
                                   plane=_orthonormal((1, 0, 0), (0, b, a))))
    coeffs = (g, a - d, -b)
    roots = binary_roots(*coeffs) or []
    null = []
    for s, t in roots:
        # (x2, x3) = (s, t); the null lift needs x1^2 = x3^2 - x2^2 >= 0
        if sign_of(g + (a - d) - b) == 0 and abs(s - t) <= 1e-12 * max(abs(s), abs(t)):
            null.append((0.0, 1.0, 1.0))
            continue
        if sign_of(g - (a - d) - b) == 0 and abs(s + t) <= 1e-12 * max(abs(s), abs(t)):
            null.append((0.0, 1.0, -1.0))
            continue
        w = _unit((s, t))
        lift = w[1] ** 2 - w[0] ** 2
        if lift > 0:
            r = math.sqrt(lift)
            null += [(r, w[0], w[1]), (-r, w[0], w[1])]
    rows.append(GeodesicFamily(
        "null_cone", "x1 e1 + x2 e2 + x3 e3 null with gamma x2^2 + (alpha-delta) x2 x3 - beta x3^2 = 0",
        coeffs, _lines(null)))
    return rows


def _g7(a, b, g, d) -> list[GeodesicFamily]:
    if sign_of(a) == 0:
        rows = [
            GeodesicFamily("axis", "x1 e1", (), _lines([(1, 0, 0)])),
            GeodesicFamily("axis", "x2 (e2 + e3)", (), _lines([(0, 1, 1)])),
        ]
        if sign_of(b) == 0:
            rows.append(GeodesicFamily("span", "-(delta/gamma)(x2 - x3) e1 + x2 e2 + x3 e3", (),
                                       plane=_orthonormal((-d / g, 1, 0), (d / g, 0, 1))))
        u = np.array([float((b + g) / d), 1.0, 0.0])
        v = np.array([float(-(b - g) / d), 0.0, 1.0])
        coeffs = ((b + g) ** 2 + d * d, -2 * (b * b - g * g), (b - g) ** 2 - d * d)
        roots = binary_roots(*coeffs)
        rows.append(GeodesicFamily(
            "null_cone",
            "((beta+gamma)/delta x2 - (beta-gamma)/delta x3) e1 + x2 e2 + x3 e3 with "
            "[(beta+gamma)^2 + delta^2] x2^2 - 2(beta^2 - gamma^2) x2 x3 + [(beta-gamma)^2 - delta^2] x3^2 = 0",
            coeffs, _lines([s * u + t * v for s, t in (roots or [])])))
        return rows
    rows = [GeodesicFamily("axis", "x2 (e2 + e3)", (), _lines([(0, 1, 1)]))]
    if sign_of(b) == 0:
        rows.append(GeodesicFamily("axis", "x2 (e2 - e3)", (), _lines([(0, 1, -1)])))
    m = a - d
    rows.append(GeodesicFamily(
        "axis", "x3 {2 beta (alpha-delta) e1 + [beta^2 - (alpha-delta)^2] e2 + [beta^2 + (alpha-delta)^2] e3}",
        (), _lines([(float(2 * b * m), float(b * b - m * m), float(b * b + m * m))])))
    return rows


def enumerate_families(instance: AlgebraInstance) -> list[GeodesicFamily]:
    """All geodesic-vector rows that apply to a non-symmetric g5, g6 or g7."""
    _require_table(instance)
    p = instance.params.as_tuple()
    return {FamilyTag.G5: _g5, FamilyTag.G6: _g6, FamilyTag.G7: _g7}[instance.tag](*p)


def family_generators(families) -> np.ndarray:
    gens = [f.generators() for f in families if not f.empty]
    return np.vstack(gens) if gens else np.zeros((0, 3))


def rank_of(vectors, rel_tol: float = RANK_TOL) -> int:
    arr = np.asarray(vectors, dtype=float).reshape(-1, 3)
    if len(arr) == 0:
        return 0
    arr = arr / np.linalg.norm(arr, axis=1)[:, None]
    s = np.linalg.svd(arr, compute_uv=False)
    return int(np.sum(s > rel_tol * s[0]))


def count_independent(instance: AlgebraInstance) -> int:
    """Largest number of linearly independent geodesic vectors (from the rows)."""
    return rank_of(family_generators(enumerate_families(instance)))


def has_null_homogeneous(instance: AlgebraInstance) -> bool:
    """Whether some enumerated row contains a null geodesic vector."""
    return any(f.has_null() for f in enumerate_families(instance))


def _pair_nonzero(x, y) -> bool:
    return sign_of(x) != 0 or sign_of(y) != 0


def stated_count(instance: AlgebraInstance) -> int:
    """Independent-geodesic count following the stated case list."""
    _require_table(instance)
    a, b, g, d = instance.params.as_tuple()
    tag = instance.tag
    if tag in (FamilyTag.G5, FamilyTag.G6):
        cross = (b + g) ** 2 - 4 * a * d if tag is FamilyTag.G5 else (b - g) ** 2 + 4 * a * d
        if _pair_nonzero(a, b) and _pair_nonzero(g, d) and sign_of((a - d) ** 2 + 4 * b * g) < 0:
            sc = sign_of(cross)
            if sc == 0:
                return 2
            if sc < 0:
                return 1
        return 3
    if sign_of(a) == 0:
        return 3 if sign_of(b) == 0 or sign_of(invariant_D(instance.params) - 1) <= 0 else 2
    return 3 if sign_of(b) == 0 else 2


def stated_has_null(instance: AlgebraInstance) -> bool:
    """Null homogeneous geodesic existence following the stated case list."""
    _require_table(instance)
    a, b, g, d = instance.params.as_tuple()
    if instance.tag is FamilyTag.G7:
        return True
    base = _pair_nonzero(a, b) and _pair_nonzero(g, d) and sign_of((a - d) ** 2 + 4 * b * g) < 0
    if instance.tag is FamilyTag.G5:
        return not base
    return not (base and sign_of((b - g) ** 2 + 4 * a * d) < 0)


def predicate_discrepancies(instance: AlgebraInstance) -> list[str]:
    """Names of headline predicates where the rows and the case list disagree."""
    out = []
    if count_independent(instance) != stated_count(instance):
        out.append("independent_geodesic_count")
    if has_null_homogeneous(instance) != stated_has_null(instance):
        out.append("has_null_homogeneous")
    return out


__all__ = [
    "BoundaryAmbiguous",
    "GeodesicFamily",
    "UnsupportedFamily",
    "binary_roots",
    "count_independent",
    "enumerate_families",
    "family_generators",
    "has_null_homogeneous",
    "predicate_discrepancies",
    "rank_of",
    "stated_count",
    "stated_has_null",
]

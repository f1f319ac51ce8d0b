"""Seeded random rational parameter tuples for every family and case branch.

All samplers return exact ``FamilyParams`` (Fractions), redrawing until the
instance is valid, non-symmetric (unless asked otherwise) and inside the
requested branch. Branches whose defining conditions are incompatible with
the family constraints raise ``EmptyBranch``.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .families import (AlgebraInstance, ConstraintViolation, FamilyParams, FamilyTag, build_family,
                       invariant_D, symmetric_locus)

MAX_DRAWS = 10_000


class EmptyBranch(ValueError):
    """No parameter tuple satisfies the branch conditions."""


def rational(rng: np.random.Generator, lo: int = -9, hi: int = 9, den: int = 4, nonzero: bool = False) -> Fraction:
    while True:
        f = Fraction(int(rng.integers(lo * den, hi * den + 1)), int(rng.integers(1, den + 1)))
        if f != 0 or not nonzero:
            return f


def _disc5(p):
    a, b, g, d = p.as_tuple()
    return (a - d) ** 2 + 4 * b * g, (b + g) ** 2 - 4 * a * d


def _disc6(p):
    a, b, g, d = p.as_tuple()
    return (a - d) ** 2 + 4 * b * g, (b - g) ** 2 + 4 * a * d


def _g5_draw(rng, branch):
    if branch == "alpha_beta_zero":
        return FamilyParams(0, 0, rational(rng), rational(rng, nonzero=True))
    if branch == "gamma_delta_zero":
        return FamilyParams(rational(rng, nonzero=True), rational(rng), 0, 0)
    a = rational(rng, nonzero=True)
    if branch in ("case_i", "eig_degenerate"):
        # t = m^2 with m in (sqrt2-1, sqrt2+1): one discriminant vanishes, the other is negative
        while True:
            m = Fraction(int(rng.integers(42, 241)), 100)
            if m != 1:
                break
        t = m * m
        if branch == "case_i":
            b = 2 * m * a / (1 - t)
        else:
            b = a * (1 - t) / (2 * m)
        return FamilyParams(a, b, -t * b, t * a)
    b = rational(rng)
    t = rational(rng, -4, 4, 8)
    return FamilyParams(a, b, -t * b, t * a)


def _g6_draw(rng, branch):
    if branch == "alpha_beta_zero":
        return FamilyParams(0, 0, rational(rng), rational(rng, nonzero=True))
    if branch == "gamma_delta_zero":
        return FamilyParams(rational(rng, nonzero=True), rational(rng), 0, 0)
    # with (gamma, delta) = t (beta, alpha) the product of the two discriminant
    # conditions would need (1 + t)^2 < 0 (resp. = 0 with t = -1 and E = 0)
    if branch == "case_i":
        raise EmptyBranch("g6: (beta-gamma)^2 + 4 alpha delta = 0 forces (alpha-delta)^2 + 4 beta gamma >= 0")
    if branch == "case_ii":
        raise EmptyBranch("g6: both discriminants negative is incompatible with alpha gamma = beta delta")
    a = rational(rng, nonzero=True)
    b = rational(rng)
    t = rational(rng, -4, 4, 8)
    return FamilyParams(a, b, t * b, t * a)


def _g7_draw(rng, branch):
    if branch.startswith("A"):
        g = rational(rng, nonzero=True)
        d = rational(rng, nonzero=True)
        if branch == "A_beta_zero":
            return FamilyParams(0, 0, g, d)
        return FamilyParams(0, rational(rng, nonzero=True), g, d)
    a = rational(rng, nonzero=True)
    d = rational(rng, nonzero=True)
    b = 0 if branch == "B_beta_zero" else rational(rng, nonzero=True)
    return FamilyParams(a, b, 0, d)


def _in_branch(tag: FamilyTag, branch: str, p: FamilyParams) -> bool:
    a, b, g, d = p.as_tuple()
    if tag is FamilyTag.G5 or tag is FamilyTag.G6:
        E, C = _disc5(p) if tag is FamilyTag.G5 else _disc6(p)
        pairs = (a, b) != (0, 0) and (g, d) != (0, 0)
        if branch == "generic":
            return not (pairs and E < 0 and C <= 0)
        if branch == "case_i":
            return pairs and E < 0 and C == 0
        if branch == "case_ii":
            return pairs and E < 0 and C < 0
        if branch == "eig_degenerate":
            return pairs and E == 0 and C < 0
        return True
    if branch == "A_beta_zero":
        return b == 0
    if branch == "A_D_le_1":
        return b != 0 and invariant_D(p) <= 1
    if branch == "A_D_gt_1":
        return b != 0 and invariant_D(p) > 1
    return True


BRANCHES = {
    FamilyTag.G5: ("generic", "case_i", "case_ii", "eig_degenerate", "alpha_beta_zero", "gamma_delta_zero", "any"),
    FamilyTag.G6: ("generic", "case_i", "case_ii", "alpha_beta_zero", "gamma_delta_zero", "any"),
    FamilyTag.G7: ("A_beta_zero", "A_D_le_1", "A_D_gt_1", "B_beta_zero", "B_beta_nonzero", "A", "B"),
}

_DRAW = {FamilyTag.G5: _g5_draw, FamilyTag.G6: _g6_draw, FamilyTag.G7: _g7_draw}


def _concrete(tag: FamilyTag, branch: str, rng: np.random.Generator) -> str:
    if tag is FamilyTag.G7 and branch in ("A", "B"):
        return branch + ("_beta_zero" if rng.random() < 0.2 else ("_D_le_1" if branch == "A" else "_beta_nonzero"))
    if branch == "any":
        empty = ("case_i", "case_ii") if tag is FamilyTag.G6 else ()
        options = [b for b in BRANCHES[tag] if b not in ("any", "A", "B", *empty)]
        if tag is FamilyTag.G7:
            options.remove("A_D_le_1")
            options.remove("A_D_gt_1")
            options.append("A_any")
        return options[int(rng.integers(0, len(options)))]
    return branch


def random_instance(tag, rng: np.random.Generator, branch: str = "any", symmetric: bool = False) -> AlgebraInstance:
    """A valid instance of a non-unimodular family inside ``branch``.

    ``symmetric=False`` rejects symmetric tuples; ``True`` keeps only them
    (the branch is then ignored).
    """
    tag = FamilyTag.parse(tag)
    if tag not in _DRAW:
        return random_unimodular(tag, rng)
    if not symmetric and branch not in BRANCHES[tag]:
        raise ValueError(f"unknown branch {branch!r} for {tag.value}")
    for _ in range(MAX_DRAWS):
        concrete = None if symmetric else _concrete(tag, branch, rng)
        p = random_symmetric_params(tag, rng) if symmetric else _DRAW[tag](rng, concrete)
        try:
            inst = build_family(tag, p)
        except ConstraintViolation:
            continue
        if (symmetric_locus(tag, p) is not None) != symmetric:
            continue
        if symmetric or _in_branch(tag, concrete, p):
            return inst
    raise EmptyBranch(f"no tuple found for {tag.value} branch {branch}")


def random_symmetric_params(tag: FamilyTag, rng: np.random.Generator) -> FamilyParams:
    """A random point on one of the symmetric loci of g5, g6 or g7."""
    r = lambda: rational(rng, nonzero=True)  # noqa: E731
    pick = int(rng.integers(0, 4))
    if tag is FamilyTag.G5:
        a, b = r(), r()
        return [FamilyParams(0, 0, 0, a), FamilyParams(a, 0, 0, 0), FamilyParams(a, b, -b, a), FamilyParams(a, b, -b, a)][pick]
    if tag is FamilyTag.G6:
        a, b, d = r(), r(), r()
        e = 1 if rng.random() < 0.5 else -1
        return [FamilyParams(0, 0, 0, a), FamilyParams(a, 0, 0, 0), FamilyParams(a, b, b, a),
                FamilyParams(a, e * a, e * d, d)][pick]
    a, b, d = r(), r(), r()
    return [FamilyParams(0, b, 0, d), FamilyParams(a, b, 0, 0), FamilyParams(a, b, 0, a), FamilyParams(0, b, 0, d)][pick]


def random_unimodular(tag, rng: np.random.Generator) -> AlgebraInstance:
    tag = FamilyTag.parse(tag)
    for _ in range(MAX_DRAWS):
        vals = [rational(rng) for _ in range(3)]
        kw = dict(zip(("alpha", "beta", "gamma"), vals))
        if tag is FamilyTag.G4:
            kw.pop("gamma")
            kw["epsilon"] = 1 if rng.random() < 0.5 else -1
        elif tag is FamilyTag.G1:
            kw.pop("gamma")
        try:
            return build_family(tag, **kw)
        except ConstraintViolation:
            continue
    raise EmptyBranch(f"no tuple found for {tag.value}")


def random_any(tag, rng: np.random.Generator) -> AlgebraInstance:
    """Valid instance of any family, symmetric or not (non-unimodular: 1 in 5 symmetric)."""
    tag = FamilyTag.parse(tag)
    if tag.unimodular:
        return random_unimodular(tag, rng)
    return random_instance(tag, rng, "any" if tag is not FamilyTag.G7 else ("A" if rng.random() < 0.5 else "B"),
                           symmetric=rng.random() < 0.2)

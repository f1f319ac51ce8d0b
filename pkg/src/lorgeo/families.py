"""Canonical Lorentzian Lie algebras g1..g7 and their parameter predicates."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

from .algebra import StructureConstants, is_exact, jacobi_residual

FLOAT_CONSTRAINT_TOL = 1e-12
JACOBI_TOL = 1e-12

SL2 = "O(1,2) or SL(2,R)"
SU2 = "SO(3) or SU(2)"
E2 = "E(2)"
E11 = "E(1,1)"
H3 = "H3"
ABELIAN = "R^3"
NON_UNIMODULAR = "non-unimodular solvable"


class ConstraintViolation(ValueError):
    """Parameters violate the defining relations of a family."""

    def __init__(self, relation: str, message: str | None = None):
        self.relation = relation
        super().__init__(message or f"constraint violated: {relation}")


class FamilyTag(str, enum.Enum):
    G1 = "g1"
    G2 = "g2"
    G3 = "g3"
    G4 = "g4"
    G5 = "g5"
    G6 = "g6"
    G7 = "g7"

    @classmethod
    def parse(cls, value) -> "FamilyTag":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"unknown family {value!r}; expected one of g1..g7") from None

    @property
    def unimodular(self) -> bool:
        return self in (FamilyTag.G1, FamilyTag.G2, FamilyTag.G3, FamilyTag.G4)

    @property
    def required(self) -> tuple[str, ...]:
        return _REQUIRED[self]


_REQUIRED = {
    FamilyTag.G1: ("alpha", "beta"),
    FamilyTag.G2: ("alpha", "beta", "gamma"),
    FamilyTag.G3: ("alpha", "beta", "gamma"),
    FamilyTag.G4: ("alpha", "beta", "epsilon"),
    FamilyTag.G5: ("alpha", "beta", "gamma", "delta"),
    FamilyTag.G6: ("alpha", "beta", "gamma", "delta"),
    FamilyTag.G7: ("alpha", "beta", "gamma", "delta"),
}


def _zero(x) -> bool:
    if is_exact(x):
        return x == 0
    return abs(float(x)) <= FLOAT_CONSTRAINT_TOL


@dataclass(frozen=True)
class FamilyParams:
    alpha: Any = 0
    beta: Any = 0
    gamma: Any = 0
    delta: Any = 0
    epsilon: int | None = None

    @property
    def exact(self) -> bool:
        return is_exact(self.alpha, self.beta, self.gamma, self.delta)

    def as_tuple(self):
        return self.alpha, self.beta, self.gamma, self.delta

    def scaled(self, s) -> "FamilyParams":
        return FamilyParams(s * self.alpha, s * self.beta, s * self.gamma, s * self.delta, self.epsilon)

    def to_float(self) -> "FamilyParams":
        return FamilyParams(*(float(v) for v in self.as_tuple()), self.epsilon)


def _brackets(tag: FamilyTag, p: FamilyParams) -> dict:
    a, b, g, d = p.as_tuple()
    if tag is FamilyTag.G1:
        return {(0, 1): [a, 0, -b], (0, 2): [-a, -b, 0], (1, 2): [b, a, a]}
    if tag is FamilyTag.G2:
        # [e1,e3] = -beta e2 - gamma e3: the printed "+gamma e3" breaks Jacobi.
        return {(0, 1): [0, g, -b], (0, 2): [0, -b, -g], (1, 2): [a, 0, 0]}
    if tag is FamilyTag.G3:
        return {(0, 1): [0, 0, -g], (0, 2): [0, -b, 0], (1, 2): [a, 0, 0]}
    if tag is FamilyTag.G4:
        e = p.epsilon
        return {(0, 1): [0, -1, 2 * e - b], (0, 2): [0, -b, 1], (1, 2): [a, 0, 0]}
    if tag is FamilyTag.G5:
        return {(0, 1): [0, 0, 0], (0, 2): [a, b, 0], (1, 2): [g, d, 0]}
    if tag is FamilyTag.G6:
        return {(0, 1): [0, a, b], (0, 2): [0, g, d], (1, 2): [0, 0, 0]}
    return {(0, 1): [-a, -b, -b], (0, 2): [a, b, b], (1, 2): [g, d, d]}


def validate(tag: FamilyTag, p: FamilyParams) -> None:
    """Raise ConstraintViolation naming the first violated relation."""
    a, b, g, d = p.as_tuple()
    if tag is FamilyTag.G1 and _zero(a):
        raise ConstraintViolation("alpha=0")
    if tag is FamilyTag.G2 and _zero(g):
        raise ConstraintViolation("gamma=0")
    if tag is FamilyTag.G4 and p.epsilon not in (1, -1):
        raise ConstraintViolation("epsilon not in {+1,-1}")
    if tag in (FamilyTag.G5, FamilyTag.G6, FamilyTag.G7):
        if _zero(a + d):
            raise ConstraintViolation("alpha+delta=0")
        if tag is FamilyTag.G5 and not _zero(a * g + b * d):
            raise ConstraintViolation("alpha*gamma+beta*delta!=0")
        if tag is FamilyTag.G6 and not _zero(a * g - b * d):
            raise ConstraintViolation("alpha*gamma-beta*delta!=0")
        if tag is FamilyTag.G7 and not _zero(a * g):
            raise ConstraintViolation("alpha*gamma!=0")


@dataclass(frozen=True, eq=False)
class AlgebraInstance:
    tag: FamilyTag
    params: FamilyParams
    constants: StructureConstants

    @property
    def unimodular(self) -> bool:
        return self.tag.unimodular

    def label(self) -> str:
        names = self.tag.required
        vals = ", ".join(f"{n}={getattr(self.params, n)}" for n in names)
        return f"{self.tag.value}({vals})"


def build_family(tag, params: FamilyParams | None = None, **kwargs) -> AlgebraInstance:
    """Construct the canonical algebra ``tag`` for the given parameters.

    >>> inst = build_family("g5", alpha=1, beta=2, gamma=-4, delta=2)
    >>> inst.constants.c[0, 2].tolist()
    [1.0, 2.0, 0.0]
    """
    tag = FamilyTag.parse(tag)
    if params is None:
        params = FamilyParams(**kwargs)
    elif kwargs:
        raise TypeError("pass either params or keyword parameters, not both")
    if tag is FamilyTag.G4 and params.epsilon is None:
        raise ConstraintViolation("epsilon missing", "g4 requires epsilon = +1 or -1")
    validate(tag, params)
    consts = StructureConstants.from_brackets(_brackets(tag, params))
    scale = max(1.0, max(abs(float(v)) for v in params.as_tuple()) ** 2)
    res = jacobi_residual(consts)
    if res > JACOBI_TOL * scale:
        raise ConstraintViolation("jacobi", f"{tag.value} bracket table fails Jacobi (residual {res:.3e})")
    return AlgebraInstance(tag, params, consts)


def from_mapping(doc: Mapping) -> AlgebraInstance:
    """Build from an algebra specification document such as
    ``{"family": "g5", "alpha": 1, "beta": 2, "gamma": -4, "delta": 2}``."""
    if "family" not in doc:
        raise KeyError("family")
    tag = FamilyTag.parse(doc["family"])
    values = {}
    for name in tag.required:
        if name not in doc or doc[name] is None:
            raise KeyError(name)
        values[name] = doc[name] if name == "epsilon" else parse_number(doc[name])
    if "epsilon" in values:
        eps = values["epsilon"]
        if eps not in (1, -1) or isinstance(eps, bool):
            raise ConstraintViolation("epsilon not in {+1,-1}")
        values["epsilon"] = int(eps)
    return build_family(tag, FamilyParams(**values))


def parse_number(value):
    """Parse ints, 'p/q' strings and decimal strings to exact Fractions.

    Floats pass through unchanged, which keeps the numeric path.
    """
    if isinstance(value, bool):
        raise ValueError("booleans are not parameters")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        text = value.strip()
        try:
            f = Fraction(text)
        except ValueError:
            raise ValueError(f"cannot parse number {value!r}") from None
        return int(f) if f.denominator == 1 else f
    raise ValueError(f"cannot parse number {value!r}")


def invariant_D(params: FamilyParams):
    """4(alpha*delta - beta*gamma) / (alpha+delta)^2, exact for rational input."""
    a, b, g, d = params.as_tuple()
    s = a + d
    if _zero(s):
        raise ZeroDivisionError("invariant D needs alpha+delta != 0")
    if params.exact:
        return Fraction(4 * (a * d - b * g)) / Fraction(s) ** 2
    return 4.0 * (a * d - b * g) / float(s) ** 2


def symmetric_locus(tag, params: FamilyParams) -> str | None:
    """Name of the parameter locus (non-unimodular families) on which the
    metric is locally symmetric, or None."""
    tag = FamilyTag.parse(tag)
    a, b, g, d = params.as_tuple()
    z = _zero
    if tag is FamilyTag.G5:
        if z(a) and z(b) and z(g) and not z(d):
            return "alpha=beta=gamma=0!=delta"
        if z(b) and z(g) and z(d) and not z(a):
            return "beta=gamma=delta=0!=alpha"
        if z(b + g) and z(a - d) and not z(a):
            return "beta+gamma=0!=alpha=delta"
        return None
    if tag is FamilyTag.G6:
        if z(a) and z(b) and z(g) and not z(d):
            return "alpha=beta=gamma=0!=delta"
        if z(b) and z(g) and z(d) and not z(a):
            return "beta=gamma=delta=0!=alpha"
        if z(b - g) and z(a - d) and not z(a):
            return "beta-gamma=0!=alpha=delta"
        for e in (1, -1):
            if z(b - e * a) and z(g - e * d):
                return f"beta-({e})alpha=0=gamma-({e})delta"
        return None
    if tag is FamilyTag.G7:
        if z(a) and z(g) and not z(d):
            return "alpha=gamma=0!=delta"
        if z(g) and z(d) and not z(a):
            return "gamma=delta=0!=alpha"
        if z(a - d) and z(g):
            return "alpha-delta=gamma=0"
        return None
    raise ValueError(f"no closed-form symmetric loci for {tag.value}")


def is_symmetric_by_params(tag, params: FamilyParams, tol: float = 1e-8) -> bool:
    tag = FamilyTag.parse(tag)
    if tag.unimodular:
        from .connection import is_locally_symmetric

        return is_locally_symmetric(build_family(tag, params).constants, tol)
    return symmetric_locus(tag, params) is not None


def _sgn(x) -> int:
    if _zero(x):
        return 0
    return 1 if x > 0 else -1


def _milnor(l1, l2, l3) -> str:
    s = sorted((_sgn(l1), _sgn(l2), _sgn(l3)))
    nz = [v for v in s if v != 0]
    if not nz:
        return ABELIAN
    if len(nz) == 1:
        return H3
    if len(nz) == 2:
        return E2 if nz[0] == nz[1] else E11
    return SU2 if nz[0] == nz[1] == nz[2] else SL2


def identify_group(tag, params: FamilyParams) -> str:
    """Simply connected group (or its quotient pair) carrying the algebra."""
    tag = FamilyTag.parse(tag)
    a, b, g, d = params.as_tuple()
    if tag is FamilyTag.G1:
        return E11 if _zero(b) else SL2
    if tag is FamilyTag.G2:
        return E11 if _zero(a) else SL2
    if tag is FamilyTag.G3:
        # [e2,e3]=alpha e1, [e3,e1]=beta e2, [e1,e2]=-gamma e3
        return _milnor(a, b, -g)
    if tag is FamilyTag.G4:
        e = params.epsilon
        if not _zero(b - e):
            return E11 if _zero(a) else SL2
        if _zero(a):
            return H3
        return E2 if _sgn(a) == e else E11
    return NON_UNIMODULAR

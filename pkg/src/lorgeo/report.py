"""Classification reports and their JSON / CSV / text renderings.

JSON output is deterministic: keys keep insertion order, floats are written
with 17 significant digits and exact rationals as "p/q" strings, so parsing
an emitted report and emitting it again reproduces the same bytes.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import DEFAULT_TOL, BoundaryAmbiguous
from .enumeration import enumerate_families, predicate_discrepancies, stated_count, stated_has_null
from .families import AlgebraInstance, identify_group, invariant_D
from .isotropy import compute_h_chain, compute_l
from .reductive import is_go, is_symmetric

SCHEMA = 1

CSV_FIELDS = (
    "family", "alpha", "beta", "gamma", "delta", "epsilon", "D", "unimodular", "symmetric", "isotropy_dim",
    "independent_geodesic_count", "has_null_homogeneous", "is_go", "is_naturally_reductive", "group_name",
)


@dataclass
class ClassificationReport:
    family: str
    params: dict
    D: object
    unimodular: bool
    symmetric: bool
    isotropy_dim: int
    independent_geodesic_count: int
    has_null_homogeneous: bool
    is_go: bool
    is_naturally_reductive: bool
    group_name: str
    geodesic_families: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    stated: dict = field(default_factory=dict)
    discrepancies: list = field(default_factory=list)
    go_agreement: bool = True

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "family": self.family,
            "params": self.params,
            "D": self.D,
            "unimodular": self.unimodular,
            "symmetric": self.symmetric,
            "isotropy_dim": self.isotropy_dim,
            "independent_geodesic_count": self.independent_geodesic_count,
            "has_null_homogeneous": self.has_null_homogeneous,
            "is_go": self.is_go,
            "is_naturally_reductive": self.is_naturally_reductive,
            "group_name": self.group_name,
            "geodesic_families": self.geodesic_families,
            "witnesses": self.witnesses,
            "stated": self.stated,
            "discrepancies": self.discrepancies,
            "go_agreement": self.go_agreement,
        }

    def csv_row(self) -> dict:
        row = {"family": self.family, **{k: self.params.get(k, "") for k in ("alpha", "beta", "gamma", "delta", "epsilon")}}
        for name in CSV_FIELDS[6:]:
            row[name] = getattr(self, name)
        return {k: scalar_text(v) for k, v in row.items()}


def params_dict(instance: AlgebraInstance) -> dict:
    p = instance.params
    out = {name: getattr(p, name) for name in instance.tag.required}
    return out


def classify(instance: AlgebraInstance, samples: int = 500, tol: float = DEFAULT_TOL, seed: int = 0,
             search_samples: int = 10_000) -> ClassificationReport:
    """Full classification of one instance."""
    sym = is_symmetric(instance)
    go = is_go(instance, samples=samples, tol=tol, seed=seed, search_samples=search_samples)
    D = None if instance.unimodular else invariant_D(instance.params)
    if sym:
        # every skew map killing the curvature integrates to an isometry
        iso = compute_h_chain(instance, 0)[0].dim
    else:
        iso = compute_l(instance.constants).dim
    families, stated, disc = [], {}, []
    if not instance.unimodular and not sym:
        families = [f.as_dict() for f in enumerate_families(instance)]
        stated = {"independent_geodesic_count": stated_count(instance),
                  "has_null_homogeneous": stated_has_null(instance)}
        disc = predicate_discrepancies(instance)
    return ClassificationReport(
        family=instance.tag.value,
        params=params_dict(instance),
        D=D,
        unimodular=instance.unimodular,
        symmetric=sym,
        isotropy_dim=iso,
        independent_geodesic_count=go.independent_count,
        has_null_homogeneous=go.has_null_homogeneous,
        is_go=go.is_go,
        is_naturally_reductive=go.is_naturally_reductive,
        group_name=identify_group(instance.tag, instance.params),
        geodesic_families=families,
        witnesses=[w.as_dict() for w in go.witnesses],
        stated=stated,
        discrepancies=disc,
        go_agreement=go.agreement,
    )


# -- serialization --------------------------------------------------------------


def _float_text(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be written as JSON")
    return "%.17g" % (x + 0.0)


def scalar_text(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (float, np.floating)):
        return _float_text(float(v))
    return str(v)


def to_jsonable(obj):
    """Plain JSON types; Fractions become "p/q" strings (integers stay ints)."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if hasattr(obj, "as_dict"):
        return to_jsonable(obj.as_dict())
    return obj


def dumps(obj, indent: int = 2) -> str:
    """Deterministic JSON text with 17-significant-digit floats."""
    return _emit(to_jsonable(obj), indent, 0) + "\n"


def _emit(v, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_emit(x, indent, level + 1)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, list):
        if not v:
            return "[]"
        if all(not isinstance(x, (dict, list)) for x in v):
            return "[" + ", ".join(_emit(x, indent, level + 1) for x in v) + "]"
        return "[\n" + ",\n".join(pad + _emit(x, indent, level + 1) for x in v) + "\n" + end + "]"
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, float):
        return _float_text(v)
    return json.dumps(v)


def to_csv(rows, header=CSV_FIELDS, extra: tuple = ()) -> str:
    """CSV text with a fixed header; rows are dicts of already formatted strings."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(header) + list(extra), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: row.get(k, "") for k in writer.fieldnames})
    return buf.getvalue()


def to_text(obj, level: int = 0) -> str:
    """Indented key: value listing for terminals."""
    lines = []
    pad = "  " * level
    data = to_jsonable(obj)
    if isinstance(data, dict):
        for k, v in data.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(to_text(v, level + 1))
            else:
                lines.append(f"{pad}{k}: {scalar_text(v) if not isinstance(v, (dict, list)) else v}")
    elif isinstance(data, list):
        for v in data:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(to_text(v, level + 1))
            else:
                lines.append(f"{pad}- {scalar_text(v)}")
    else:
        lines.append(pad + scalar_text(data))
    return "\n".join(lines)


__all__ = ["BoundaryAmbiguous", "CSV_FIELDS", "ClassificationReport", "SCHEMA", "classify", "dumps", "to_csv",
           "to_jsonable", "to_text"]

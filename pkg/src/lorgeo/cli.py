"""Command-line front end.

    lorgeo classify --family g5 --alpha 1 --beta 2 --gamma -4 --delta 2
    lorgeo scan --family g5 --alpha 1 --beta=-2:2:1/4 --delta 1/2:3:1/4 --gamma=-beta*delta/alpha
    lorgeo verify --samples 10

Exit status: 0 success, 1 internal or verification failure, 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor

from .algebra import DEFAULT_TOL
from .enumeration import enumerate_families, rank_of
from .families import ConstraintViolation, FamilyTag, from_mapping, parse_number
from .geodesics import null_directions, numeric_search
from .isotropy import compute_h_chain, compute_l, first_stable_index, stated_stable_index
from .reductive import is_go, is_symmetric
from .report import CSV_FIELDS, classify, dumps, params_dict, scalar_text, to_csv, to_text
from .scan import GridError, grid_points
from .verify import FAULTS, all_passed, run_suites

COMMANDS = ("classify", "geodesics", "go-check", "isotropy", "scan", "verify")
PARAMS = ("alpha", "beta", "gamma", "delta", "epsilon")
DEFAULT_SAMPLES = {"classify": 500, "go-check": 500, "isotropy": 1, "geodesics": 10_000, "scan": 500, "verify": 50}
DEFAULT_FORMAT = {"scan": "csv", "verify": "text"}


class InputError(Exception):
    """Invalid user input; reported with exit status 2."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lorgeo", description="Homogeneous geodesics of 3D Lorentzian Lie groups.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--family", help="family tag g1..g7")
    for name in PARAMS:
        parser.add_argument(f"--{name}", help="number, p/q, lo:hi:step (scan) or expression (scan)")
    parser.add_argument("--input", help="JSON algebra specification (or grid for scan)")
    parser.add_argument("--tol", type=float, default=DEFAULT_TOL)
    parser.add_argument("--samples", type=int, default=None, help="directions (or instances per family for verify)")
    parser.add_argument("--seed", type=int, default=0, help="overridden by LORGEO_SEED")
    parser.add_argument("--output", help="write here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv", "text"), default=None)
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for scan")
    parser.add_argument("--inject-fault", choices=FAULTS, default=None, help="negative control for verify")
    return parser


def _line_of(text: str, key: str) -> int | None:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def load_document(args) -> tuple[dict, str, str]:
    """(document, source label, raw text) from --input or inline flags."""
    if args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"{args.input}: {exc.strerror}") from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.input}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        if not isinstance(doc, dict):
            raise InputError(f"{args.input}:1: expected a JSON object")
        return doc, args.input, text
    if not args.family:
        raise InputError("--family (or --input) is required")
    doc = {"family": args.family}
    for name in PARAMS:
        value = getattr(args, name)
        if value is not None:
            doc[name] = value
    return doc, "command line", ""


def _where(source: str, text: str, field: str) -> str:
    line = _line_of(text, field) if text else None
    if line is not None:
        return f"{source}:{line}: field '{field}'"
    return f"{source}: --{field}" if source == "command line" else f"{source}: field '{field}'"


def instance_from(doc: dict, source: str, text: str):
    if "family" not in doc:
        raise InputError(f"{source}: missing field 'family'")
    try:
        tag = FamilyTag.parse(doc["family"])
    except ValueError as exc:
        raise InputError(f"{_where(source, text, 'family')}: {exc}") from None
    clean = {"family": tag.value}
    for name in tag.required:
        if name not in doc or doc[name] is None:
            raise InputError(f"{source}: missing field '{name}' for family {tag.value}")
        value = doc[name]
        try:
            value = parse_number(value)
        except (ValueError, TypeError) as exc:
            raise InputError(f"{_where(source, text, name)}: {exc}") from None
        clean[name] = value
    unknown = [k for k in doc if k not in clean and k != "family"]
    if unknown:
        raise InputError(f"{_where(source, text, unknown[0])}: not a parameter of family {tag.value}")
    try:
        return from_mapping(clean)
    except ConstraintViolation as exc:
        raise InputError(f"{source}: {exc}") from None


# -- commands -----------------------------------------------------------------


def cmd_classify(inst, args):
    return classify(inst, samples=args.samples, tol=args.tol, seed=args.seed)


def cmd_go_check(inst, args):
    rep = is_go(inst, samples=args.samples, tol=args.tol, seed=args.seed)
    return {"schema": 1, "family": inst.tag.value, "params": params_dict(inst), "symmetric": rep.symmetric,
            **rep.as_dict()}


def cmd_geodesics(inst, args):
    out = {"schema": 1, "family": inst.tag.value, "params": params_dict(inst)}
    if is_symmetric(inst):
        out.update(symmetric=True, geodesic_families=[], vectors=[], independent_count=3)
        return out
    l = compute_l(inst.constants)
    found = numeric_search(inst, l, args.samples, args.tol, args.seed)
    out["symmetric"] = False
    out["geodesic_families"] = [] if inst.unimodular else [f.as_dict() for f in enumerate_families(inst)]
    out["vectors"] = [g.as_dict() for g in found]
    out["independent_count"] = rank_of([g.xm for g in found], 1e-6)
    out["has_null"] = bool(null_directions(inst, l, tol=args.tol))
    return out


def cmd_isotropy(inst, args):
    l = compute_l(inst.constants)
    chain = compute_h_chain(inst, 2)
    out = {"schema": 1, "family": inst.tag.value, "params": params_dict(inst), "symmetric": is_symmetric(inst),
           "l_dim": l.dim, "l_basis": [list(m.coords) for m in l.basis], "h_dims": [h.dim for h in chain],
           "stable_index": first_stable_index(inst)}
    if not inst.unimodular and not out["symmetric"]:
        out["stated_stable_index"] = stated_stable_index(inst)
    return out


def _scan_point(job):
    tag, values, reason, samples, tol, seed = job
    row = {"family": tag, **values}
    if reason is None:
        try:
            inst = from_mapping({"family": tag, **values})
            return {**classify(inst, samples=samples, tol=tol, seed=seed).csv_row(), "reason": ""}
        except ConstraintViolation as exc:
            reason = exc.relation
        except ZeroDivisionError as exc:
            reason = str(exc)
    return {**{k: scalar_text(v) for k, v in row.items()}, "reason": reason}


def cmd_scan(doc, source, args):
    if "family" not in doc:
        raise InputError(f"{source}: missing field 'family'")
    try:
        tag = FamilyTag.parse(doc["family"])
        spec = {k: v for k, v in doc.items() if k != "family"}
        points = list(grid_points(tag, spec))
    except (GridError, ValueError) as exc:
        raise InputError(f"{source}: {exc}") from None
    if not points:
        raise InputError(f"{source}: empty grid")
    jobs = [(tag.value, v, r, args.samples, args.tol, args.seed) for v, r in points]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            return list(pool.map(_scan_point, jobs, chunksize=4))
    return [_scan_point(j) for j in jobs]


# -- rendering ------------------------------------------------------------------


def render(obj, fmt: str) -> str:
    if fmt == "json":
        return dumps(obj)
    if fmt == "text":
        return to_text(obj) + "\n"
    if hasattr(obj, "csv_row"):
        return to_csv([obj.csv_row()])
    if "vectors" in obj:
        rows = [{"x1": v["xm"][0], "x2": v["xm"][1], "x3": v["xm"][2], "k": v["k"], "causal": v["causal"]}
                for v in obj["vectors"]]
        return to_csv([{k: scalar_text(v) for k, v in r.items()} for r in rows], header=("x1", "x2", "x3", "k", "causal"))
    flat = {k: scalar_text(v) for k, v in obj.items() if not isinstance(v, (dict, list))}
    return to_csv([flat], header=tuple(flat))


def render_scan(rows, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(rows, CSV_FIELDS, ("reason",))
    if fmt == "json":
        return dumps(rows)
    return to_text(rows) + "\n"


def render_verify(results, fmt: str) -> str:
    if fmt == "json":
        return dumps({"schema": 1, "ok": all_passed(results), "suites": [r.as_dict() for r in results]})
    if fmt == "csv":
        return to_csv([{k: scalar_text(v) for k, v in r.as_dict().items()} for r in results],
                      header=("suite", "passed", "failed", "worst_residual", "informational", "ok"))
    lines = []
    for r in results:
        status = "PASS" if r.ok else ("INFO" if r.informational else "FAIL")
        lines.append(f"{status} {r.name:<24} passed={r.passed:<5} failed={r.failed:<4} "
                     f"worst={r.worst:.3e} ({r.seconds:.2f}s)")
    lines.append("all suites passed" if all_passed(results) else "verification FAILED")
    return "\n".join(lines) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    env_seed = os.environ.get("LORGEO_SEED")
    try:
        if env_seed is not None:
            try:
                args.seed = int(env_seed)
            except ValueError:
                raise InputError(f"LORGEO_SEED: not an integer: {env_seed!r}") from None
        if args.samples is None:
            args.samples = DEFAULT_SAMPLES[args.command]
        if not args.tol > 0:
            raise InputError("--tol must be positive")
        if args.samples < 1:
            raise InputError("--samples must be at least 1")
        if args.jobs < 1:
            raise InputError("--jobs must be at least 1")
        fmt = args.format or DEFAULT_FORMAT.get(args.command, "json")
        if args.command == "verify":
            results = run_suites(args.samples, args.seed, args.inject_fault)
            _emit(render_verify(results, fmt), args.output)
            return 0 if all_passed(results) else 1
        doc, source, text = load_document(args)
        if args.command == "scan":
            _emit(render_scan(cmd_scan(doc, source, args), fmt), args.output)
            return 0
        inst = instance_from(doc, source, text)
        handler = {"classify": cmd_classify, "go-check": cmd_go_check, "geodesics": cmd_geodesics,
                   "isotropy": cmd_isotropy}[args.command]
        _emit(render(handler(inst, args), fmt), args.output)
        return 0
    except InputError as exc:
        print(f"lorgeo: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"lorgeo: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

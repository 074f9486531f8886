"""Command-line driver: problem files in, canonical reports out.

    pvk <command> [problem.json] [--algebra NAME] [--module KIND] [--cap D] ...

Exit codes: 0 success, 1 validation failure, 2 mathematical obstruction,
3 internal invariant breach.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from .core.forms import OneForm
from .core.matrix import PolyMatrix
from .core.multivector import MultiVector
from .core.poly import Poly
from .core.scalar import GaussianRational, format_scalar, parse_scalar
from .errors import (
    CrossRefError,
    InternalError,
    ObstructionFound,
    ParseError,
    PVKError,
    SchemaError,
    ValidationError,
)
from .lie import LieModule, ce_cohomology_dims, module_preset, preset_algebra, validate_lie_algebra
from .normalize import base_degree_truncate, dilation_homotopy, formal_normalize, gauge_transform
from .poisson import (
    PoissonStructure,
    from_lie_algebra,
    poisson_cohomology_dims,
    preset_poisson,
    sharp,
)
from .pvb import (
    ConnectionData,
    GlCocycle,
    canonical_bundle,
    characteristic_class,
    from_representation,
    homogeneity_check,
    isotropy_representation,
    mc_residual,
    product_extension,
    restrict_to_base,
)

COMMANDS = ("check-mc", "normalize", "char-class", "modular", "isotropy", "ce", "pcoh",
            "homotopy", "homog-check", "product")

DEFAULT_CAPS = {"normalize": 4, "char-class": 3, "modular": 6, "pcoh": 2, "homog-check": None}

_POLY = {"oneOf": [
    {"type": "string"},
    {"type": "integer"},
    {"type": "array", "items": {
        "type": "object",
        "required": ["coeff", "exps"],
        "properties": {"coeff": {"type": ["string", "integer"]},
                       "exps": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
        "additionalProperties": False}},
]}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _POLY}}
_SCALAR = {"type": ["string", "integer"]}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "description": {"type": "string"},
        "algebra": {"oneOf": [
            {"type": "string"},
            {"type": "object",
             "required": ["dim"],
             "properties": {
                 "dim": {"type": "integer", "minimum": 1},
                 "names": {"type": "array", "items": {"type": "string"}},
                 "brackets": {"type": "array", "items": {
                     "type": "array", "minItems": 3, "maxItems": 3,
                     "prefixItems": [{"type": "integer", "minimum": 0},
                                     {"type": "integer", "minimum": 0},
                                     {"type": "array", "items": {
                                         "type": "array", "minItems": 2, "maxItems": 2,
                                         "prefixItems": [{"type": "integer", "minimum": 0},
                                                         _SCALAR]}}]}}},
             "additionalProperties": False},
        ]},
        "poisson": {"type": "object",
                    "properties": {
                        "preset": {"type": "string"},
                        "nvars": {"type": "integer", "minimum": 1},
                        "names": {"type": "array", "items": {"type": "string"}},
                        "bivector": {"type": "array", "items": {
                            "type": "array", "minItems": 3, "maxItems": 3,
                            "prefixItems": [{"type": "integer", "minimum": 0},
                                            {"type": "integer", "minimum": 0}, _POLY]}}},
                    "additionalProperties": False},
        "bundle": {"type": "object",
                   "properties": {
                       "rank": {"type": "integer", "minimum": 1},
                       "xi": {"type": "array", "items": _MATRIX},
                       "field": {"enum": ["Q", "Qi"]},
                       "cap": {"type": "integer", "minimum": 0},
                       "canonical": {"type": "boolean"},
                       "representation": {"type": "object",
                                          "properties": {
                                              "preset": {"enum": ["trivial", "standard", "adjoint"]},
                                              "matrices": {"type": "array", "items": {
                                                  "type": "array", "items": {
                                                      "type": "array", "items": _SCALAR}}}},
                                          "additionalProperties": False},
                       "gauge": _MATRIX},
                   "additionalProperties": False},
        "options": {"type": "object",
                    "properties": {
                        "cap": {"type": "integer", "minimum": 0},
                        "force": {"type": "boolean"},
                        "point": {"type": "array", "items": _SCALAR},
                        "cocycle": {"type": "string"},
                        "m": {"type": "integer", "minimum": 1},
                        "index": {"type": "integer", "minimum": 0},
                        "grades": {"type": "array", "items": {"type": "integer"}},
                        "t": _SCALAR,
                        "X": {"type": "array", "items": _POLY},
                        "A": _MATRIX},
                    "additionalProperties": False},
    },
}


# -- problem files ----------------------------------------------------------

@dataclass
class ProblemFile:
    algebra: object = None
    poisson: PoissonStructure | None = None
    module: LieModule | None = None
    bundle: ConnectionData | None = None
    options: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)
    source: str | None = None


def _fixture_path(name):
    return resources.files("pvk") / "fixtures" / name


def _max_cap():
    try:
        return int(os.environ.get("PVK_MAX_CAP", "8"))
    except ValueError:
        raise ValidationError("PVK_MAX_CAP must be an integer") from None


def _check_cap(cap, pointer="/options/cap"):
    if cap is not None and cap > _max_cap():
        raise SchemaError(f"cap {cap} exceeds PVK_MAX_CAP={_max_cap()}", pointer)
    return cap


def _pointer(path):
    return "/" + "/".join(str(p) for p in path)


def load_problem(path):
    """Read, schema-check and build a problem; missing paths fall back to bundled fixtures."""
    p = Path(path)
    if not p.exists():
        fallback = _fixture_path(p.name)
        if not fallback.is_file():
            raise ParseError(f"no such problem file: {path}")
        text = fallback.read_text(encoding="utf-8")
    else:
        text = p.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    prob = parse_problem(raw)
    prob.source = str(path)
    return prob


def parse_problem(raw):
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: ([str(p) for p in e.absolute_path], e.message))
    if errors:
        err = errors[0]
        raise SchemaError(err.message, _pointer(err.absolute_path))
    prob = ProblemFile(options=dict(raw.get("options", {})), raw=raw)
    _check_cap(prob.options.get("cap"))

    alg = raw.get("algebra")
    if isinstance(alg, str):
        prob.algebra = preset_algebra(alg)
    elif isinstance(alg, dict):
        prob.algebra = validate_lie_algebra(alg)

    pois = raw.get("poisson")
    if pois is None or (not pois.get("bivector") and "preset" not in pois):
        if prob.algebra is None:
            raise CrossRefError("no Poisson structure and no algebra to derive one from", "/poisson")
        prob.poisson = from_lie_algebra(prob.algebra)
    elif "preset" in pois:
        prob.poisson = preset_poisson(pois["preset"])
    else:
        prob.poisson = _parse_bivector(pois, prob.algebra)
    if prob.algebra is not None and prob.poisson.nvars != prob.algebra.dim:
        raise CrossRefError(f"algebra has dimension {prob.algebra.dim} but the Poisson "
                            f"structure has {prob.poisson.nvars} variables", "/poisson")
    if prob.algebra is not None and prob.poisson.algebra is None:
        prob.poisson = PoissonStructure(prob.poisson.bivector, prob.algebra, check=False)

    if "bundle" in raw:
        prob.bundle, prob.module = _parse_bundle(raw["bundle"], prob)
    return prob


def _parse_bivector(pois, algebra):
    entries = pois["bivector"]
    n = pois.get("nvars")
    if n is None:
        if algebra is None:
            raise SchemaError("custom bivector needs nvars", "/poisson/nvars")
        n = algebra.dim
    comps = {}
    for k, (i, j, lit) in enumerate(entries):
        if i >= n or j >= n or i == j:
            raise CrossRefError(f"bad index pair ({i}, {j}) for {n} variables",
                                f"/poisson/bivector/{k}")
        comps[(i, j)] = comps.get((i, j), Poly.zero(n)) + Poly.from_literal(lit, n)
    mv = MultiVector(n, 2, comps)
    return PoissonStructure(mv, None, tuple(pois.get("names", ())))


def _parse_bundle(b, prob):
    n = prob.poisson.nvars
    cap = _check_cap(b.get("cap"), "/bundle/cap")
    fld = b.get("field", "Q")
    module = None
    if b.get("canonical"):
        xi = canonical_bundle(prob.poisson)
    elif "representation" in b:
        rep = b["representation"]
        L = prob.algebra or prob.poisson.algebra
        if L is None:
            raise CrossRefError("a representation needs an algebra", "/bundle/representation")
        if "preset" in rep:
            module = module_preset(L, rep["preset"])
        else:
            mats = [[[parse_scalar(str(v)) for v in row] for row in M] for M in rep.get("matrices", [])]
            if len(mats) != L.dim:
                raise CrossRefError(f"need {L.dim} matrices, got {len(mats)}",
                                    "/bundle/representation/matrices")
            module = LieModule.from_matrices(L, mats)
        xi = from_representation(module, prob.poisson)
    elif "xi" in b:
        lits = b["xi"]
        if len(lits) != n:
            raise CrossRefError(f"need {n} components for {n} variables, got {len(lits)}", "/bundle/xi")
        rank = b.get("rank")
        comps = []
        for k, lit in enumerate(lits):
            if rank is not None and (len(lit) != rank or any(len(r) != rank for r in lit)):
                raise CrossRefError(f"component {k} is not {rank}x{rank}", "/bundle/xi")
            try:
                comps.append(PolyMatrix.from_literal(lit, n, cap))
            except ParseError as exc:
                raise ParseError(f"/bundle/xi/{k}: {exc}") from None
        if len({c.size for c in comps}) > 1:
            raise CrossRefError("components have different sizes", "/bundle/xi")
        xi = ConnectionData(prob.poisson, tuple(comps), cap, fld)
    else:
        raise SchemaError("bundle needs xi, representation or canonical", "/bundle")
    if cap is not None or fld != "Q":
        xi = ConnectionData(xi.poisson, xi.xi, cap, fld)
    if "gauge" in b:
        P = PolyMatrix.from_literal(b["gauge"], n, cap)
        if P.size != xi.rank:
            raise CrossRefError("gauge matrix size differs from the bundle rank", "/bundle/gauge")
        xi = gauge_transform(xi, P)
    return xi, module


def problem_from_flags(args):
    if not args.algebra:
        raise ValidationError("give a problem file or --algebra")
    raw = {"algebra": args.algebra}
    if args.module:
        raw["bundle"] = {"representation": {"preset": args.module}}
    return parse_problem(raw)


# -- reports ------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, (Fraction, GaussianRational)):
        return format_scalar(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (Poly, PolyMatrix, MultiVector)):
        return _jsonable(obj.to_literal())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_report(report, fmt="json"):
    """Canonical bytes for a report (sorted keys, scalars as strings)."""
    data = _jsonable(report)
    if fmt == "json":
        return (json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode()
    lines = [f"command: {data.get('command')}", f"status: {data.get('status')}"]
    for section in ("payload", "error"):
        body = data.get(section)
        if not body:
            continue
        lines.append(f"{section}:")
        for k in sorted(body):
            v = body[k]
            text = v if isinstance(v, str) else json.dumps(v, sort_keys=True, ensure_ascii=False)
            lines.append(f"  {k}: {text}")
    if "timing" in data:
        lines.append(f"timing: {data['timing']}")
    return ("\n".join(lines) + "\n").encode()


def _scalar_or_poly(p):
    return format_scalar(p.constant_term()) if p.is_constant() else p.to_literal()


def _matrices(mats):
    return [[[format_scalar(v) for v in row] for row in M] for M in mats]


# -- commands -----------------------------------------------------------------

def _need_bundle(prob):
    if prob.bundle is None:
        raise ValidationError("this command needs a bundle (problem file bundle or --module)")
    return prob.bundle


def _cap(prob, flags, command):
    cap = flags.get("cap")
    if cap is None:
        cap = prob.options.get("cap")
    if cap is None and prob.bundle is not None and prob.bundle.cap is not None:
        cap = prob.bundle.cap
    if cap is None:
        cap = DEFAULT_CAPS.get(command)
    return _check_cap(cap, "/options/cap")


def _opt(prob, flags, key, default=None):
    v = flags.get(key)
    if v is None:
        v = prob.options.get(key)
    return default if v is None else v


def cmd_check_mc(prob, flags):
    xi = _need_bundle(prob)
    F = mc_residual(xi)
    return "ok" if F.is_zero() else "not_flat", {
        "residual_zero": F.is_zero(),
        "residual": F.to_literal(),
        "rank": xi.rank,
        "nvars": xi.nvars,
    }


def cmd_normalize(prob, flags):
    xi = _need_bundle(prob)
    cap = _cap(prob, flags, "normalize")
    force = bool(_opt(prob, flags, "force", False))
    res = formal_normalize(xi, cap, force=force)
    return "ok", {
        "degrees_cleared": list(res.degrees_cleared),
        "phi": res.phi.phi.to_literal(),
        "xi0": _matrices(res.xi0.constant_matrices()),
        "unitary": res.unitary,
        "cap": cap,
    }


def cmd_char_class(prob, flags):
    xi = _need_bundle(prob)
    c = GlCocycle.named(_opt(prob, flags, "cocycle", "tr"))
    cap = _cap(prob, flags, "char-class")
    cc = characteristic_class(xi, c, cap)
    return "ok", {
        "cocycle": c.name,
        "class": cc.multivector.to_literal(),
        "closed": cc.closed,
        "exact_up_to_cap": cc.exact_up_to_cap,
        "cap": cc.cap,
    }


def cmd_modular(prob, flags):
    cap = _cap(prob, flags, "modular")
    xi = canonical_bundle(prob.poisson)
    cc = characteristic_class(xi, GlCocycle(1), cap)
    return "ok", {
        "class": [_scalar_or_poly(x[0, 0]) for x in xi.xi],
        "zero": cc.multivector.is_zero(),
        "nonexact": not cc.exact_up_to_cap,
        "cap": cap,
    }


def _parse_point(value, n):
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    point = [parse_scalar(str(v).strip()) for v in value]
    if len(point) != n:
        raise ValidationError(f"point needs {n} coordinates, got {len(point)}")
    return point


def cmd_isotropy(prob, flags):
    xi = _need_bundle(prob)
    point = _parse_point(_opt(prob, flags, "point", [0] * xi.nvars), xi.nvars)
    iso = isotropy_representation(xi, point)
    return "ok", {
        "point": list(iso.point),
        "conormal_basis": [list(b) for b in iso.basis],
        "matrices": _matrices(iso.matrices),
        "brackets": [[a, b, [[c, v] for c, v in enumerate(iso.brackets[a][b]) if v != 0]]
                     for a in range(len(iso.basis)) for b in range(a + 1, len(iso.basis))
                     if any(v != 0 for v in iso.brackets[a][b])],
    }


def _grades(prob, flags, n):
    g = _opt(prob, flags, "grades")
    if g is None:
        return list(range(n + 1))
    if isinstance(g, str):
        return [int(v) for v in g.split(",") if v.strip()]
    return list(g)


def cmd_ce(prob, flags):
    L = prob.algebra or prob.poisson.algebra
    if L is None:
        raise ValidationError("ce needs an algebra")
    M = prob.module or module_preset(L, "trivial")
    grades = _grades(prob, flags, L.dim)
    dims = ce_cohomology_dims(L, M, grades)
    return "ok", {"algebra": L.name or "custom", "module": M.name or "custom",
                  "grades": grades, "dims": dims}


def cmd_pcoh(prob, flags):
    cap = _cap(prob, flags, "pcoh")
    grades = _grades(prob, flags, prob.poisson.nvars)
    dims = poisson_cohomology_dims(prob.poisson, cap, grades)
    return "ok", {"cap": cap, "grades": grades, "dims": dims}


def cmd_homotopy(prob, flags):
    xi = _need_bundle(prob)
    t = _opt(prob, flags, "t", "t")
    if t != "t":
        t = parse_scalar(str(t))
        xt = dilation_homotopy(xi, t)
        F = mc_residual(xt)
        return "ok", {"t": t, "residual_zero": F.is_zero(), "xi_t": xt.to_literal()}
    xt = dilation_homotopy(xi, "t")
    F = mc_residual(xt)
    n = xi.nvars
    if xi.cap is not None:
        F = base_degree_truncate(F, n, xi.cap)
    at_zero = [PolyMatrix([[Poly(n, {ex[:n]: c for ex, c in e.terms if ex[n] == 0}) for e in row]
                           for row in x.rows], n)
               for x in xt.xi[:n]]
    const_ok = all(a == PolyMatrix.constant(m, n)
                   for a, m in zip(at_zero, xi.constant_matrices()))
    return "ok", {"t": "t", "residual_zero": F.is_zero(), "constant_part_at_t0": const_ok,
                  "xi_t": xt.to_literal()}


def cmd_homog_check(prob, flags):
    xi = _need_bundle(prob)
    n = xi.nvars
    c = GlCocycle.named(_opt(prob, flags, "cocycle", "tr"))
    if "X" in prob.options:
        X = MultiVector.vector_field([Poly.from_literal(p, n) for p in prob.options["X"]])
        A = PolyMatrix.from_literal(prob.options["A"], n)
        label = "custom"
    else:
        i = int(_opt(prob, flags, "index", 0))
        if i >= n:
            raise ValidationError(f"index {i} out of range for {n} coordinates")
        X = sharp(xi.poisson, OneForm.coordinate(n, i))
        A = xi.xi[i]
        label = f"coordinate {i}"
    rep = homogeneity_check(xi, X, A, c)
    return "ok", {"witness": label, "cocycle": c.name, "der_xi": rep.der_xi,
                  "identity": rep.holds, "b": rep.b.to_literal(), "d_pi_b": rep.lhs.to_literal()}


def cmd_product(prob, flags):
    xi = _need_bundle(prob)
    m = int(_opt(prob, flags, "m", 1))
    ext = product_extension(xi, m)
    F = mc_residual(ext)
    back = restrict_to_base(ext, xi.nvars)
    return "ok", {"m": m, "nvars": ext.nvars, "residual_zero": F.is_zero(),
                  "roundtrip": back == xi, "xi": ext.to_literal()}


HANDLERS = {
    "check-mc": cmd_check_mc,
    "normalize": cmd_normalize,
    "char-class": cmd_char_class,
    "modular": cmd_modular,
    "isotropy": cmd_isotropy,
    "ce": cmd_ce,
    "pcoh": cmd_pcoh,
    "homotopy": cmd_homotopy,
    "homog-check": cmd_homog_check,
    "product": cmd_product,
}


def _error_body(exc):
    body = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, SchemaError):
        body["pointer"] = exc.pointer
    if isinstance(exc, ObstructionFound):
        body["r"] = exc.degree
        cocycle = exc.cocycle
        if hasattr(cocycle, "to_json"):
            body["cocycle"] = cocycle.to_json()
    return body


def dispatch(command, problem, flags=None):
    """Run ``command``; returns ``(report, exit_code)``."""
    flags = flags or {}
    if command not in HANDLERS:
        raise ValidationError(f"unknown command {command!r}")
    report = {"command": command}
    start = time.perf_counter()
    try:
        status, payload = HANDLERS[command](problem, flags)
        code = 0 if status == "ok" else 1
    except ObstructionFound as exc:
        status, payload, code = "obstruction", {}, exc.exit_code
        report["error"] = _error_body(exc)
        if command == "normalize":
            payload = {"obstruction": {"r": exc.degree, "cocycle": exc.cocycle.to_json()
                                       if hasattr(exc.cocycle, "to_json") else None}}
    except PVKError as exc:
        status, payload, code = "error", {}, exc.exit_code
        report["error"] = _error_body(exc)
    report["status"] = status
    report["payload"] = payload
    if flags.get("timing"):
        report["timing"] = f"{time.perf_counter() - start:.6f}s"
    return report, code


def build_parser():
    ap = argparse.ArgumentParser(prog="pvk", description="Exact computations with Poisson vector bundles.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("problem", nargs="?", help="problem JSON file")
    ap.add_argument("--algebra", help="preset algebra (sl2, so3, h3, aff1, abelian:n)")
    ap.add_argument("--module", choices=("trivial", "standard", "adjoint"), help="preset representation")
    ap.add_argument("--cap", type=int, help="degree cap")
    ap.add_argument("--force", action="store_true", default=None, help="skip the semisimplicity gate")
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--point", help="comma separated coordinates, e.g. 1,0,1/4")
    ap.add_argument("--cocycle", help="tr or u<k>")
    ap.add_argument("--m", type=int, help="half-dimension of the symplectic factor")
    ap.add_argument("--index", type=int, help="coordinate index for homog-check")
    ap.add_argument("--grades", help="comma separated grades")
    ap.add_argument("--t", help="dilation parameter (a scalar, or t for symbolic)")
    ap.add_argument("--timing", action="store_true", help="include wall time in the report")
    ap.add_argument("-o", "--output", help="write the report here instead of stdout")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    flags = {k: getattr(args, k) for k in ("cap", "force", "point", "cocycle", "m", "index",
                                          "grades", "t", "timing")}
    try:
        if args.problem and args.algebra:
            raise ValidationError("give either a problem file or --algebra, not both")
        prob = load_problem(args.problem) if args.problem else problem_from_flags(args)
        _check_cap(args.cap, "--cap")
        report, code = dispatch(args.command, prob, flags)
    except PVKError as exc:
        report = {"command": args.command, "status": "error", "payload": {}, "error": _error_body(exc)}
        code = exc.exit_code
    except Exception as exc:  # anything else is a bug on our side
        report = {"command": args.command, "status": "internal",
                  "payload": {}, "error": {"type": type(exc).__name__, "message": str(exc)}}
        code = InternalError.exit_code
    data = emit_report(report, args.format)
    if args.output:
        Path(args.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    if code:
        print(f"pvk: {report['error']['message'] if 'error' in report else report['status']}",
              file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Every command prints one document::

    {"command", "value", "witness", "extra", "seed", "config", "warnings"}

Exit codes: 0 success, 2 usage error, 3 domain or validation error,
4 numerical singularity.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional

import numpy as np

from . import bloch, domains, isometry, maps, spectrum
from .errors import BlochLabError, ClassificationRequired, SingularityError, UnsupportedError, ValidationError
from .maps import ExprMap

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_SINGULAR = 0, 2, 3, 4

OUTPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "value", "witness", "extra", "seed", "config", "warnings"],
    "additionalProperties": False,
    "properties": {
        "command": {"type": "string"},
        "value": {"type": ["number", "null"]},
        "witness": {
            "type": ["array", "null"],
            "items": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        },
        "extra": {"type": "object"},
        "seed": {"type": "integer"},
        "config": {"type": "object"},
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
}


# ----------------------------------------------------------------------------
# Input parsing
# ----------------------------------------------------------------------------


def parse_vector(text: str) -> np.ndarray:
    """``[re,im;re,im;...]`` inline, or a path to a JSON list of ``[re, im]`` pairs."""
    text = text.strip()
    if not text.startswith("[") and os.path.exists(text):
        with open(text) as fh:
            data = json.load(fh)
        try:
            return np.array([complex(float(p[0]), float(p[1])) for p in data])
        except (TypeError, IndexError, ValueError) as exc:
            raise ValidationError(f"{text}: expected a list of [re, im] pairs") from exc
    if not (text.startswith("[") and text.endswith("]")):
        raise ValidationError(f"bad vector {text!r}; expected [re,im;re,im;...]")
    body = text[1:-1].strip()
    if not body:
        raise ValidationError("empty vector")
    out = []
    for part in body.split(";"):
        nums = part.split(",")
        if len(nums) != 2:
            raise ValidationError(f"bad vector entry {part!r}; expected re,im")
        try:
            out.append(complex(float(nums[0]), float(nums[1])))
        except ValueError as exc:
            raise ValidationError(f"bad number in {part!r}") from exc
    return np.array(out)


def load_document(text: str) -> dict:
    """Inline JSON object or a path to a JSON file."""
    text = text.strip()
    try:
        if text.startswith("{"):
            return json.loads(text)
        with open(text) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {text}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc


def _schedule(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad schedule {text!r}") from exc


def _config(args) -> bloch.EstimateConfig:
    return bloch.EstimateConfig(samples=args.samples, seed=args.seed, schedule=_schedule(args.schedule))


def _witness(z) -> Optional[list]:
    if z is None:
        return None
    return [[float(complex(x).real), float(complex(x).imag)] for x in np.ravel(z)]


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


# ----------------------------------------------------------------------------
# Commands; each returns (value, witness, extra, warnings)
# ----------------------------------------------------------------------------


def cmd_domain_info(args):
    spec = domains.parse_domain(args.spec)
    extra = {
        "domain": str(spec),
        "dimension": domains.dimension(spec),
        "rank": domains.rank(spec),
        "bloch_constant": domains.bloch_constant(spec),
        "inner_radius": domains.inner_radius(spec),
    }
    return extra["bloch_constant"], None, extra, []


def cmd_metric(args):
    spec = domains.parse_domain(args.domain)
    z = parse_vector(args.point)
    u = parse_vector(args.u)
    v = parse_vector(args.v) if args.v else None
    A = domains.metric_matrix(spec, z)
    h = domains.metric_form(spec, z, u, v)
    extra = {"re": float(h.real), "im": float(h.imag), "matrix": [[[float(x.real), float(x.imag)] for x in row] for row in A]}
    return (float(h.real) if v is None else None), z, extra, []


def _maybe_dump(args, spec, config):
    if getattr(args, "dump_samples", None):
        pts = [p for level in bloch._candidate_points(spec, config) for p in level]
        with open(args.dump_samples, "w") as fh:
            json.dump([_witness(p) for p in pts], fh)


def _report(rep: bloch.EstimateReport, extra=None):
    doc = rep.to_document()
    doc.pop("value")
    doc.pop("witness")
    doc.update(extra or {})
    return rep.value, rep.witness, doc, list(rep.warnings)


def cmd_seminorm(args):
    spec = domains.parse_domain(args.domain)
    f = ExprMap(args.function, domains.dimension(spec))
    config = _config(args)
    _maybe_dump(args, spec, config)
    rep = bloch.bloch_seminorm(f, spec, config, args.normalization)
    f0 = complex(f.evaluate(np.zeros(domains.dimension(spec)))[0])
    return _report(rep, {"bloch_norm": abs(f0) + rep.value, "normalization": args.normalization})


def cmd_dilation(args):
    spec = domains.parse_domain(args.domain)
    phi = maps.from_document(load_document(args.map))
    z = parse_vector(args.point) if args.point else np.zeros(domains.dimension(spec), dtype=complex)
    return bloch.local_dilation(phi, spec, z), z, {"map": phi.kind}, []


def cmd_bergman_constant(args):
    spec = domains.parse_domain(args.domain)
    phi = maps.from_document(load_document(args.map))
    config = _config(args)
    _maybe_dump(args, spec, config)
    return _report(bloch.bergman_constant(phi, spec, config), {"map": phi.kind})


def cmd_distance(args):
    spec = domains.parse_domain(args.domain)
    z, w = parse_vector(args.from_), parse_vector(args.to)
    if args.normalization == "zhu":
        if not isinstance(spec, (domains.Disk, domains.Ball)):
            raise UnsupportedError("the unscaled distance exists only on the disk and the ball")
        d = domains.zhu_distance_ball(z, w, domains.dimension(spec))
    else:
        d = domains.bergman_distance(spec, z, w)
    return d, None, {"normalization": args.normalization}, []


def cmd_norm_bounds(args):
    spec = domains.parse_domain(args.domain)
    phi = maps.from_document(load_document(args.map))
    nb = bloch.composition_norm_bounds(phi, spec, _config(args))
    return nb.upper, nb.bergman.witness, nb.to_document(), list(nb.bergman.warnings)


def cmd_isometry_check(args):
    spec = domains.parse_domain(args.domain)
    if not isinstance(spec, domains.Disk):
        raise ValidationError("isometry-check works on the disk; use neccond for product domains")
    phi = maps.from_document(load_document(args.map))
    rep = isometry.check_disk_isometry(phi, _config(args), tol=args.tol)
    return rep.beta_hat.value, rep.beta_hat.witness, rep.to_document(), list(rep.warnings)


def cmd_neccond(args):
    spec = domains.parse_domain(args.domain)
    phi = maps.from_document(load_document(args.map))
    rep = isometry.check_necessary_conditions(phi, spec, _config(args), tol=args.tol)
    return None, None, rep.to_document(), []


def cmd_spectrum(args):
    sym = spectrum.PolydiskSymbol.from_document(load_document(args.symbol))
    res = spectrum.spectrum(sym)
    return None, None, res.to_document(), []


# ----------------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--samples", type=int, default=20000)
    common.add_argument("--schedule", default="0.5,0.9,0.99,0.999", help="comma-separated radius caps")

    p = argparse.ArgumentParser(prog="blochlab", description="Bergman geometry and Bloch-space composition operators")
    sub = p.add_subparsers(dest="command", required=True)

    dom = sub.add_parser("domain", help="domain descriptors")
    dsub = dom.add_subparsers(dest="action", required=True)
    info = dsub.add_parser("info", parents=[common], help="dimension, rank, Bloch constant, inner radius")
    info.add_argument("spec")
    info.set_defaults(func=cmd_domain_info, name="domain info")

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func, name=name)
        return sp

    sp = add("metric", cmd_metric, "Bergman metric form H_z(u, v)")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--u", required=True)
    sp.add_argument("--v")

    sp = add("seminorm", cmd_seminorm, "Bloch semi-norm estimate of an expression")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--function", required=True)
    sp.add_argument("--normalization", choices=("metric", "zhu"), default="metric")
    sp.add_argument("--dump-samples", dest="dump_samples")

    sp = add("dilation", cmd_dilation, "local Bergman dilation of a map at a point")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--map", required=True)
    sp.add_argument("--point")

    sp = add("bergman-constant", cmd_bergman_constant, "Bergman constant estimate of a self-map")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--map", required=True)
    sp.add_argument("--dump-samples", dest="dump_samples")

    sp = add("distance", cmd_distance, "Bergman distance")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--from", dest="from_", required=True)
    sp.add_argument("--to", required=True)
    sp.add_argument("--normalization", choices=("metric", "zhu"), default="metric")

    sp = add("norm-bounds", cmd_norm_bounds, "bounds on the norm of the composition operator")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--map", required=True)

    sp = add("isometry-check", cmd_isometry_check, "isometry conditions for a disk symbol")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--map", required=True)
    sp.add_argument("--tol", type=float, default=1e-6, help="tolerance for comparing estimates with their targets")

    sp = add("neccond", cmd_neccond, "necessary isometry conditions on a product domain")
    sp.add_argument("--domain", required=True)
    sp.add_argument("--map", required=True)
    sp.add_argument("--tol", type=float, default=1e-6, help="tolerance for comparing estimates with their targets")

    sp = add("spectrum", cmd_spectrum, "spectrum of an isometric polydisk symbol")
    sp.add_argument("--symbol", required=True)
    return p


def _render_table(doc: dict) -> str:
    rows = []

    def walk(prefix, obj):
        if isinstance(obj, dict) and obj:
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else k, obj[k])
        else:
            rows.append((prefix, json.dumps(obj, sort_keys=True)))

    walk("", doc)
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def _emit(doc: dict, fmt: str, stream):
    if fmt == "table":
        stream.write(_render_table(doc) + "\n")
    else:
        stream.write(json.dumps(doc, sort_keys=True) + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    config_echo = {"samples": args.samples, "seed": args.seed, "schedule": args.schedule, "format": args.format}
    if hasattr(args, "tol"):
        config_echo["tol"] = args.tol
    try:
        if args.samples < 1:
            raise ValidationError("--samples must be >= 1")
        value, witness, extra, warns = args.func(args)
    except SingularityError as exc:
        stderr.write(f"singularity: {exc}\n")
        return EXIT_SINGULAR
    except (ValidationError, UnsupportedError, ClassificationRequired) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except BlochLabError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    doc = {
        "command": args.name,
        "value": _num(value),
        "witness": _witness(witness),
        "extra": extra,
        "seed": args.seed,
        "config": config_echo,
        "warnings": [str(w) for w in warns],
    }
    _emit(doc, args.format, stdout)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

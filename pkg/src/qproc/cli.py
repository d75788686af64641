"""Command line front end.

Exit codes: 0 success, 1 a tolerance check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from fractions import Fraction

import numpy as np

from qproc import gallery
from qproc.bounds import UnitarySet, dimension_bound
from qproc.fidelity import epsilon_g, optimal_program, process_fidelity, process_fidelity_unitary
from qproc.formats import FormatError, load_json, matrix_from_json, processor_from_json, unitary_set_from_json
from qproc.linalg import TOL_FID, TOL_UNIT, DimensionError, ValidationError
from qproc.processor import (
    Channel,
    Processor,
    mixed_program_channel,
    program_kraus,
    success_probability,
    validate,
)
from qproc.sampling import random_unitary

SCHEMA_VERSION = 1
SWEEP_HEADERS = ["theta", "F_simulated", "F_closed_form", "F_optimal"]


class InputError(Exception):
    pass


def tolerance_scale() -> float:
    raw = os.environ.get("QPROC_TOLERANCE_SCALE", "1")
    try:
        scale = float(raw)
    except ValueError:
        raise InputError(f"QPROC_TOLERANCE_SCALE must be a number, got {raw!r}")
    if not scale > 0:
        raise InputError("QPROC_TOLERANCE_SCALE must be positive")
    return scale


_ANGLE = re.compile(
    r"^\s*(?P<sign>[-+]?)\s*(?P<coef>\d+(?:\.\d*)?(?:/\d+)?)?\s*\*?\s*(?P<pi>pi)?\s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$"
)


def parse_angle(text: str) -> float:
    """Radians from ``0.3``, ``pi``, ``-pi/8``, ``3pi/4``, ``3*pi/4`` or ``1/3``."""
    m = _ANGLE.match(text)
    if not m or (m["coef"] is None and m["pi"] is None):
        try:
            return float(text)
        except ValueError:
            raise InputError(f"cannot parse angle {text!r}")
    coef = Fraction(m["coef"]) if m["coef"] else Fraction(1)
    if m["den"]:
        coef /= Fraction(m["den"])
    if m["sign"] == "-":
        coef = -coef
    return float(coef) * math.pi if m["pi"] else float(coef)


def parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"grid must be start:stop:points, got {text!r}")
    start, stop = parse_angle(parts[0]), parse_angle(parts[1])
    try:
        points = int(parts[2])
    except ValueError:
        raise InputError(f"grid points must be an integer, got {parts[2]!r}")
    if points < 1:
        raise InputError("grid needs at least one point")
    return np.linspace(start, stop, points)


def _params(text: str) -> dict:
    out = {}
    for item in filter(None, text.split(",")):
        if "=" not in item:
            raise InputError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = int(v)
        except ValueError:
            raise InputError(f"parameter {k} must be an integer")
    return out


def _need(params: dict, *keys):
    missing = [k for k in keys if k not in params]
    if missing:
        raise InputError(f"missing parameter(s): {', '.join(missing)}")
    return [params[k] for k in keys]


def _read_json(path: str):
    try:
        return load_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}")


def resolve_processor(spec: str) -> tuple[str, dict, Processor]:
    """Builtin gallery names first, then files (``file:`` prefix for paths with ':')."""
    name, _, rest = spec.partition(":")
    if name == "rotation":
        (n,) = _need(_params(rest), "N")
        return name, {"N": n}, gallery.rotation_processor(n)
    if name == "vc":
        d, n = _need(_params(rest), "D", "N")
        return name, {"D": d, "N": n}, gallery.vidal_cirac_processor(d, n)
    if name == "segmented":
        d, n = _need(_params(rest), "D", "N")
        return name, {"D": d, "N": n}, gallery.segmented_processor(d, n)
    if name == "swap":
        (d,) = _need(_params(rest), "D")
        return name, {"D": d}, gallery.swap_processor(d)
    if name == "cnot" and not rest:
        return name, {}, gallery.cnot_processor()
    if name == "cu":
        uset = unitary_set_from_json(_read_json(rest))
        return name, {}, gallery.controlled_u_processor(uset.members)
    path = rest if name == "file" else spec
    return "file", {}, processor_from_json(_read_json(path))


def resolve_program(spec: str | None, p: Processor) -> np.ndarray:
    """Program vector (1-d) or program density matrix (2-d)."""
    n = p.program_dim
    if spec is None:
        spec = "basis:0"
    name, _, rest = spec.partition(":")
    if name == "theta":
        return gallery.theta_program(n, parse_angle(rest))
    if name == "vc":
        return gallery.vc_program(n, parse_angle(rest))
    if name == "basis":
        k = int(rest)
        if not 0 <= k < n:
            raise InputError(f"basis index {k} out of range for program dimension {n}")
        return np.eye(n, dtype=complex)[k]
    path = rest if name == "file" else spec
    m = matrix_from_json(_read_json(path))
    if m.shape == (n, 1):
        return m[:, 0]
    if m.shape == (n, n):
        return m
    raise DimensionError(f"program file has shape {m.shape}, processor expects {n}x1 or {n}x{n}")


def resolve_target(spec: str | None, d: int) -> np.ndarray:
    if spec is None:
        raise InputError("--target is required")
    name, _, rest = spec.partition(":")
    if name == "utheta":
        return gallery.u_theta(parse_angle(rest))
    if name == "phase":
        dim, _, angle = rest.partition(",")
        return gallery.phase_shift_unitary(int(dim), parse_angle(angle))
    if name == "pauli":
        table = dict(gallery.pauli_set())
        if rest.upper() not in table:
            raise InputError(f"unknown Pauli {rest!r}")
        return table[rest.upper()]
    if name == "identity":
        return np.eye(d, dtype=complex)
    path = rest if name == "file" else spec
    return matrix_from_json(_read_json(path))


def resolve_set(spec: str) -> UnitarySet:
    if spec == "pauli":
        labels, members = zip(*gallery.pauli_set())
        return UnitarySet(list(members), list(labels))
    name, _, rest = spec.partition(":")
    return unitary_set_from_json(_read_json(rest if name == "file" else spec))


def channel_for(p: Processor, program: np.ndarray) -> Channel:
    if program.ndim == 2:
        return mixed_program_channel(p, program)
    return program_kraus(p, program)


def _num(x):
    if x is None:
        return None
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(f"{float(x):.12g}")


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (float, int, np.floating, np.integer, bool, np.bool_)):
        return _num(obj)
    return obj


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return v


def emit(args, command: str, meta: dict, rows: list[dict], headers: list[str]) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(headers)
        for row in rows:
            writer.writerow([_csv_cell(row.get(h)) for h in headers])
        text = buf.getvalue()
    else:
        doc = {"schema_version": SCHEMA_VERSION, "command": command, **_clean(meta), "rows": _clean(rows)}
        text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    _, _, p = resolve_processor(args.processor)
    report = validate(p, tol=TOL_UNIT * tolerance_scale())
    meta = {"processor": args.processor, "data_dim": p.data_dim, "program_dim": p.program_dim}
    row = report.as_dict()
    emit(args, "validate", meta, [row], list(row))
    return 0 if report.passed else 1


def cmd_fidelity(args) -> int:
    _, _, p = resolve_processor(args.processor)
    program = resolve_program(args.program, p)
    u = resolve_target(args.target, p.data_dim)
    channel = channel_for(p, program)
    closed = process_fidelity_unitary(u, channel)
    choi = process_fidelity(Channel.unitary(u), channel)
    diff = closed - choi
    tol = TOL_FID * tolerance_scale()
    row = {"fidelity_closed_form": closed, "fidelity_choi": choi, "difference": diff}
    meta = {"processor": args.processor, "program": args.program or "basis:0", "target": args.target, "tolerance": tol}
    emit(args, "fidelity", meta, [row], list(row))
    return 0 if abs(diff) <= tol else 1


def cmd_optimal_program(args) -> int:
    _, _, p = resolve_processor(args.processor)
    u = resolve_target(args.target, p.data_dim)
    res = optimal_program(p, u)
    rows = [{"index": k, "re": a.real, "im": a.imag} for k, a in enumerate(res.program)]
    meta = {
        "processor": args.processor,
        "target": args.target,
        "fidelity": res.fidelity,
        "eigenvalues": res.eigenvalues,
    }
    emit(args, "optimal-program", meta, rows, ["index", "re", "im"])
    return 0


def _sweep_setup(kind: str, params: dict, p: Processor, args):
    """Target family, simulated program and closed form for one sweep."""
    d, n = p.data_dim, p.program_dim
    if kind == "rotation":
        return (gallery.u_theta, lambda t: gallery.theta_program(n, t),
                lambda t: gallery.rotation_fidelity_closed_form(n, t))
    if kind == "vc":
        return (lambda t: gallery.phase_shift_unitary(d, t), lambda t: gallery.vc_program(n, t),
                lambda t: gallery.vc_fidelity_closed_form(d, n, t))
    if kind == "segmented":
        return (lambda t: gallery.phase_shift_unitary(d, t),
                lambda t: np.eye(n, dtype=complex)[gallery.segment_index(n, t)],
                lambda t: gallery.segmented_fidelity_closed_form(d, n, t))
    family = args.family or ("utheta" if d == 2 else "phase")
    if family == "utheta":
        if d != 2:
            raise InputError("utheta targets need a qubit data register")
        target = gallery.u_theta
    elif family == "phase":
        target = lambda t: gallery.phase_shift_unitary(d, t)
    else:
        raise InputError(f"unknown target family {family!r}")
    program = resolve_program(args.program, p)
    closed = (lambda t: 1 / d**2) if kind == "swap" else None
    return target, (lambda t: program), closed


def cmd_sweep(args) -> int:
    kind, params, p = resolve_processor(args.processor)
    thetas = parse_grid(args.grid)
    target, program_at, closed = _sweep_setup(kind, params, p, args)
    rows = []
    worst = 0.0
    for t in thetas:
        u = target(t)
        sim = process_fidelity_unitary(u, channel_for(p, program_at(t)))
        cf = closed(t) if closed else None
        if cf is not None:
            worst = max(worst, abs(sim - cf))
        rows.append({"theta": t, "F_simulated": sim, "F_closed_form": cf, "F_optimal": optimal_program(p, u).fidelity})
    tol = TOL_FID * tolerance_scale()
    meta = {"processor": args.processor, "grid": args.grid, "max_closed_form_difference": worst, "tolerance": tol}
    emit(args, "sweep", meta, rows, SWEEP_HEADERS)
    return 0 if worst <= tol else 1


def cmd_bounds(args) -> int:
    uset = resolve_set(args.set)
    eps_list = [float(e) for e in args.epsilon.split(",")]
    if any(not 0 <= e <= 1 for e in eps_list):
        raise InputError("epsilon must lie in [0, 1]")
    reports = [dimension_bound(uset, e, args.q_variant) for e in eps_list]
    rows = [
        {"epsilon": r.epsilon, "y_max": r.y_max, "q": r.q_max, "K_q": r.K_q, "min_dimension": r.min_dimension}
        for r in reports
    ]
    meta = {"set": args.set, "members": len(uset), "dim": uset.dim, "q_variant": args.q_variant,
            "reports": [r.as_dict() for r in reports]}
    emit(args, "bounds", meta, rows, ["epsilon", "y_max", "q", "K_q", "min_dimension"])
    return 0


def cmd_compare(args) -> int:
    d, n = args.data_dim, args.program_dim
    if d < 2 or n < 1:
        raise InputError("need --data-dim >= 2 and --program-dim >= 1")
    thetas = parse_grid(args.grid)
    vc = gallery.vidal_cirac_processor(d, n)
    seg = gallery.segmented_processor(d, n)
    vc_worst = seg_worst = 0.0
    p_success = 1.0
    for t in thetas:
        u = gallery.phase_shift_unitary(d, t)
        c = program_kraus(vc, gallery.vc_program(n, t))
        vc_worst = max(vc_worst, 1 - process_fidelity_unitary(u, c))
        p_success = min(p_success, success_probability(c, u))
        c = program_kraus(seg, np.eye(n)[gallery.segment_index(n, t)])
        seg_worst = max(seg_worst, 1 - process_fidelity_unitary(u, c))
    vc_bound = 4 * (d - 1) / (n * d**2)
    seg_bound = gallery.segmented_infidelity_bound(d, n)
    rows = [
        {"processor": "vc", "worst_infidelity": vc_worst, "closed_form_worst": vc_bound, "p_success": p_success},
        {"processor": "segmented", "worst_infidelity": seg_worst, "closed_form_worst": seg_bound, "p_success": 1.0},
    ]
    meta = {"data_dim": d, "program_dim": n, "grid": args.grid, "segmented_better": seg_worst < vc_worst,
            "vc_p_success_closed_form": gallery.vc_success_probability(n)}
    emit(args, "compare", meta, rows, ["processor", "worst_infidelity", "closed_form_worst", "p_success"])
    tol = TOL_FID * tolerance_scale()
    ok = vc_worst <= vc_bound + tol and seg_worst <= seg_bound + tol
    return 0 if ok else 1


def cmd_accuracy(args) -> int:
    """Estimate of the worst-case best fidelity over sampled or listed targets."""
    _, _, p = resolve_processor(args.processor)
    if args.set:
        targets = resolve_set(args.set).members
        source = args.set
    else:
        rng = np.random.default_rng(args.seed)
        targets = [random_unitary(p.data_dim, rng) for _ in range(args.samples)]
        source = f"haar:{args.samples}"
    eps = epsilon_g(p, targets)
    meta = {"processor": args.processor, "targets": source, "seed": args.seed, "estimate": not bool(args.set)}
    row = {"epsilon_g": eps, "samples": len(targets)}
    emit(args, "accuracy", meta, [row], list(row))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qproc", description="Programmable quantum processor toolkit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check the block relations of a processor")
    s.add_argument("--processor", required=True)
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("fidelity", parents=[common], help="process fidelity of an induced channel")
    s.add_argument("--processor", required=True)
    s.add_argument("--program")
    s.add_argument("--target", required=True)
    s.set_defaults(func=cmd_fidelity)

    s = sub.add_parser("optimal-program", parents=[common], help="best program for a target")
    s.add_argument("--processor", required=True)
    s.add_argument("--target", required=True)
    s.set_defaults(func=cmd_optimal_program)

    s = sub.add_parser("sweep", parents=[common], help="fidelity over a theta grid")
    s.add_argument("--processor", required=True)
    s.add_argument("--program")
    s.add_argument("--family", choices=["utheta", "phase"])
    s.add_argument("--grid", default="0:2*pi:101")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("bounds", parents=[common], help="program dimension lower bound")
    s.add_argument("--set", required=True)
    s.add_argument("--epsilon", required=True, help="one value or a comma separated list")
    s.add_argument("--q-variant", choices=["general", "printed"], default="general")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("compare", parents=[common], help="probabilistic vs segmented phase processor")
    s.add_argument("--data-dim", type=int, required=True)
    s.add_argument("--program-dim", type=int, required=True)
    s.add_argument("--grid", default="0:2*pi:1000")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("accuracy", parents=[common], help="epsilon_G over a target set or Haar samples")
    s.add_argument("--processor", required=True)
    s.add_argument("--set")
    s.add_argument("--samples", type=int, default=200)
    s.set_defaults(func=cmd_accuracy)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FormatError, DimensionError, ValidationError, ValueError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

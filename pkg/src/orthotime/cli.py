"""Command line front-end.

Exit codes: 0 success, 2 parse error, 3 validation error, 4 computation error.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bounds, minorant_search
from .config import DEFAULT_TOLERANCES, Tolerances
from .dynamics import orthogonalization_time
from .exceptions import ComputationError, ParseError, SpeedLimitError, ValidationError
from .io import REPORT_KIND, reject_json_constant, fmt_human, fmt_machine, state_from_dict
from .report import AnalysisReport, analyze
from .spectral_state import moments, random_discrete_state, shift_energy
from .validation import check_positive_int

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_COMPUTATION = 0, 2, 3, 4


def _read_document(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text, parse_constant=reject_json_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    if isinstance(doc, dict) and doc.get("kind") == REPORT_KIND:
        doc = doc.get("state")
    return doc


def _tolerances(args) -> Tolerances:
    return DEFAULT_TOLERANCES.with_(horizon_multiplier=args.horizon_multiplier,
                                   eps_orth=args.eps_orth,
                                   oversample=args.oversample,
                                   n_alpha=args.n_alpha)


def _load(args):
    raw = _read_document(args.state_file)
    if args.hbar_override is not None and isinstance(raw, dict):
        raw = copy.deepcopy(raw)
        raw["hbar"] = args.hbar_override
    return state_from_dict(raw), raw


def cmd_analyze(args) -> AnalysisReport:
    state, raw = _load(args)
    return analyze(state, raw, _tolerances(args))


def cmd_intervals(args) -> str:
    state, _ = _load(args)
    m = moments(state)
    n = check_positive_int(args.n_alpha, "n_alpha", minimum=2)
    sweep = bounds.alpha_sweep(m, state.hbar, n, _tolerances(args))
    union = sweep.union()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "lo", "hi", "empty_flag"])
    for a, lo, hi, empty in zip(sweep.alphas, sweep.lo, sweep.hi, sweep.empty):
        if empty:
            w.writerow([fmt_machine(a), "", "", 1])
        else:
            w.writerow([fmt_machine(a), fmt_machine(lo), fmt_machine(hi), 0])
    if union:
        w.writerow(["union", fmt_machine(union.inf), fmt_machine(union.sup), 0])
    else:
        w.writerow(["union", "", "", 1])
    return buf.getvalue()


def cmd_minorant(args) -> dict:
    tol = _tolerances(args)
    if args.action == "verify":
        check = bounds.verify_quadratic_minorant(args.alpha, args.grid_span, args.grid_points, tol)
        return {"action": "verify", "alpha": check.alpha, "min_value": check.min_value,
                "argmins": list(check.argmins), "expected_argmins":
                [-check.alpha - math.pi / 2, -check.alpha + math.pi / 2],
                "tail_certified": check.tail_certified, "tail_margin": check.tail_margin}
    state, _ = _load(args)
    m = moments(state)
    if args.shift_nonneg:
        state = shift_energy(state, -m.min_energy)
        m = moments(state)
    opt = minorant_search.optimize_family(args.family, args.domain, m, state.hbar, tol)
    cert = opt.certificate
    closed = (bounds.mt_bound(m, state.hbar) if cert.family is minorant_search.Family.QUADRATIC
              else bounds.ml_bound(m, state.hbar))
    return {"action": "search", "family": str(cert.family), "domain": str(cert.domain),
            "coefficients": list(cert.coefficients), "amplitude": cert.amplitude,
            "phase": cert.phase, "certified_slack": cert.certified_slack,
            "touch_points": list(cert.touch_points), "energy_shift": opt.energy_shift,
            "bound": opt.bound, "closed_form_bound": closed}


SWEEP_FIELDS = ("state_id", "delta_e", "gap", "mt", "ml", "t0_status", "t0", "slack")


def cmd_sweep(args) -> str:
    count = check_positive_int(args.count, "count")
    n_levels = check_positive_int(args.levels, "levels", minimum=2)
    if not args.energy_max > args.energy_min:
        raise ValidationError("energy-max must exceed energy-min")
    tol = _tolerances(args)
    rng = np.random.default_rng(args.seed)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_FIELDS)
    for k in range(count):
        state = random_discrete_state(rng, n_levels, (args.energy_min, args.energy_max),
                                      weights=args.weights, hbar=args.hbar)
        m = moments(state)
        mt = bounds.mt_bound(m, state.hbar)
        ml = bounds.ml_bound(m, state.hbar)
        try:
            res = orthogonalization_time(state, tolerances=tol)
            status, t0 = str(res.status), res.t0
        except ComputationError:
            status, t0 = "ZeroDispersion", None
        slack = None if t0 is None else t0 - max(mt, ml)
        w.writerow([k, fmt_machine(m.delta_e), fmt_machine(m.mean - m.min_energy),
                    fmt_machine(mt), fmt_machine(ml), status, fmt_machine(t0),
                    fmt_machine(slack)])
    return buf.getvalue()


def _json_ready(obj):
    if isinstance(obj, float) and math.isinf(obj):
        return fmt_machine(obj)
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    return obj


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--hbar-override", type=float, default=None,
                        help="replace the file's hbar")
    common.add_argument("--horizon-multiplier", type=float,
                        default=DEFAULT_TOLERANCES.horizon_multiplier,
                        help="search horizon in units of the MT bound (default 50)")
    common.add_argument("--eps-orth", type=float, default=DEFAULT_TOLERANCES.eps_orth,
                        help="|S| threshold for orthogonality (default 1e-10)")
    common.add_argument("--oversample", type=int, default=DEFAULT_TOLERANCES.oversample,
                        help="grid points per fastest period (default 16)")
    common.add_argument("--n-alpha", type=int, default=DEFAULT_TOLERANCES.n_alpha,
                        help="phase samples for the interval union (default 100000)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", choices=("report", "csv", "json"), default="report")

    p = argparse.ArgumentParser(prog="orthotime",
                                description="Orthogonalization times and quantum speed limits")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="full analysis of a state file")
    a.add_argument("state_file")

    i = sub.add_parser("intervals", parents=[common],
                       help="excluded interval per phase, as CSV, plus the union")
    i.add_argument("state_file")

    mi = sub.add_parser("minorant", help="cosine-minorant certificates")
    msub = mi.add_subparsers(dest="action", required=True)
    v = msub.add_parser("verify", parents=[common], help="certify gamma_alpha >= 0")
    v.add_argument("--alpha", type=float, default=0.0)
    v.add_argument("--grid-span", type=float, default=4 * math.pi)
    v.add_argument("--grid-points", type=int, default=1_000_000)
    s = msub.add_parser("search", parents=[common], help="optimize a minorant family")
    s.add_argument("state_file")
    s.add_argument("--family", choices=("linear", "quadratic"), default="quadratic")
    s.add_argument("--domain", choices=("full_line", "half_line_nonneg"), default=None)
    s.add_argument("--shift-nonneg", action="store_true",
                   help="shift energies so the lowest occupied level is 0 first")

    sw = sub.add_parser("sweep", parents=[common], help="bulk bound checks on random states")
    sw.add_argument("--levels", type=int, default=2)
    sw.add_argument("--energy-min", type=float, default=-5.0)
    sw.add_argument("--energy-max", type=float, default=5.0)
    sw.add_argument("--count", type=int, default=100)
    sw.add_argument("--weights", choices=("random", "equal", "symmetric"), default="random")
    sw.add_argument("--hbar", type=float, default=1.0)
    return p


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            report = cmd_analyze(args)
            text = {"report": report.render, "csv": report.to_csv,
                    "json": report.to_json}[args.output]()
        elif args.command == "intervals":
            text = cmd_intervals(args)
        elif args.command == "minorant":
            if args.action == "search" and args.domain is None:
                args.domain = "full_line" if args.family == "quadratic" else "half_line_nonneg"
            result = cmd_minorant(args)
            if args.output == "report":
                text = "".join(f"{k:18}: {_human(v)}\n" for k, v in result.items())
            else:
                text = json.dumps(_json_ready(result), indent=2) + "\n"
        else:
            text = cmd_sweep(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SpeedLimitError as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    out.write(text)
    return EXIT_OK


def _human(v) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(fmt_human(x) for x in v) + "]"
    if isinstance(v, str):
        return v
    return fmt_human(v)


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

"""Command-line front end.

Subcommands: curve-info, correlators, divisor, jet, verify-theta.  Input is
the matrix-polynomial JSON schema; output is a deterministic JSON report on
stdout or --output.  Exit status: 0 success, 1 verification failure, 2 input
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from .correlators import CorrelatorEngine, correlator_n, correlator_pair
from .curve import characteristic_data
from .divisor import DivisorError, d_polynomial, expected_d_degree, pole_divisor
from .jets import jet_from_projectors, validate_jet
from .periods import PeriodError
from .rationals import format_rational
from .serialize import (
    ParseError,
    correlator_table_to_json,
    divisor_points_to_json,
    jet_to_json,
    parse_matrix_polynomial,
)
from .theta import ThetaError

KMAX_CAP = 16
MAXN_CAP = 6


@dataclass
class JobSpec:
    command: str
    input_path: str
    output_path: str | None = None
    kmax: int = 2
    max_n: int = 2
    order: int = 3
    tol: float = 1e-9
    indices: str | None = None
    seed: int = 0
    extra: dict = field(default_factory=dict)


def _load_input(job: JobSpec):
    with open(job.input_path) as fh:
        data = json.load(fh)
    return parse_matrix_polynomial(data)


def _parse_indices(text: str):
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, k = chunk.split(",")
        pairs.append((int(a), int(k)))
    if len(pairs) < 2:
        raise ValueError("need at least two index pairs a,k")
    return tuple(pairs)


def _cmd_curve_info(job: JobSpec) -> dict:
    w = _load_input(job)
    curve = characteristic_data(w, with_diagnostics=True)
    return {
        "n": curve.n,
        "m": curve.m,
        "genus": curve.genus,
        "char_coefficients": [
            [format_rational(c) for c in curve.a(i).coeffs] for i in range(1, curve.n + 1)
        ],
        "char_degrees": [curve.a(i).degree() for i in range(1, curve.n + 1)],
        "diagnostics": [
            {"name": d.name, "passed": d.passed, "fatal": d.fatal, "detail": d.detail}
            for d in curve.diagnostics
        ],
    }


def _cmd_correlators(job: JobSpec) -> dict:
    w = _load_input(job)
    if job.kmax > KMAX_CAP or job.max_n > MAXN_CAP:
        raise ParseError(f"caps: kmax <= {KMAX_CAP}, max-n <= {MAXN_CAP}")
    engine = CorrelatorEngine(w)
    tables = []
    if job.indices:
        pairs = _parse_indices(job.indices)
        sheets = tuple(a for a, _ in pairs)
        kneed = max(k for _, k in pairs)
        if len(pairs) == 2:
            table = correlator_pair(w, sheets[0], sheets[1], kneed, engine)
        else:
            table = correlator_n(w, sheets, kneed, engine)
        return {
            "N": len(pairs),
            "indices": [[a, k] for a, k in pairs],
            "value": format_rational(table.value(pairs)),
        }
    import itertools

    for a1 in range(1, w.n + 1):
        for a2 in range(a1, w.n + 1):
            tables.append(correlator_table_to_json(correlator_pair(w, a1, a2, job.kmax, engine)))
    for npts in range(3, job.max_n + 1):
        for sheets in itertools.combinations_with_replacement(range(1, w.n + 1), npts):
            tables.append(correlator_table_to_json(correlator_n(w, sheets, job.kmax, engine)))
    return {"tables": tables}


def _cmd_divisor(job: JobSpec) -> dict:
    w = _load_input(job)
    points = pole_divisor(w, tol=job.tol)
    dpoly = d_polynomial(w)
    return {
        "d_polynomial": [format_rational(c) for c in dpoly.coeffs],
        "d_degree": dpoly.degree(),
        "expected_degree": expected_d_degree(w),
        "points": divisor_points_to_json(points),
    }


def _cmd_jet(job: JobSpec) -> dict:
    w = _load_input(job)
    jet = jet_from_projectors(w)
    residues = validate_jet(jet)
    bad = [r for r in residues if r.residue != 0]
    report = jet_to_json(jet)
    report["constraints_checked"] = len(residues)
    report["constraints_failed"] = [
        {"name": r.name, "indices": list(r.indices), "residue": format_rational(r.residue)}
        for r in bad
    ]
    return report


def _cmd_verify_theta(job: JobSpec) -> dict:
    from .verify import verify_main_theorem

    w = _load_input(job)
    kmax = job.extra.get("kmax_by_n") or job.kmax
    report = verify_main_theorem(w, kmax=kmax, tol=max(job.tol, 1e-12))
    return report.to_json_dict()


_COMMANDS = {
    "curve-info": _cmd_curve_info,
    "correlators": _cmd_correlators,
    "divisor": _cmd_divisor,
    "jet": _cmd_jet,
    "verify-theta": _cmd_verify_theta,
}


def run(job: JobSpec) -> tuple[int, dict]:
    """Dispatch a job; returns (exit_status, report)."""
    threads = os.environ.get("SPECTRAL_TAU_THREADS")
    if threads is not None:
        try:
            if int(threads) < 1:
                raise ValueError
        except ValueError:
            return 2, {"errors": [f"SPECTRAL_TAU_THREADS must be a positive integer, got {threads!r}"]}
    try:
        report = _COMMANDS[job.command](job)
    except (ParseError, FileNotFoundError, json.JSONDecodeError, ValueError, KeyError) as exc:
        return 2, {"errors": [str(exc)]}
    except (DivisorError, PeriodError, ThetaError) as exc:
        return 1, {"errors": [str(exc)]}
    if job.command == "verify-theta" and not report.get("success", False):
        return 1, report
    return 0, report


def _json_default(obj):
    import numpy as np

    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _emit(report: dict, output_path: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, default=_json_default) + "\n"
    if output_path:
        with open(output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-tau",
        description="Exact spectral-curve correlators and theta-function verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="matrix polynomial JSON file")
        p.add_argument("--output", default=None, help="write the JSON report here")
        p.add_argument("--kmax", type=int, default=2)
        p.add_argument("--max-n", type=int, default=2, dest="max_n")
        p.add_argument("--order", type=int, default=3)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--indices", default=None,
                       help='index pairs "a1,k1;a2,k2;..." for a single correlator')
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized diagnostics (reserved)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = JobSpec(
        command=args.command,
        input_path=args.input,
        output_path=args.output,
        kmax=args.kmax,
        max_n=args.max_n,
        order=args.order,
        tol=args.tol,
        indices=args.indices,
        seed=args.seed,
    )
    status, report = run(job)
    _emit(report, job.output_path)
    return status


if __name__ == "__main__":
    sys.exit(main())

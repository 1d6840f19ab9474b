"""Command-line front end.

Subcommands: ``sev``, ``fidelity``, ``spoof``, ``bounds``, ``sample`` and
``figure-data``.  Exit status is 0 on success, 2 when an argument or input
violates a precondition and 3 when the fidelity optimizer does not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .bounds import IDEAL, BoundsRegion, fidelity_ceiling_surface
from .exceptions import FidelityConvergenceError
from .figures import FIGURES
from .metrics import fidelity_discrete, fidelity_gaussian, sev_discrete, sev_gaussian
from .sampler import (
    DISTRIBUTIONS,
    SampleConfig,
    coverage_report,
    sample_region,
    write_records_csv,
    write_summary_json,
)
from .serialization import load_state, state_to_dict
from .states import (
    DiscreteBaseState,
    make_box_base,
    make_roots_of_unity_state,
    make_spike_state,
    make_three_vector_state,
    make_two_vector_state,
)

OUTPUT_DIR_ENV = "GKPSEV_OUTPUT_DIR"
EXIT_VALIDATION = 2
EXIT_CONVERGENCE = 3


class UsageError(ValueError):
    pass


def _n_prime_arg(text: str):
    text = text.strip().lower()
    if text == IDEAL:
        return IDEAL
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"n_prime must be an integer or 'ideal', got {text!r}")


def _n_prime_list(text: str):
    return [_n_prime_arg(part) for part in text.split(",") if part.strip()]


def _metrics(state, N=None, target_V=None, target_N=None) -> dict:
    if isinstance(state, DiscreteBaseState):
        if N is None:
            raise UsageError("--N (number of periods on each side) is required for discrete states")
        return {**sev_discrete(state, N).to_dict(), **fidelity_discrete(state).to_dict()}
    sev = sev_gaussian(state).to_dict()
    fid = fidelity_gaussian(state, target_V, target_N).to_dict()
    return {**sev, **fid}


def _emit_mapping(data: dict, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(data, out, indent=2)
        out.write("\n")
        return
    flat = {}
    for key, value in data.items():
        if isinstance(value, list):
            flat[f"{key}_re"], flat[f"{key}_im"] = value
        else:
            flat[key] = value
    writer = csv.writer(out)
    writer.writerow(flat.keys())
    writer.writerow(flat.values())


def _write_columns(columns: dict, out) -> None:
    writer = csv.writer(out)
    keys = list(columns)
    writer.writerow(keys)
    for row in zip(*(columns[k] for k in keys)):
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


class _Output:
    """Context manager yielding a text sink for ``--output`` or stdout."""

    def __init__(self, path):
        self.path = path
        self.fh = None

    def __enter__(self):
        if self.path in (None, "-"):
            return sys.stdout
        self.fh = open(self.path, "w", newline="")
        return self.fh

    def __exit__(self, *exc):
        if self.fh is not None:
            self.fh.close()


def cmd_sev(args) -> None:
    state = load_state(args.input)
    if isinstance(state, DiscreteBaseState):
        if args.N is None:
            raise UsageError("--N is required for discrete states")
        data = sev_discrete(state, args.N).to_dict()
    else:
        data = sev_gaussian(state).to_dict()
    with _Output(args.output) as out:
        _emit_mapping(data, args.format, out)


def cmd_fidelity(args) -> None:
    state = load_state(args.input)
    if isinstance(state, DiscreteBaseState):
        data = fidelity_discrete(state).to_dict()
    else:
        data = fidelity_gaussian(state, args.target_V, args.target_N).to_dict()
    with _Output(args.output) as out:
        _emit_mapping(data, args.format, out)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise UsageError(f"spoof --kind {args.kind} requires {flags}")


def cmd_spoof(args) -> None:
    kind = args.kind
    if kind == "spike":
        _require(args, "M", "epsilon", "V", "N")
        state = make_spike_state(args.M, args.epsilon, args.V, args.N)
        N = None
    else:
        N = 10 if args.N is None else args.N
        if kind == "box":
            _require(args, "a", "n_prime")
            state = make_box_base(args.a, args.n_prime)
        elif kind == "roots":
            _require(args, "n_prime", "M")
            state = make_roots_of_unity_state(args.n_prime, args.M)
        elif kind == "two-vector":
            _require(args, "n_prime", "F", "gap")
            state = make_two_vector_state(args.n_prime, args.F, args.gap)
        else:
            _require(args, "n_prime", "F", "n")
            state = make_three_vector_state(args.n_prime, args.F, args.n)
    doc = {"state": state_to_dict(state), "metrics": _metrics(state, N)}
    with _Output(args.output) as out:
        json.dump(doc, out, indent=2)
        out.write("\n")


def cmd_bounds(args) -> None:
    if args.surface:
        s_q, s_p, F = fidelity_ceiling_surface(args.surface_grid)
        columns = {"s_q": s_q, "s_p": s_p, "F_upper": F}
    else:
        if args.grid < 2:
            raise UsageError("--grid must be at least 2")
        parts = []
        for n_prime in args.n_prime:
            F, lo, hi = BoundsRegion(n_prime).curves(args.grid)
            parts.append(([str(n_prime)] * len(F), F, lo, hi))
        columns = {
            "n_prime": sum((p[0] for p in parts), []),
            "F": np.concatenate([p[1] for p in parts]),
            "sp_lower": np.concatenate([p[2] for p in parts]),
            "sp_upper": np.concatenate([p[3] for p in parts]),
        }
    with _Output(args.output) as out:
        _write_columns(columns, out)


def cmd_sample(args) -> None:
    config = SampleConfig(
        n_prime=args.n_prime,
        N=args.N,
        num_samples=args.num_samples,
        seed=args.seed,
        distribution=args.distribution,
        k=args.k,
    )
    records = list(sample_region(config, n_jobs=args.jobs))
    with _Output(args.output) as out:
        write_records_csv(records, out)
    if args.summary:
        with open(args.summary, "w") as fh:
            write_summary_json(coverage_report(records, config.n_prime), fh)


def cmd_figure_data(args) -> None:
    outdir = Path(args.output_dir or os.environ.get(OUTPUT_DIR_ENV) or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    names = list(FIGURES) if args.figure == "all" else [args.figure]
    for name in names:
        for filename, builder in FIGURES[name].items():
            path = outdir / filename
            with open(path, "w", newline="") as fh:
                _write_columns(builder(), fh)
            print(path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkpsev",
        description="GKP stabilizer expectation values, fidelities and their bounds.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sev", help="stabilizer expectation values of a state file")
    p.add_argument("--input", required=True)
    p.add_argument("--N", type=int, help="periods on each side for discrete states")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_sev)

    p = sub.add_parser("fidelity", help="maximum GKP fidelity of a state file")
    p.add_argument("--input", required=True)
    p.add_argument("--target-V", type=float)
    p.add_argument("--target-N", type=int)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("spoof", help="build a spoofing state and report its metrics")
    p.add_argument("--kind", choices=("spike", "box", "roots", "two-vector", "three-vector"), default="spike")
    p.add_argument("--M", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--V", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--a", type=float)
    p.add_argument("--n-prime", dest="n_prime", type=int)
    p.add_argument("--F", type=float)
    p.add_argument("--gap", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--output")
    p.set_defaults(func=cmd_spoof)

    p = sub.add_parser("bounds", help="boundary curves of the (F, s_p) region as CSV")
    p.add_argument("--n-prime", dest="n_prime", type=_n_prime_list, default=[IDEAL])
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--surface", action="store_true", help="emit the (s_q, s_p, F_upper) surface")
    p.add_argument("--surface-grid", type=int, default=51)
    p.add_argument("--output")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sample", help="Monte Carlo samples of (F, s_q, s_p) as CSV")
    p.add_argument("--n-prime", dest="n_prime", type=int, required=True)
    p.add_argument("--N", type=int, default=100)
    p.add_argument("--num-samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--distribution", choices=DISTRIBUTIONS, default="dirichlet_uniform")
    p.add_argument("--k", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output")
    p.add_argument("--summary", help="write the coverage summary JSON here")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("figure-data", help="write CSV data behind the figures")
    p.add_argument("--figure", choices=(*FIGURES, "all"), default="all")
    p.add_argument("--output-dir", help=f"defaults to ${OUTPUT_DIR_ENV} or the working directory")
    p.set_defaults(func=cmd_figure_data)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except FidelityConvergenceError as exc:
        print(f"error: {exc} (best F = {exc.best_F:.12g})", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command line interface: ``cubecut {verify,recover,concentrate,spectrum,enumerate}``.

Exit codes: 0 on success, 1 when a verify check reports violations, 2 on
usage or scale errors.  Output goes to stdout unless ``--out`` is given.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import _enum
from ._errors import CubeCutError
from .bitcube import CubeParams
from .experiment import (
    ExperimentSpec,
    _csv,
    dump_json,
    run_concentration,
    run_recovery,
)
from .fourier import eigengap_holds, laplacian_eigenvalues
from .recover import SolverConfig, Strategy
from .sample import SampleParams, subsample
from .verify import MAX_EXHAUSTIVE_CUT_VERTICES, verify_all

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _p_grid(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of reals: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cubecut", description="Planted coordinate cuts in subsampled (k-distance) hypercubes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fmt_default):
        p.add_argument("--d", type=int, required=True, help="cube dimension")
        p.add_argument("--k", type=int, default=1, help="edge distance (default 1)")
        p.add_argument("--component", choices=["full", "even", "odd"], default=None,
                       help="default: full for odd k, even for even k")
        p.add_argument("--format", choices=["csv", "json"], default=fmt_default)
        p.add_argument("--out", default=None, help="output file (default stdout)")

    def sampling(p, trials):
        p.add_argument("--p", type=float, default=None, help="subsampling rate")
        p.add_argument("--p-grid", type=_p_grid, default=None, help="comma-separated rates")
        p.add_argument("--trials", type=int, default=trials)
        p.add_argument("--seed", type=int, default=0, help="master seed")

    v = sub.add_parser("verify", help="run every structural check that fits the scale")
    common(v, "json")
    sampling(v, 200)

    r = sub.add_parser("recover", help="seeded recovery trials (recovery.csv rows or JSON summary)")
    common(r, "csv")
    sampling(r, 1)
    r.add_argument("--solver", choices=[s.value for s in Strategy], default=Strategy.BRANCH_BOUND.value)
    r.add_argument("--restarts", type=int, default=1, help="local-search restarts")
    r.add_argument("--timing", action="store_true", help="fill wall_ms (makes output non-reproducible)")

    c = sub.add_parser("concentrate", help="sampled coordinate-cut sizes (concentration.csv rows or JSON summary)")
    common(c, "csv")
    sampling(c, 100)

    s = sub.add_parser("spectrum", help="Laplacian and adjacency eigenvalues by level")
    common(s, "csv")

    e = sub.add_parser("enumerate", help="every balanced cut of a small component with its size")
    common(e, "csv")
    e.add_argument("--p", type=float, default=None, help="count retained edges of a sample instead")
    e.add_argument("--seed", type=int, default=0)
    return parser


def _params(args) -> CubeParams:
    return CubeParams.for_k(args.d, args.k, args.component)


def _grid(args, default=None):
    if args.p is not None and args.p_grid is not None:
        raise CubeCutError("give --p or --p-grid, not both")
    if args.p_grid is not None:
        return args.p_grid
    if args.p is not None:
        return [args.p]
    if default is None:
        raise CubeCutError("one of --p or --p-grid is required")
    return [default]


def _cmd_verify(args):
    grid = _grid(args, 0.5)
    if len(grid) != 1:
        raise CubeCutError("verify takes a single --p")
    doc = verify_all(_params(args), grid[0], args.trials, args.seed)
    doc["kind"] = "verify_report"
    if args.format == "json":
        text = dump_json(doc)
    else:
        rows = [(r["lemma_id"], r["checked"], r["violations"], r["passed"], r["skipped"] or "")
                for r in doc["reports"]]
        text = _csv(("lemma_id", "checked", "violations", "passed", "skipped"), rows)
    return text, EXIT_OK if doc["passed"] else EXIT_CHECK_FAILED


def _spec(args, **kw):
    return ExperimentSpec(_params(args), tuple(_grid(args)), args.trials, args.seed,
                          output_format=args.format, output_path=args.out, **kw)


def _cmd_recover(args):
    solver = SolverConfig(args.solver, restarts=args.restarts)
    run = run_recovery(_spec(args, solver=solver, timing=args.timing))
    return (run.to_csv() if args.format == "csv" else run.to_json()), EXIT_OK


def _cmd_concentrate(args):
    run = run_concentration(_spec(args))
    return (run.to_csv() if args.format == "csv" else run.to_json()), EXIT_OK


def _cmd_spectrum(args):
    prm = _params(args)
    table = laplacian_eigenvalues(prm.d, prm.k)
    if args.format == "csv":
        return _csv(("s", "lambda", "mu"), table.rows()), EXIT_OK
    doc = {
        "kind": "spectrum",
        "params": prm.describe(),
        "rows": [{"s": s, "lambda": lam, "mu": mu} for s, lam, mu in table.rows()],
        "eigengap_holds": eigengap_holds(prm.d, prm.k),
    }
    return dump_json(doc), EXIT_OK


def _cmd_enumerate(args):
    prm = _params(args)
    n = prm.n_vertices
    if n > MAX_EXHAUSTIVE_CUT_VERTICES:
        raise CubeCutError(f"enumerate is capped at {MAX_EXHAUSTIVE_CUT_VERTICES} component vertices, got {n}")
    masks = _enum.balanced_masks(n, exclude_root=True)
    weights = None
    if args.p is not None:
        weights = subsample(prm, SampleParams(args.p, args.seed)).retained
    sizes = _enum.cut_sizes(prm, masks, weights)
    which, dist = _enum.nearest_coordinate(prm, masks)
    coords = _enum.coordinate_masks(prm)
    rows = [
        (int(m), int(s), coords[w][0], coords[w][1], int(dd))
        for m, s, w, dd in zip(masks, sizes, which, dist)
    ]
    if args.format == "csv":
        return _csv(("local_mask", "cut_size", "nearest_j", "nearest_b", "distance"), rows), EXIT_OK
    doc = {
        "kind": "balanced_cuts",
        "params": prm.describe(),
        "p": args.p,
        "seed": args.seed if args.p is not None else None,
        "min_cut_size": int(np.min(sizes)),
        "cuts": [dict(zip(("local_mask", "cut_size", "nearest_j", "nearest_b", "distance"), r)) for r in rows],
    }
    return dump_json(doc), EXIT_OK


_COMMANDS = {
    "verify": _cmd_verify,
    "recover": _cmd_recover,
    "concentrate": _cmd_concentrate,
    "spectrum": _cmd_spectrum,
    "enumerate": _cmd_enumerate,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, code = _COMMANDS[args.command](args)
    except CubeCutError as exc:
        print(f"cubecut {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        Path(args.out).write_text(text)
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            sys.stderr.close()
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end reproducing the verification experiments.

Subcommands: ``leja`` (section construction + greedy-property validation),
``bounds`` (univariate sup-norm and Lebesgue sweeps), ``bivariate``
(intertwining-array identities), ``transport`` (ellipse transplantation and
the distortion constant).  Exit codes: 0 success, 1 usage error, 2 a checked
bound or identity failed beyond tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import bivariate as bv
from . import transport as tp
from .core import UNIFORM_FLIP_BOUND, UNIFORM_FLIP_BOUND_2D, BoundViolation
from .disk import canonical_disk_leja, circle_samples, greedy_leja, validate_leja
from .flip import circle_flip_stats, special_n_statistics

USAGE_ERROR, CHECK_FAILED = 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE_ERROR)


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _emit(rows: list[dict], fmt: str, out_path: str | None) -> None:
    if fmt == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
        text = buf.getvalue()
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _thread_count(args) -> int:
    env = os.environ.get("LEJAFLIP_THREADS")
    if args.threads is not None:
        return max(1, args.threads)
    if env:
        return max(1, int(env))
    return 1


# ---------------------------------------------------------------------------


def _cmd_leja(args) -> int:
    if args.n_points < 1:
        print("error: -N must be positive", file=sys.stderr)
        return USAGE_ERROR
    samples = args.samples
    if args.ellipse:
        a, b = args.ellipse
        try:
            emap = tp.ellipse_exterior_map(a, b)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return USAGE_ERROR
        boundary = tp.boundary_samples(emap, samples)
        section = greedy_leja(boundary, args.n_points, args.seed_index)
    else:
        boundary = circle_samples(samples)
        if args.greedy:
            section = greedy_leja(boundary, args.n_points, args.seed_index)
        else:
            origin = complex(math.cos(args.origin_angle), math.sin(args.origin_angle))
            section = canonical_disk_leja(args.n_points, origin)
    tol = args.tol if args.tol is not None else 10.0 / samples
    report = validate_leja(section, boundary, tol)
    if args.output:
        if args.format == "json":
            with open(args.output, "w") as fh:
                json.dump(section.to_json(), fh, indent=2)
        else:
            section.to_csv(args.output)
    else:
        _emit(
            [
                {"index": i, "re": float(z.real), "im": float(z.imag)}
                for i, z in enumerate(section.points, start=1)
            ],
            args.format,
            None,
        )
    print(
        f"validated {len(section)} points: max_violation={report.max_violation:.3e} "
        f"worst_k={report.worst_k} tol={tol:.3e} -> {'pass' if report.passed else 'FAIL'}",
        file=sys.stderr,
    )
    return 0 if report.passed else CHECK_FAILED


def _bounds_row(n_points: int, grid: int | None, refine: int) -> dict:
    section = canonical_disk_leja(n_points)
    sups, leb = circle_flip_stats(section, grid, refine)
    max_sup = float(np.max(sups))
    return {
        "N": n_points,
        "max_sup": max_sup,
        "lebesgue": leb.constant,
        "sup_margin": UNIFORM_FLIP_BOUND - max_sup,
        "lebesgue_margin": 2.0 * n_points - leb.constant,
    }


def _cmd_bounds(args) -> int:
    if not args.special_n and args.max_n < 1:
        print("error: --max-n must be positive", file=sys.stderr)
        return USAGE_ERROR
    rows: list[dict] = []
    failed = False
    if args.special_n:
        p_values = args.p_range or list(range(2, 9))
        prev_avg = None
        for p in p_values:
            n_points = 2**p - 1
            try:
                stats = special_n_statistics(p, args.grid, args.refine)
            except BoundViolation as exc:
                print(f"bound violation at p={p}: {exc}", file=sys.stderr)
                failed = True
                continue
            _, leb = circle_flip_stats(canonical_disk_leja(n_points), args.grid, args.refine)
            rel = abs(leb.constant - n_points) / n_points
            rows.append(
                {
                    "p": p,
                    "N": n_points,
                    "lebesgue": leb.constant,
                    "lebesgue_target": n_points,
                    "lebesgue_relerr": rel,
                    "sum_sup": stats.sum_sup,
                    "avg_sup": stats.avg_sup,
                    "max_sup": stats.max_sup,
                    "min_sup": stats.min_over_k,
                }
            )
            if rel > 1e-6:
                failed = True
            if args.avg:
                if stats.avg_sup <= 1.0:
                    failed = True
                if prev_avg is not None and stats.avg_sup >= prev_avg:
                    failed = True
                prev_avg = stats.avg_sup
    else:
        n_values = list(range(1, args.max_n + 1))
        workers = _thread_count(args)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(lambda nn: _bounds_row(nn, args.grid, args.refine), n_values))
        else:
            rows = [_bounds_row(nn, args.grid, args.refine) for nn in n_values]
        for row in rows:
            if row["max_sup"] > UNIFORM_FLIP_BOUND + 1e-6:
                failed = True
            if row["lebesgue"] > min(2.0 * row["N"], UNIFORM_FLIP_BOUND * row["N"]) + 1e-6:
                failed = True
    _emit(rows, args.format, args.output)
    return CHECK_FAILED if failed else 0


def _cmd_bivariate(args) -> int:
    if args.n_max < 1:
        print("error: --n-max must be positive", file=sys.stderr)
        return USAGE_ERROR
    rng = np.random.default_rng(args.seed)
    mode = args.mode or "delta"
    rows: list[dict] = []
    failed = False
    max_n_nodes = args.n_max

    def sources(n: int):
        eta = canonical_disk_leja(n + 2).points
        return eta, eta

    if mode == "delta":
        cases: set[str] = set()
        overall = 0.0
        for n_nodes in range(1, max_n_nodes + 1):
            eta, theta = sources(bv.shape_of(n_nodes)[0])
            arr = bv.build_array(eta, theta, n_nodes)
            pairs = arr.pairs()
            worst = 0.0
            for p, q in pairs:
                cases.add(bv.flip_case(arr, p, q))
                for j, (k, l) in enumerate(pairs, start=1):
                    val = bv.bivariate_flip(arr, p, q, *arr.node(j))
                    want = 1.0 if (k, l) == (p, q) else 0.0
                    worst = max(worst, abs(val - want))
            overall = max(overall, worst)
            rows.append({"N": n_nodes, "max_delta_err": worst, "cases_seen": len(cases)})
        failed = overall > 1e-10 or len(cases) < 7
    elif mode == "oracle":
        for n_nodes in range(1, min(max_n_nodes, bv.DEFAULT_ORACLE_CAP) + 1):
            eta, theta = sources(bv.shape_of(n_nodes)[0])
            arr = bv.build_array(eta, theta, n_nodes)
            worst = 0.0
            for jp, (p, q) in enumerate(arr.pairs(), start=1):
                for _ in range(args.points):
                    z = complex(np.exp(2j * np.pi * rng.random()))
                    w = complex(np.exp(2j * np.pi * rng.random()))
                    a_val = bv.bivariate_flip(arr, p, q, z, w)
                    b_val = bv.flip_via_vdm_ratio(arr, jp, z, w)
                    worst = max(worst, abs(a_val - b_val) / max(1.0, abs(a_val)))
            rows.append({"N": n_nodes, "max_rel_err": worst})
            failed = failed or worst > 1e-8
    elif mode == "factorization":
        for n_nodes in range(1, max_n_nodes + 1):
            eta, theta = sources(bv.shape_of(n_nodes)[0])
            arr = bv.build_array(eta, theta, n_nodes)
            base = bv.vdm_determinant(arr.nodes)
            worst = 0.0
            for _ in range(args.points):
                z = complex(rng.normal(), rng.normal())
                w = complex(rng.normal(), rng.normal())
                oracle = bv.vdm_determinant(list(map(tuple, arr.nodes)) + [(z, w)]) / base
                predicted = bv.vdm_extension_factor(arr, z, w)
                worst = max(worst, abs(oracle - predicted) / max(1.0, abs(predicted)))
            rows.append({"check": "extension", "size": n_nodes, "max_rel_err": worst})
            failed = failed or worst > 1e-8
        for n in range(5):
            eta, theta = sources(n)
            arr = bv.build_array(eta, theta, bv.triangular_number(n))
            oracle = bv.vdm_determinant(arr.nodes)
            product = bv.schiffer_siciak(eta, theta, n)
            err = abs(oracle - product) / max(1.0, abs(product))
            rows.append({"check": "product-formula", "size": n, "max_rel_err": err})
            failed = failed or err > 1e-8
    elif mode == "verify-2d-leja":
        eta = canonical_disk_leja(bv.shape_of(max_n_nodes)[0] + 2).points
        rep = bv.verify_2d_leja(eta, eta, max_n_nodes, args.grid)
        rows.append(
            {"checked": rep.checked, "max_shortfall": rep.max_shortfall, "worst_size": rep.worst_size}
        )
        failed = not rep.passed(1e-6)
    elif mode == "lebesgue":
        n_values = args.n_range or list(range(2, 11))
        sizes, lams = [], []
        for n in n_values:
            n_nodes = bv.triangular_number(n)
            eta, theta = sources(n)
            arr = bv.build_array(eta, theta, n_nodes)
            lam = bv.bivariate_lebesgue(arr, args.grid)
            envelope = UNIFORM_FLIP_BOUND_2D * n * (n + 1) * (n + 2)
            rows.append({"n": n, "N": n_nodes, "lebesgue": lam, "envelope": envelope})
            failed = failed or lam > envelope
            sizes.append(n_nodes)
            lams.append(lam)
        if len(sizes) > 1:
            slope = float(np.polyfit(np.log(sizes), np.log(lams), 1)[0])
            print(f"fitted log-log slope: {slope:.4f}", file=sys.stderr)
    elif mode == "decay":
        n_values = args.n_range or list(range(2, 13))
        try:
            table = bv.jackson_decay_experiment(
                lambda z, w: np.exp(z + w), max(n_values), grid=args.grid, require_decay=True
            )
        except BoundViolation as exc:
            print(f"decay violation: {exc}", file=sys.stderr)
            return CHECK_FAILED
        rows = [{"n": n, "N": size, "sup_error": err} for n, size, err in table if n in set(n_values)]
    else:
        print(f"error: unknown bivariate mode {mode!r}", file=sys.stderr)
        return USAGE_ERROR
    _emit(rows, args.format, args.output)
    return CHECK_FAILED if failed else 0


def _cmd_transport(args) -> int:
    a, b = args.ellipse
    try:
        emap = tp.ellipse_exterior_map(a, b)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    rows: list[dict] = []
    failed = False
    if args.alper:
        base = tp.estimate_alper_constant(emap, args.w_grid, args.t_grid)
        doubled = tp.estimate_alper_constant(emap, 2 * args.w_grid, 2 * args.t_grid)
        rows.append(
            {
                "a": a,
                "b": b,
                "alper": doubled,
                "alper_coarse": base,
                "doubling_delta": abs(doubled - base),
            }
        )
        if a == b and abs(doubled) > 1e-6:
            failed = True
    else:
        n_values = [n for n in (2**k for k in range(1, 30)) if n <= args.max_n]
        sizes, sups = [], []
        for n_points in n_values:
            ts = tp.transport_sequence(emap, canonical_disk_leja(n_points))
            node_sups, leb = tp.compact_flip_stats(ts, args.grid, args.refine, per_node_refine=True)
            max_sup = float(np.max(node_sups))
            rows.append({"N": n_points, "max_sup": max_sup, "lebesgue": leb.constant})
            if not (np.isfinite(max_sup) and np.isfinite(leb.constant)):
                failed = True
            sizes.append(n_points)
            sups.append(max_sup)
        if len(sizes) > 2:
            slope = float(np.polyfit(np.log(sizes), np.log(sups), 1)[0])
            print(f"fitted log-log slope of max_sup vs N: {slope:.4f}", file=sys.stderr)
    _emit(rows, args.format, args.output)
    return CHECK_FAILED if failed else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lejaflip", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("-o", "--output", default=None, help="write the table here instead of stdout")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized evaluation points")
        p.add_argument("--threads", type=int, default=None, help="worker threads (or LEJAFLIP_THREADS)")

    p = sub.add_parser(
        "leja",
        help="construct and validate a section",
        epilog="output columns: index, re, im (JSON: {n, points, compact_tag})",
    )
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--disk", action="store_true")
    group.add_argument("--ellipse", nargs=2, type=float, metavar=("A", "B"))
    p.add_argument("-N", dest="n_points", type=int, required=True)
    p.add_argument("--greedy", action="store_true", help="greedy construction (implied for --ellipse)")
    p.add_argument("--samples", type=int, default=4096)
    p.add_argument("--seed-index", type=int, default=0)
    p.add_argument("--origin-angle", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=None, help="validation tolerance (default 10/samples)")
    common(p)
    p.set_defaults(func=_cmd_leja)

    p = sub.add_parser(
        "bounds",
        help="univariate sup-norm and Lebesgue sweeps",
        epilog=(
            "sweep columns: N, max_sup, lebesgue, sup_margin, lebesgue_margin; "
            "--special-n columns: p, N, lebesgue, lebesgue_target, lebesgue_relerr, "
            "sum_sup, avg_sup, max_sup, min_sup"
        ),
    )
    p.add_argument("--max-n", type=int, default=64)
    p.add_argument("--special-n", action="store_true")
    p.add_argument("--p", dest="p_range", type=_parse_range, default=None, metavar="LO..HI")
    p.add_argument("--avg", action="store_true", help="also require avg_sup > 1 and decreasing")
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--refine", type=int, default=40)
    common(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser(
        "bivariate",
        help="intertwining-array identities",
        epilog=(
            "columns by mode -- delta: N, max_delta_err, cases_seen; oracle: N, max_rel_err; "
            "factorization: check, size, max_rel_err; verify-2d-leja: checked, max_shortfall, "
            "worst_size; lebesgue: n, N, lebesgue, envelope; decay: n, N, sup_error"
        ),
    )
    modes = p.add_mutually_exclusive_group()
    modes.add_argument("--delta", dest="mode", action="store_const", const="delta")
    modes.add_argument("--oracle", dest="mode", action="store_const", const="oracle")
    modes.add_argument("--factorization", dest="mode", action="store_const", const="factorization")
    modes.add_argument("--verify-2d-leja", dest="mode", action="store_const", const="verify-2d-leja")
    modes.add_argument("--lebesgue", dest="mode", action="store_const", const="lebesgue")
    modes.add_argument("--decay", dest="mode", action="store_const", const="decay")
    p.add_argument("--n-max", type=int, default=15)
    p.add_argument("--n", dest="n_range", type=_parse_range, default=None, metavar="LO..HI")
    p.add_argument("--grid", type=int, default=128)
    p.add_argument("--points", type=int, default=16)
    common(p)
    p.set_defaults(func=_cmd_bivariate, mode=None)

    p = sub.add_parser(
        "transport",
        help="ellipse transplantation experiments",
        epilog=(
            "sweep columns: N, max_sup, lebesgue; "
            "--alper columns: a, b, alper, alper_coarse, doubling_delta"
        ),
    )
    p.add_argument("--ellipse", nargs=2, type=float, metavar=("A", "B"), required=True)
    p.add_argument("--max-n", type=int, default=64)
    p.add_argument("--alper", action="store_true")
    p.add_argument("--w-grid", type=int, default=256)
    p.add_argument("--t-grid", type=int, default=256)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--refine", type=int, default=40)
    common(p)
    p.set_defaults(func=_cmd_transport)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except BoundViolation as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return CHECK_FAILED


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

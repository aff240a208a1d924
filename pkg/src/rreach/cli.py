"""Command-line interface.

Exit codes: 0 success, 2 usage error or unsupported parameters, 3 resource
cap exceeded, 4 internal assertion failure.

Resource caps can be raised through environment variables:
  RREACH_MAX_R               largest reach for transfer matrices (default 6)
  RREACH_MAX_SLICE_DIM       largest matrix side for exact gamma extraction (default 64)
  RREACH_MAX_SQUARE_CELLS    largest r*r square enumerated for initialisation (default 16)
  RREACH_MAX_STRING_PAIRS    string-pair enumeration cap of the oracle (default 1e8)
  RREACH_MAX_BAND_CELLS      band-cell enumeration cap of the oracle (default 25)
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bernoulli import (build_augmented_matrices, build_transition_matrices, gamma_exact,
                        gamma_formula_check, pair_to_json)
from .errors import ResourceCapError, UnsupportedParameters
from .montecarlo import (McConfig, fit_extrapolation, fit_json, read_curve_csv, run_trials,
                         s_statistic, write_curve_csv)
from .oracle import bernoulli_expectation, realizability_census, string_expectation
from .propagation import affine_tail_fit, exact_curve, write_curve_csv as write_exact_csv
from .strings import build_string_matrices

EXIT_USAGE, EXIT_CAP, EXIT_ASSERT = 2, 3, 4


class UsageError(Exception):
    pass


def decimal_string(x: Fraction, digits: int = 10) -> str:
    ctx = Context(prec=digits, rounding=ROUND_HALF_EVEN)
    return str(ctx.divide(Decimal(x.numerator), Decimal(x.denominator)))


def fraction_string(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_window(text: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in text.split(":"))
    except ValueError:
        raise UsageError(f"window must look like A:B, got {text!r}")
    if a < 1 or b <= a:
        raise UsageError(f"window {text} must satisfy 1 <= A < B")
    return a, b


def write_manifest(args, outputs: list[str]) -> None:
    params = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = {
        "command": args.command,
        "parameters": params,
        "seed": params.get("seed"),
        "artifact_version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "outputs": outputs,
    }
    for out in outputs:
        Path(str(out) + ".manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _select_pair(model: str, k: int, r: int, augmented: bool):
    if model == "string":
        if (k, r) != (2, 1):
            raise UnsupportedParameters("string model supports k=2, r=1 only")
        return build_string_matrices()
    if augmented:
        return build_augmented_matrices(k, r)
    return build_transition_matrices(k, r)


def cmd_exact_gamma(args) -> int:
    pair = _select_pair(args.model, args.k, args.r, args.augmented)
    res = gamma_exact(pair)
    print(f"model={pair.model} k={pair.k} r={pair.r}")
    print(f"gamma = {fraction_string(res.gamma)} ≈ {decimal_string(res.gamma, 12)}")
    print("stationary e*(1) = [" + ", ".join(fraction_string(v) for v in res.stationary) + "]")
    if args.json:
        data = pair_to_json(pair)
        data.update({
            "gamma": fraction_string(res.gamma),
            "stationary": [fraction_string(v) for v in res.stationary],
            "g_lambda_at_b1": [fraction_string(c) for c in res.char_slice_lambda.coefficients],
            "g_b_at_lambda1": [fraction_string(c) for c in res.char_slice_b.coefficients],
        })
        Path(args.json).write_text(json.dumps(data) + "\n")
        write_manifest(args, [args.json])
    return 0


def cmd_propagate(args) -> int:
    if args.n_max < args.r:
        raise UsageError(f"--n-max ({args.n_max}) must be at least --r ({args.r})")
    curve = exact_curve(args.model, args.k, args.r, args.n_max)
    lo, hi = parse_window(args.fit_window) if args.fit_window else (min(50, args.n_max - 2), args.n_max)
    if hi > args.n_max:
        raise UsageError(f"fit window end {hi} exceeds --n-max {args.n_max}")
    fit = affine_tail_fit(curve, max(lo, 1), hi)
    print(f"EL_{args.n_max} = {decimal_string(curve[args.n_max], 12)}")
    print(f"gamma_hat = {fit.gamma_hat:.10f}  A_hat = {fit.a_hat:.6f}  window {fit.n_min}:{fit.n_max}")
    outputs = []
    if args.csv:
        write_exact_csv(curve, args.csv)
        outputs.append(args.csv)
    if args.json:
        data = {"model": args.model, "k": args.k, "r": args.r, "gamma_hat": fit.gamma_hat,
                "a_hat": fit.a_hat, "n_min": fit.n_min, "n_max": fit.n_max, "seed": None}
        Path(args.json).write_text(json.dumps(data) + "\n")
        outputs.append(args.json)
    if outputs:
        write_manifest(args, outputs)
    return 0


def cmd_mc(args) -> int:
    lo, hi = parse_window(args.window) if args.window else (min(50, args.n_max - 2), args.n_max)
    if hi > args.n_max:
        raise UsageError(f"fit window end {hi} exceeds --n-max {args.n_max}")
    cfg = McConfig(args.model, args.k, args.r, args.n_max, args.trials, args.seed, max(lo, 1), hi)
    curve = run_trials(cfg, workers=args.threads)
    fit = fit_extrapolation(curve)
    print(f"gamma_hat = {fit.gamma_hat:.7f}  A_hat = {fit.a_hat:.4f}  window {fit.n_min}:{fit.n_max}")
    outputs = []
    if args.csv:
        write_curve_csv(curve, args.csv)
        outputs.append(args.csv)
    if args.json:
        Path(args.json).write_text(json.dumps(fit_json(curve, fit)) + "\n")
        outputs.append(args.json)
    if outputs:
        write_manifest(args, outputs)
    return 0


def cmd_fit(args) -> int:
    lo, hi = parse_window(args.window)
    path = Path(args.input)
    seed = None
    manifest = Path(str(path) + ".manifest.json")
    if manifest.exists():
        seed = json.loads(manifest.read_text()).get("seed")
    curve = read_curve_csv(path, seed=seed or 0)
    if hi > len(curve.sum_lengths):
        raise UsageError(f"window end {hi} exceeds curve length {len(curve.sum_lengths)}")
    fit = fit_extrapolation(curve, lo, hi)
    data = fit_json(curve, fit)
    data["seed"] = seed
    print(f"gamma_hat = {fit.gamma_hat:.7f}  A_hat = {fit.a_hat:.4f}  window {lo}:{hi}")
    if args.json:
        Path(args.json).write_text(json.dumps(data) + "\n")
        write_manifest(args, [args.json])
    return 0


def cmd_oracle(args) -> int:
    if args.mode == "strings":
        res = string_expectation(args.k, args.n, args.r)
        print(fraction_string(res.expectation))
    elif args.mode == "bernoulli":
        if args.r is None:
            raise UsageError("--r is required for --mode bernoulli")
        res = bernoulli_expectation(args.k, args.n, args.r)
        print(fraction_string(res.expectation))
        if args.n >= 1:
            prop = exact_curve("bernoulli", args.k, args.r, args.n)[args.n]
            if prop != res.expectation:
                raise AssertionError(f"propagation gives {fraction_string(prop)}")
            print(f"propagation at n={args.n}: {fraction_string(prop)} (equal)")
    else:
        summary = realizability_census(args.n)
        if set(summary) <= {0, 2}:
            print("all configurations have weight 0 or 2: OK")
        print(" ".join(f"weight {w}: {c}" for w, c in sorted(summary.items())))
    return 0


def _rows_to_csv(header, rows, out) -> None:
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    finally:
        if out:
            fh.close()


def _load_or_run_mc(args, model: str, r: int):
    if args.mc_dir:
        path = Path(args.mc_dir) / f"mc_{model}_k2_r{r}.csv"
        if not path.exists():
            raise UsageError(f"missing Monte Carlo input {path}")
        return read_curve_csv(path, seed=args.seed)
    cfg = McConfig(model, 2, r, args.mc_n_max, args.trials, args.seed, 50, args.mc_n_max)
    return run_trials(cfg, workers=args.threads)


def cmd_table(args) -> int:
    r_values = [int(t) for t in args.r_values.split(",")]
    if args.which == "gamma-exact":
        header = ("model", "k", "r", "gamma_fraction", "gamma_decimal", "closed_form")
        rows = []
        for model, k, r in [("bernoulli", 2, 1), ("bernoulli", 3, 1), ("bernoulli", 2, 2),
                            ("bernoulli", 3, 2), ("bernoulli", 2, 3)]:
            g = gamma_exact(build_transition_matrices(k, r)).gamma
            closed = fraction_string(gamma_formula_check(k, r)) if r <= 2 else "-"
            rows.append((model, k, r, fraction_string(g), decimal_string(g), closed))
        for pair in (build_augmented_matrices(), build_string_matrices()):
            g = gamma_exact(pair).gamma
            rows.append((pair.model, 2, 1, fraction_string(g), decimal_string(g), "-"))
    elif args.which == "mc-summary":
        header = ("r", "model", "gamma_hat", "a_hat")
        rows = []
        for r in r_values:
            for model in ("bernoulli", "string"):
                fit = fit_extrapolation(_load_or_run_mc(args, model, r))
                rows.append((r, model, f"{fit.gamma_hat:.5f}", f"{fit.a_hat:.4f}"))
    else:
        header = ("r", "mc_gamma", "propagated_gamma", "exact_fraction_gamma", "s_statistic")
        rows = []
        for r in r_values:
            mc = _load_or_run_mc(args, "bernoulli", r)
            mc_fit = fit_extrapolation(mc)
            n_exact = max(args.exact_n_max, len(mc.sum_lengths))
            try:
                curve = exact_curve("bernoulli", 2, r, n_exact)
            except ResourceCapError:
                rows.append((r, f"{mc_fit.gamma_hat:.7f}", "-", "-", "-"))
                continue
            prop = affine_tail_fit(curve, 50, args.exact_n_max)
            try:
                exact = fraction_string(gamma_exact(build_transition_matrices(2, r)).gamma)
            except ResourceCapError:
                exact = "-"
            rows.append((r, f"{mc_fit.gamma_hat:.7f}", f"{prop.gamma_hat:.10f}", exact,
                         f"{s_statistic(mc, curve):.4e}"))
    _rows_to_csv(header, rows, args.out)
    if args.out:
        write_manifest(args, [args.out])
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rreach", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("exact-gamma", help="exact limiting constant from the transfer matrices")
    s.add_argument("--model", choices=("bernoulli", "string"), default="bernoulli")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--augmented", action="store_true", help="8x8 on/off-split Bernoulli matrices (k=2, r=1)")
    s.add_argument("--json", help="dump matrices, slices and results here")
    s.set_defaults(func=cmd_exact_gamma)

    s = sub.add_parser("propagate", help="exact EL_n by distribution propagation, plus affine fit")
    s.add_argument("--model", choices=("bernoulli", "string"), default="bernoulli")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--n-max", type=int, default=2000)
    s.add_argument("--fit-window", help="A:B (default 50:n-max)")
    s.add_argument("--csv")
    s.add_argument("--json")
    s.set_defaults(func=cmd_propagate)

    s = sub.add_parser("mc", help="Monte Carlo estimate of EL_n and the extrapolated constant")
    s.add_argument("--model", choices=("bernoulli", "string"), default="bernoulli")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--r", type=int, default=1)
    s.add_argument("--n-max", type=int, default=1000)
    s.add_argument("--trials", type=int, default=10000)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--window", help="fit window A:B (default 50:n-max)")
    s.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    s.add_argument("--csv")
    s.add_argument("--json")
    s.set_defaults(func=cmd_mc)

    s = sub.add_parser("fit", help="refit a Monte Carlo curve CSV")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--window", default="50:1000")
    s.add_argument("--json")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("oracle", help="brute-force expectations and the realizability census")
    s.add_argument("--mode", choices=("strings", "bernoulli", "realizability"), required=True)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, help="reach; omit for unrestricted LCS in strings mode")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("table", help="emit summary tables as CSV")
    s.add_argument("--which", choices=("gamma-exact", "mc-summary", "comparison"), required=True)
    s.add_argument("--r-values", default="1,2,3,4")
    s.add_argument("--trials", type=int, default=10000)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--mc-n-max", type=int, default=1000)
    s.add_argument("--exact-n-max", type=int, default=2000)
    s.add_argument("--mc-dir", help="read Monte Carlo curves mc_<model>_k2_r<r>.csv from here")
    s.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_table)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, UnsupportedParameters, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except AssertionError as exc:
        print(f"internal assertion failed: {exc}", file=sys.stderr)
        return EXIT_ASSERT


if __name__ == "__main__":
    sys.exit(main())

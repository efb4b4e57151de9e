"""Command-line front end.

Each subcommand prints a human-readable summary; ``--json PATH`` also
writes a schema-tagged document with the same numbers at full precision.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import circuitry, expdata, interference, setmodel, witness
from .errors import WitnessError

SCHEMA_PREFIX = "nwitness"


def _fmt(x) -> str:
    return "undefined" if x is None else f"{x:.6g}"


def _write_json(path, kind, payload):
    if path is None:
        return
    doc = {"schema": f"{SCHEMA_PREFIX}.{kind}/1", **payload}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def cmd_threshold(args, out):
    p_star = witness.ideal_threshold(args.n)
    print(f"ideal threshold p* = {_fmt(p_star)}", file=out)
    payload = {"n": args.n, "ideal": p_star}
    if args.config:
        cfg = circuitry.load_config(args.config)
        if cfg.n != args.n:
            raise WitnessError(f"--n {args.n} does not match n = {cfg.n} in {args.config}")
        nt = witness.nonideal_threshold(cfg)
        print(f"non-ideal threshold = {_fmt(nt.value)} (worst case {_fmt(nt.worst_case)})", file=out)
        for j, v in enumerate(nt.per_scenario, start=1):
            print(f"  scenario BS{j} distinguishable: {_fmt(v)}", file=out)
        payload["nonideal"] = nt.as_dict()
    _write_json(args.json, "threshold", payload)
    return 0


def cmd_simulate(args, out):
    cfg = circuitry.load_config(args.config)
    U = circuitry.build_witness_circuit(cfg)
    inputs = circuitry.canonical_input(cfg.n)
    if args.mixture:
        mix = interference.load_mixture(args.mixture)
        if mix.n != cfg.n:
            raise WitnessError(f"mixture describes {mix.n} photons but circuit has n = {cfg.n}")
        dist = interference.mixture_distribution(U, inputs, mix)
        what = "mixture " + ", ".join(f"{k}:{v:g}" for k, v in mix.weights.items())
    else:
        if len(args.label) != cfg.n:
            raise WitnessError(f"label {args.label!r} has {len(args.label)} letters, expected {cfg.n}")
        dist = interference.extremal_distribution(U, inputs, args.label)
        what = f"label {interference.canonical_label(args.label)}"
    p_b = interference.bunching_probability(dist)
    per_bs = [interference.conditional_bs_bunching(dist, k) for k in range(1, cfg.d + 1)]

    print(f"# {what}, n = {cfg.n}, {cfg.mode_count} modes", file=out)
    print("# pattern\tprobability\tby-BS", file=out)
    for pat in dist.patterns():
        grouped = "|".join(
            f"{a}{b}" for a, b in zip(*[iter(circuitry.presentation_pattern(pat, cfg.d))] * 2)
        )
        print(f"{','.join(map(str, pat))}\t{dist.probabilities[pat]:.10g}\t{grouped}", file=out)
    print(f"p_b = {_fmt(p_b)}", file=out)
    for k, v in enumerate(per_bs, start=1):
        print(f"p_b(BS{k}) = {_fmt(v)}", file=out)

    if args.counts_out:
        table = expdata.distribution_to_table(dist, scale=args.scale, run_label=what)
        Path(args.counts_out).write_text(table.to_text())
    _write_json(
        args.json,
        "simulation",
        {
            "n": cfg.n,
            "modes": cfg.mode_count,
            "source": what,
            "distribution": [
                {"pattern": list(pat), "probability": dist.probabilities[pat]} for pat in dist.patterns()
            ],
            "p_b": p_b,
            "per_bs": per_bs,
        },
    )
    return 0


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def cmd_bounds(args, out):
    interval = witness.c1_bounds(args.pb, args.n)
    p_star = witness.ideal_threshold(args.n)
    v = witness.verdict(args.pb, p_star, args.stderr)
    print(f"threshold p* = {_fmt(p_star)}", file=out)
    print(f"c1 interval = [{interval.lower:.4g}, {interval.upper:.4g}]", file=out)
    tighter = None
    if args.per_bs:
        tighter = witness.tighter_c1_upper(args.per_bs)
        print(f"tighter c1 upper = {tighter:.4g}", file=out)
    print(f"verdict = {v.describe()}", file=out)
    _write_json(
        args.json,
        "bounds",
        {
            "n": args.n,
            "p_b": args.pb,
            "stderr": args.stderr,
            "ideal_threshold": p_star,
            "c1_interval": interval.as_dict(),
            "tighter_c1_upper": tighter,
            "verdict": v.as_dict(),
        },
    )
    return 0


def cmd_sets_check(args, out):
    if args.n < 2:
        raise WitnessError("--n must be at least 2")
    if args.trials < 1:
        raise WitnessError("--trials must be positive")
    worst = np.inf
    worst_trial = None
    violations = 0
    for t in range(args.trials):
        check = setmodel.check_family(setmodel.random_family(args.n, [args.seed, t]))
        if check.worst < -1e-12:
            violations += 1
        if check.worst < worst:
            worst, worst_trial = check.worst, t
    print(f"families checked = {args.trials} (n = {args.n}, seed = {args.seed})", file=out)
    print(f"worst slack = {worst:.3e} (trial {worst_trial})", file=out)
    print(f"violations = {violations}", file=out)
    _write_json(
        args.json,
        "sets-check",
        {
            "n": args.n,
            "trials": args.trials,
            "seed": args.seed,
            "worst_slack": worst,
            "worst_trial": worst_trial,
            "violations": violations,
        },
    )
    return 0 if violations == 0 else 1


def cmd_analyze(args, out):
    table = expdata.load_counts(args.counts)
    cfg = circuitry.load_config(args.config)
    report = expdata.analyze(table, cfg)
    out.write(report.summary())
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nwitness", description="Genuine n-photon indistinguishability witness toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", metavar="PATH", help="also write a structured report")
        p.set_defaults(func=func)
        return p

    p = add("threshold", cmd_threshold, "ideal and non-ideal bunching thresholds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--config", metavar="FILE")

    p = add("simulate", cmd_simulate, "exact output distribution of a circuit")
    p.add_argument("--config", metavar="FILE", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--label", help="extremal label such as AAB")
    src.add_argument("--mixture", metavar="FILE", help="file of LABEL = weight lines")
    p.add_argument("--counts-out", metavar="PATH", help="write the distribution as a count table")
    p.add_argument("--scale", type=float, default=1e12, help="counts per unit probability for --counts-out")

    p = add("bounds", cmd_bounds, "c1 interval and verdict from a bunching probability")
    p.add_argument("--pb", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stderr", type=float, default=0.0)
    p.add_argument("--per-bs", type=_float_list, metavar="P1,P2,...")

    p = add("sets-check", cmd_sets_check, "random check of the set-intersection bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = add("analyze", cmd_analyze, "witness report from an experimental count table")
    p.add_argument("--counts", metavar="FILE", required=True)
    p.add_argument("--config", metavar="FILE", required=True)
    return parser


def run(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (WitnessError, OSError) as exc:
        print(f"nwitness {args.command}: error: {exc}", file=sys.stderr)
        return 1


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

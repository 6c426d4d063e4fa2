"""Command-line front end.

Subcommands: simulate (Monte Carlo run to summary JSON), theory (print
closed-form constants), inspect (classify one matrix from the shared
text format), plotdata (per-group Sylow histogram CSV for plotting).

Exit codes: 0 success, 1 internal assertion, 2 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__, exactla, invariants, montecarlo, theory
from .abelian import is_cyclic
from .exactla import MatrixFormatError
from .graphgen import AdjacencyMatrix, ModelSpec
from .montecarlo import RunConfig, SampleError

_MODEL_NAMES = {
    "bernoulli": "bernoulli",
    "erdos": "erdos_loops",
    "regular": "regular_matchings",
    "shifted": "shifted_bernoulli",
    "uniform": "uniform_counts",
    "polygon": "cuntz_polygon",
}


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)  # accepts "a/b" and exact decimal strings
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cuntzmc",
                                 description="K-theory statistics of random multigraphs")
    ap.add_argument("--version", action="version", version=f"cuntzmc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte Carlo sample")
    sim.add_argument("--model", required=True, choices=sorted(_MODEL_NAMES))
    sim.add_argument("--n", type=int, default=0, help="vertex count")
    sim.add_argument("--q", type=_parse_rational, help="edge probability (a/b or decimal)")
    sim.add_argument("--r", type=int, help="regularity degree")
    sim.add_argument("--m1", type=int, help="forward edge count (uniform model)")
    sim.add_argument("--m2", type=int, help="backward edge count (uniform model)")
    sim.add_argument("--mbar", type=_parse_int_list, help="polygon edge counts, e.g. 2,3")
    sim.add_argument("--samples", type=int, required=True)
    sim.add_argument("--seed", type=int, required=True, help="master seed")
    sim.add_argument("--primes", type=_parse_int_list, default=(2, 3, 5, 7))
    sim.add_argument("--max-exp", type=int, default=3)
    sim.add_argument("--out", required=True, help="summary JSON path")
    sim.add_argument("--raw", help="optional per-sample CSV path")
    sim.add_argument("--workers", type=int)

    th = sub.add_parser("theory", help="print closed-form constants")
    th.add_argument("name", nargs="?", help="constant name (see --list)")
    th.add_argument("--list", action="store_true")
    th.add_argument("--p", type=int)
    th.add_argument("--r", type=int)
    th.add_argument("--json", action="store_true")

    ins = sub.add_parser("inspect", help="classify one adjacency matrix")
    ins.add_argument("--matrix", required=True, help="matrix text file")
    ins.add_argument("--json", action="store_true")

    pd = sub.add_parser("plotdata", help="per-group histogram CSV from a run summary")
    pd.add_argument("--in", dest="infile", required=True, help="summary JSON from simulate")
    pd.add_argument("--stat", required=True, choices=["sylow"])
    pd.add_argument("--p", type=int, required=True)
    pd.add_argument("--out", help="output CSV (default stdout)")
    return ap


def _cmd_simulate(args, parser) -> int:
    spec_kwargs = dict(kind=_MODEL_NAMES[args.model], n=args.n, q=args.q, r=args.r,
                       m1=args.m1, m2=args.m2, mbar=args.mbar)
    try:
        spec = ModelSpec(**spec_kwargs)
        config = RunConfig(
            model=spec, samples=args.samples, master_seed=args.seed,
            primes=args.primes, max_exp=args.max_exp, workers=args.workers,
            emit_raw=args.raw is not None,
        )
    except ValueError as exc:
        parser.error(str(exc))  # exits 2
    try:
        summary = montecarlo.run_to_summary(config, raw_path=args.raw,
                                            tool_version=__version__)
    except SampleError as exc:
        print(f"internal assertion: {exc}", file=sys.stderr)
        return 1
    with open(args.out, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(args.out + ".manifest.json", "w") as fh:
        json.dump(summary["manifest"], fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out} ({summary['tallies']['m']} samples)")
    return 0


def _cmd_theory(args, parser) -> int:
    if args.list:
        for name, desc in theory.list_constants().items():
            print(f"{name:26s} {desc}")
        return 0
    if not args.name:
        parser.error("give a constant name or --list")
    try:
        tv = theory.constant(args.name, p=args.p, r=args.r)
    except (KeyError, ValueError) as exc:
        parser.error(f"unknown or underspecified constant: {exc}")
    if args.json:
        print(json.dumps({args.name: {"value": tv.value, "status": tv.status,
                                      "description": tv.description}}, sort_keys=True))
    else:
        print(f"{args.name} = {tv.value:.5f}  [{tv.status}] {tv.description}")
    return 0


def _cmd_inspect(args, parser) -> int:
    try:
        with open(args.matrix) as fh:
            m = exactla.parse_matrix_text(fh.read())
    except OSError as exc:
        parser.error(str(exc))
    except MatrixFormatError as exc:
        parser.error(str(exc))
    if m.rows != m.cols:
        parser.error("adjacency matrix must be square")
    if any(x < 0 for row in m.entries for x in row):
        parser.error("adjacency entries must be nonnegative")
    adj = AdjacencyMatrix(m.rows, m.entries)

    shifted = exactla.IntMatrix.from_rows(
        [[m.entries[j][i] - (i == j) for j in range(m.rows)] for i in range(m.rows)]
    )
    d = exactla.snf(shifted).d
    inv = invariants.compute_invariant(adj)
    flags = invariants.predicate_flags(inv)

    if args.json:
        payload = {
            "n": inv.n,
            "snf_diagonal": list(d),
            "k0": str(inv.k0),
            "k0_invariant_factors": list(inv.k0.invariant_factors),
            "k0_free_rank": inv.k0.free_rank,
            "k1_rank": inv.k1_rank,
            "unit_class": None if inv.unit_class is None else list(inv.unit_class),
            "det_i_minus_a_sign": inv.det_i_minus_a_sign,
            "flags": flags,
        }
        print(json.dumps(payload, sort_keys=True))
        return 0

    print(f"n = {inv.n}")
    print("SNF diagonal of A^t - I:", " ".join(str(x) for x in d))
    print(f"K0 = {inv.k0}")
    print(f"K1 rank = {inv.k1_rank}")
    if inv.unit_class is None:
        print("unit = NA (infinite K0: no classification)")
    else:
        unit = ";".join(str(c) for c in inv.unit_class) or "0"
        print(f"unit = {unit}")
    print(f"det(I - A) sign = {inv.det_i_minus_a_sign:+d}" if inv.det_i_minus_a_sign
          else "det(I - A) sign = 0")
    yn = lambda b: "yes" if b else "no"
    print(f"connected = {yn(inv.strongly_connected)}, sinks = {yn(inv.has_sink)}, "
          f"permutation = {yn(inv.is_permutation)}")
    print(f"stably Cuntz polygon: {yn(flags['stably_cuntz'])}")
    print(f"exactly Cuntz polygon: {yn(flags['exact_polygon'])}")
    if flags["exact_cuntz"]:
        print(f"exactly Cuntz: O_{inv.k0.order + 1}")
    else:
        print("exactly Cuntz: no")
    print(f"full shift: {yn(flags['full_shift'])}")
    return 0


def _cmd_plotdata(args, parser) -> int:
    try:
        with open(args.infile) as fh:
            summary = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(str(exc))
    counts = summary.get("tallies", {}).get("counts", {})
    m = summary.get("tallies", {}).get("m", 0)
    max_exp = summary.get("manifest", {}).get("config", {}).get("max_exp", 3)
    bars = montecarlo.sylow_bar_labels(args.p, max_exp)
    if not any(key in counts for key, _ in bars):
        parser.error(f"stat sylow p={args.p} absent from run")
    comparison = {rec["stat"]: rec for rec in summary.get("theory_comparison", [])}

    lines = ["group_label,empirical_freq,ci_lo,ci_hi,theory_value,theory_status"]
    for key, label in bars:
        if key not in counts:
            continue
        c = montecarlo.ci(counts[key], m)
        rec = comparison.get(key) or {}
        tval = rec.get("theory")
        tstat = rec.get("status")
        lines.append(
            f"{label},{c['phat']:.6f},{c['lo']:.6f},{c['hi']:.6f},"
            f"{'' if tval is None else format(tval, '.6f')},{tstat or ''}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate":
        return _cmd_simulate(args, parser)
    if args.command == "theory":
        return _cmd_theory(args, parser)
    if args.command == "inspect":
        return _cmd_inspect(args, parser)
    return _cmd_plotdata(args, parser)


if __name__ == "__main__":
    sys.exit(main())

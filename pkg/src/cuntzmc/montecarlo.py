"""Sampling harness: generate m independent samples, fold the
classification records into tallies, attach confidence intervals and
compare against the closed-form limits.

Work is distributed by sharding the sample-index range into contiguous
blocks; every sample is seeded by (master_seed, sample_index) alone,
and tallies merge by summation, so results are byte-identical for any
worker count.  A sample that trips an internal consistency assertion
aborts the whole run with the offending (seed, index) attached.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import multiprocessing
import os
import time
from dataclasses import dataclass
from fractions import Fraction

from . import abelian, invariants, theory
from .abelian import FinAbGroup
from .graphgen import ModelSpec, SeedSpec, generate
from .theory import TheoryValue, TruncationPolicy

__all__ = [
    "RunConfig",
    "TallySheet",
    "SampleError",
    "Z99",
    "run",
    "ci",
    "compare",
    "theory_targets",
    "sylow_bar_labels",
    "summary_dict",
]

Z99 = 2.576  # normal 99% two-sided quantile, as used for all intervals


@dataclass(frozen=True)
class RunConfig:
    model: ModelSpec
    samples: int
    master_seed: int
    primes: tuple[int, ...] = (2, 3, 5, 7)
    max_exp: int = 3
    workers: int | None = None  # None = auto
    emit_raw: bool = False

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("need at least one sample")
        if self.max_exp < 1:
            raise ValueError("max_exp must be >= 1")
        for p in self.primes:
            if not abelian.is_prime(p):
                raise ValueError(f"{p} is not prime")


class SampleError(RuntimeError):
    """Internal assertion tripped while processing one sample."""

    def __init__(self, master_seed: int, sample_index: int, cause: str):
        super().__init__(
            f"sample (seed={master_seed}, index={sample_index}) failed: {cause}"
        )
        self.master_seed = master_seed
        self.sample_index = sample_index


def tally_keys(primes, max_exp: int) -> list[str]:
    """Fixed key order for counts, raw rows and serialization."""
    keys = [
        "connected",
        "sinks_present",
        "k1_nonzero",
        "k0_cyclic",
        "det_negative",
        "full_shift",
        "stably_cuntz",
        "exact_polygon",
        "exact_cuntz",
    ]
    for p in primes:
        keys.append(f"sylow{p}_trivial")
        keys.append(f"sylow{p}_cyclic")
        for n in range(1, max_exp + 1):
            keys.append(f"sylow{p}_is_pN_{n}")
        for n in range(2, max_exp + 1):
            keys.append(f"sylow{p}_is_elem_{n}")
    return keys


@dataclass(frozen=True)
class TallySheet:
    m: int
    counts: dict[str, int]

    def __post_init__(self):
        for k, v in self.counts.items():
            if not 0 <= v <= self.m:
                raise ValueError(f"count {k}={v} outside [0, {self.m}]")


def _sample_flags(spec: ModelSpec, master_seed: int, idx: int, primes, max_exp: int):
    """Classify one sample; returns (flag dict, invariant, profile)."""
    adj = generate(spec, SeedSpec(master_seed, idx))
    inv = invariants.compute_invariant(adj)
    flags = invariants.predicate_flags(inv)
    profile = invariants.sylow_profile(inv, primes, max_exp)
    return flags, inv, profile


def _fold(counts: dict[str, int], flags, profile, primes, max_exp: int) -> None:
    for key in ("connected", "sinks_present", "k1_nonzero", "k0_cyclic",
                "det_negative", "full_shift", "stably_cuntz",
                "exact_polygon", "exact_cuntz"):
        counts[key] += flags[key]
    for p in primes:
        e = profile[p]
        counts[f"sylow{p}_trivial"] += e["trivial"]
        counts[f"sylow{p}_cyclic"] += e["cyclic"]
        for n in range(1, max_exp + 1):
            counts[f"sylow{p}_is_pN_{n}"] += e["is_pN"][n]
        for n in range(2, max_exp + 1):
            counts[f"sylow{p}_is_elem_{n}"] += e["is_elem_N"][n]


def raw_header(primes) -> list[str]:
    cols = [
        "sample_index", "connected", "sinks_present", "is_permutation",
        "k1_rank", "k0_invariant_factors", "unit_class", "det_sign",
        "k0_cyclic", "stably_cuntz", "exact_polygon", "exact_cuntz", "full_shift",
    ]
    cols.extend(f"sylow{p}_partition" for p in primes)
    return cols


def _raw_row(idx: int, flags, inv, profile, primes) -> list:
    unit = "NA" if inv.unit_class is None else ";".join(str(c) for c in inv.unit_class)
    row = [
        idx,
        int(flags["connected"]),
        int(flags["sinks_present"]),
        int(flags["is_permutation"]),
        inv.k1_rank,
        ";".join(str(d) for d in inv.k0.invariant_factors),
        unit,
        inv.det_i_minus_a_sign,
        int(flags["k0_cyclic"]),
        int(flags["stably_cuntz"]),
        int(flags["exact_polygon"]),
        int(flags["exact_cuntz"]),
        int(flags["full_shift"]),
    ]
    row.extend("+".join(str(x) for x in profile[p]["partition"]) for p in primes)
    return row


def _block_worker(args):
    spec, master_seed, lo, hi, primes, max_exp, part_path = args
    counts = {k: 0 for k in tally_keys(primes, max_exp)}
    writer = None
    handle = None
    if part_path is not None:
        handle = open(part_path, "w", newline="")
        writer = csv.writer(handle)
    try:
        for idx in range(lo, hi):
            try:
                flags, inv, profile = _sample_flags(spec, master_seed, idx, primes, max_exp)
            except (invariants.InvariantConsistencyError, ValueError) as exc:
                raise SampleError(master_seed, idx, repr(exc)) from exc
            _fold(counts, flags, profile, primes, max_exp)
            if writer is not None:
                writer.writerow(_raw_row(idx, flags, inv, profile, primes))
    finally:
        if handle is not None:
            handle.close()
    return counts


def run(config: RunConfig, raw_path: str | None = None) -> TallySheet:
    """Execute the full sample and return the folded tally.

    When raw_path is given (or config.emit_raw), per-sample rows are
    streamed to CSV; worker shards write part files that are merged in
    index order, so the output is identical for any worker count.
    """
    if config.emit_raw and raw_path is None:
        raise ValueError("emit_raw requires a raw_path")
    m = config.samples
    workers = config.workers or min(os.cpu_count() or 1, 8)
    workers = max(1, min(workers, m))

    nblocks = workers * 4 if workers > 1 else 1
    nblocks = min(nblocks, m)
    bounds = [(b * m // nblocks, (b + 1) * m // nblocks) for b in range(nblocks)]
    parts = [None] * nblocks
    if raw_path is not None:
        parts = [f"{raw_path}.part{b:04d}" for b in range(nblocks)]
    jobs = [
        (config.model, config.master_seed, lo, hi, config.primes, config.max_exp, parts[b])
        for b, (lo, hi) in enumerate(bounds)
    ]

    if workers == 1:
        block_counts = [_block_worker(j) for j in jobs]
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(workers) as pool:
            block_counts = pool.map(_block_worker, jobs)

    counts = {k: 0 for k in tally_keys(config.primes, config.max_exp)}
    for bc in block_counts:
        for k, v in bc.items():
            counts[k] += v

    if raw_path is not None:
        with open(raw_path, "w", newline="") as out:
            csv.writer(out).writerow(raw_header(config.primes))
            for part in parts:
                with open(part) as fh:
                    out.write(fh.read())
                os.remove(part)

    return TallySheet(m=m, counts=counts)


def ci(count: int, m: int) -> dict:
    """99% normal-approximation interval, clamped to [0, 1]."""
    if m < 1:
        raise ValueError("need m >= 1")
    if not 0 <= count <= m:
        raise ValueError("count outside [0, m]")
    phat = count / m
    half = Z99 * math.sqrt(phat * (1.0 - phat) / m)
    return {
        "count": count,
        "phat": phat,
        "half": half,
        "lo": max(0.0, phat - half),
        "hi": min(1.0, phat + half),
    }


def ci_report(tally: TallySheet) -> dict[str, dict]:
    return {k: ci(v, tally.m) for k, v in tally.counts.items()}


# ---------------------------------------------------------------------------
# Theory targets per model
# ---------------------------------------------------------------------------


def _sylow_group_targets(kind: str, spec: ModelSpec, p: int, max_exp: int,
                         policy: TruncationPolicy) -> dict[str, TheoryValue | None]:
    """Limit frequencies for the per-group Sylow bars, where known."""
    out: dict[str, TheoryValue | None] = {}

    def grp(label: str, G: FinAbGroup):
        if kind in ("bernoulli", "shifted_bernoulli"):
            out[label] = TheoryValue(theory.p_sylow_iid(G, (p,), policy=policy), "theorem",
                                     f"iid Sylow-{p} law")
        elif kind == "erdos_loops":
            out[label] = TheoryValue(theory.p_sylow_symmetric(G, (p,), policy=policy),
                                     "theorem", f"symmetric Sylow-{p} law")
        elif kind == "regular_matchings" and p % 2 and (spec.r - 1) % p:
            out[label] = TheoryValue(theory.p_sylow_symmetric(G, (p,), policy=policy),
                                     "theorem", f"regular Sylow-{p} law")
        else:
            out[label] = None

    grp(f"sylow{p}_trivial", FinAbGroup())
    for n in range(1, max_exp + 1):
        grp(f"sylow{p}_is_pN_{n}", FinAbGroup((p**n,)))
    for n in range(2, max_exp + 1):
        grp(f"sylow{p}_is_elem_{n}", FinAbGroup((p,) * n))
    return out


def theory_targets(spec: ModelSpec, primes, max_exp: int,
                   *, policy: TruncationPolicy = theory.DEFAULT_POLICY
                   ) -> dict[str, TheoryValue | None]:
    """Limit value (and standing) for every tallied statistic, or None
    where nothing is known (the open determinant-sign questions)."""
    kind = spec.kind
    t: dict[str, TheoryValue | None] = {k: None for k in tally_keys(primes, max_exp)}

    if kind in ("bernoulli", "shifted_bernoulli") and spec.q is not None and 0 < spec.q < 1:
        det_status = "theorem" if kind == "shifted_bernoulli" else "conjecture"
        t["connected"] = TheoryValue(1.0, "theorem", "a.a.s. strongly connected")
        t["k1_nonzero"] = TheoryValue(0.0, "theorem", "a.a.s. nonsingular")
        t["stably_cuntz"] = TheoryValue(1.0, "theorem", "a.a.s. stably a Cuntz polygon")
        t["k0_cyclic"] = TheoryValue(theory.p_cuntz_iid(policy=policy), "theorem",
                                     "K0 cyclic")
        t["det_negative"] = TheoryValue(0.5, det_status, "determinant sign symmetric")
        t["full_shift"] = TheoryValue(theory.p_cuntz_iid(policy=policy) / 2, det_status,
                                      "flow equivalent to a full shift")
        t["exact_polygon"] = TheoryValue(theory.exact_polygon_iid(policy=policy),
                                         "conjecture", "exactly a Cuntz polygon")
        t["exact_cuntz"] = TheoryValue(theory.exact_cuntz_iid(policy=policy),
                                       "conjecture", "exactly a Cuntz algebra")
        for p in primes:
            t[f"sylow{p}_cyclic"] = TheoryValue(theory.p_cyclic_iid(p, policy=policy),
                                                "theorem", f"Sylow-{p} cyclic")
            t.update(_sylow_group_targets(kind, spec, p, max_exp, policy))

    elif kind == "erdos_loops" and spec.q is not None and 0 < spec.q < 1:
        t["connected"] = TheoryValue(1.0, "theorem", "a.a.s. strongly connected")
        t["k1_nonzero"] = TheoryValue(0.0, "theorem", "a.a.s. nonsingular")
        t["stably_cuntz"] = TheoryValue(1.0, "theorem", "a.a.s. stably a Cuntz polygon")
        t["k0_cyclic"] = TheoryValue(theory.p_cyclic_symmetric_all(policy=policy),
                                     "conjecture", "K0 cyclic (all primes at once)")
        t["det_negative"] = TheoryValue(math.nan, "open", "open question: limit of P(det<0)")
        t["full_shift"] = TheoryValue(math.nan, "open",
                                      "open question: P(det<0 and cyclic)")
        t["exact_polygon"] = TheoryValue(theory.exact_polygon_symmetric(policy=policy),
                                         "conjecture", "exactly a Cuntz polygon")
        t["exact_cuntz"] = TheoryValue(theory.exact_cuntz_symmetric(policy=policy),
                                       "conjecture", "exactly a Cuntz algebra")
        for p in primes:
            t[f"sylow{p}_cyclic"] = TheoryValue(theory.p_cyclic_symmetric(p, policy=policy),
                                                "theorem", f"Sylow-{p} cyclic")
            t.update(_sylow_group_targets(kind, spec, p, max_exp, policy))

    elif kind == "regular_matchings":
        t["connected"] = TheoryValue(1.0, "theorem", "a.a.s. strongly connected")
        t["k1_nonzero"] = TheoryValue(0.0, "theorem", "a.a.s. nonsingular")
        t["stably_cuntz"] = TheoryValue(1.0, "theorem", "a.a.s. stably a Cuntz polygon")
        t["k0_cyclic"] = TheoryValue(theory.gamma_r(spec.r, policy=policy), "conjecture",
                                     "K0 cyclic") if spec.r >= 3 else None
        t["det_negative"] = TheoryValue(math.nan, "open", "open question: limit of P(det<0)")
        t["full_shift"] = TheoryValue(math.nan, "open",
                                      "open question: P(det<0 and cyclic)")
        t["exact_polygon"] = TheoryValue(math.nan, "open",
                                         "open question: conjectured to vanish")
        t["exact_cuntz"] = TheoryValue(math.nan, "open",
                                       "open question: conjectured to vanish")
        if spec.r >= 3:
            for p in primes:
                status = "theorem" if (p % 2 and (spec.r - 1) % p) else "conjecture"
                t[f"sylow{p}_cyclic"] = TheoryValue(
                    theory.pi_pr(p, spec.r, policy=policy), status, f"Sylow-{p} cyclic")
                t.update(_sylow_group_targets(kind, spec, p, max_exp, policy))

    elif kind == "uniform_counts":
        cap = spec.n * (spec.n - 1) // 2
        if 0 < spec.m1 < cap and 0 < spec.m2 < cap:  # nondegenerate densities
            t["k1_nonzero"] = TheoryValue(0.0, "theorem", "a.a.s. nonsingular")
            t["stably_cuntz"] = TheoryValue(1.0, "theorem",
                                            "a.a.s. stably a Cuntz polygon")

    elif kind == "cuntz_polygon":
        G = abelian.from_diagonal(spec.mbar)
        cyclic = 1.0 if abelian.is_cyclic(G) else 0.0
        t["connected"] = TheoryValue(1.0, "theorem", "polygon graphs are connected")
        t["k1_nonzero"] = TheoryValue(0.0, "theorem", "polygon matrices are nonsingular")
        t["k0_cyclic"] = TheoryValue(cyclic, "theorem", "pairwise coprimality test")
        t["det_negative"] = TheoryValue(1.0, "theorem", "det(I-A) = -prod(m_i)")
        t["full_shift"] = TheoryValue(cyclic, "theorem", "negative det and cyclic")
        t["exact_polygon"] = TheoryValue(1.0, "theorem", "the polygon itself")
        t["exact_cuntz"] = TheoryValue(cyclic, "theorem", "cyclic iff a Cuntz algebra")
        if not (spec.mbar == (1,) * len(spec.mbar)):
            t["stably_cuntz"] = TheoryValue(1.0, "theorem", "not a permutation matrix")
        for p in primes:
            lam = abelian.sylow(G, p)
            t[f"sylow{p}_cyclic"] = TheoryValue(1.0 if len(lam) <= 1 else 0.0,
                                                "theorem", "deterministic")
            t[f"sylow{p}_trivial"] = TheoryValue(1.0 if not lam else 0.0,
                                                 "theorem", "deterministic")

    return t


def compare(tally: TallySheet, spec: ModelSpec, primes, max_exp: int,
            *, policy: TruncationPolicy = theory.DEFAULT_POLICY) -> list[dict]:
    """Per-statistic comparison records; annotation only, never a gate."""
    targets = theory_targets(spec, primes, max_exp, policy=policy)
    out = []
    for stat in tally_keys(primes, max_exp):
        c = ci(tally.counts[stat], tally.m)
        tv = targets.get(stat)
        rec = {
            "stat": stat,
            "count": c["count"],
            "phat": c["phat"],
            "ci_lo": c["lo"],
            "ci_hi": c["hi"],
            "theory": None,
            "status": None,
            "z": None,
            "pass": None,
        }
        if tv is not None:
            rec["status"] = tv.status
            if not math.isnan(tv.value):
                rec["theory"] = tv.value
                var = tv.value * (1 - tv.value)
                if var > 0:
                    rec["z"] = (c["phat"] - tv.value) / math.sqrt(var / tally.m)
                rec["pass"] = bool(c["lo"] <= tv.value <= c["hi"])
        out.append(rec)
    return out


def sylow_bar_labels(p: int, max_exp: int) -> list[tuple[str, str]]:
    """(tally key, human label) pairs for the Sylow-p histogram."""
    bars = [(f"sylow{p}_trivial", "0")]
    bars.extend((f"sylow{p}_is_pN_{n}", f"Z/{p**n}") for n in range(1, max_exp + 1))
    bars.extend((f"sylow{p}_is_elem_{n}", f"(Z/{p})^{n}") for n in range(2, max_exp + 1))
    return bars


# ---------------------------------------------------------------------------
# Summary serialization
# ---------------------------------------------------------------------------


def _config_echo(config: RunConfig) -> dict:
    spec = config.model
    return {
        "model": spec.kind,
        "n": spec.n,
        "q": None if spec.q is None else f"{spec.q.numerator}/{spec.q.denominator}",
        "r": spec.r,
        "m1": spec.m1,
        "m2": spec.m2,
        "mbar": list(spec.mbar) if spec.mbar else None,
        "samples": config.samples,
        "master_seed": config.master_seed,
        "primes": list(config.primes),
        "max_exp": config.max_exp,
        "workers": config.workers,
        "emit_raw": config.emit_raw,
    }


def config_from_echo(echo: dict) -> RunConfig:
    """Rebuild a RunConfig from a manifest echo (exact round trip)."""
    q = None if echo["q"] is None else Fraction(echo["q"])
    spec = ModelSpec(
        kind=echo["model"], n=echo["n"] or 0, q=q, r=echo["r"],
        m1=echo["m1"], m2=echo["m2"],
        mbar=tuple(echo["mbar"]) if echo["mbar"] else None,
    )
    return RunConfig(
        model=spec, samples=echo["samples"], master_seed=echo["master_seed"],
        primes=tuple(echo["primes"]), max_exp=echo["max_exp"],
        workers=echo["workers"], emit_raw=echo["emit_raw"],
    )


def summary_dict(config: RunConfig, tally: TallySheet, wall_time_s: float,
                 *, tool_version: str) -> dict:
    """Summary JSON payload: schema_version, manifest, tallies, cis,
    theory_comparison.  The content hash covers everything except the
    manifest itself, so reruns are verifiable byte for byte."""
    cis = ci_report(tally)
    comparison = compare(tally, config.model, config.primes, config.max_exp)
    body = {
        "tallies": {"m": tally.m, "counts": tally.counts},
        "cis": cis,
        "theory_comparison": comparison,
    }
    blob = json.dumps(body, sort_keys=True, separators=(",", ":")).encode()
    return {
        "schema_version": "1",
        "manifest": {
            "tool": "cuntzmc",
            "version": tool_version,
            "config": _config_echo(config),
            "wall_time_s": round(wall_time_s, 3),
            "content_hash": hashlib.sha256(blob).hexdigest(),
        },
        **body,
    }


def run_to_summary(config: RunConfig, raw_path: str | None = None,
                   *, tool_version: str = "0.1.0") -> dict:
    t0 = time.time()
    tally = run(config, raw_path=raw_path)
    return summary_dict(config, tally, time.time() - t0, tool_version=tool_version)

"""Acceptance suite.

Every criterion prints one PASS/FAIL line (run with -s to see them all)
and is asserted at its stated tolerance.  Monte Carlo criteria use the
rule: the empirical proportion must land within its own 99% interval
widened by a band around the target, where the band is 3.3 binomial
standard errors unless the criterion states an explicit width.

Desk-scale runs: m = 10^4 at n = 50 (m = 10^3 for the n = 100 regular
run), fixed master seeds 101..105, worker count left to the machine
(results are worker-count independent, which is itself a criterion).
"""

import math
import time
from fractions import Fraction

import pytest

from cuntzmc import theory
from cuntzmc.abelian import FinAbGroup
from cuntzmc.graphgen import ModelSpec
from cuntzmc.montecarlo import RunConfig, Z99, compare, run

M_DESK = 10_000


def check(name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPT {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


def widened(count: int, m: int, target: float, band: float | None = None):
    """(ok, phat, width): |phat - target| <= own CI half-width + band."""
    phat = count / m
    half = Z99 * math.sqrt(phat * (1.0 - phat) / m)
    b = 3.3 * math.sqrt(target * (1.0 - target) / m) if band is None else band
    return abs(phat - target) <= half + b, phat, half + b


def band_check(name, tally, stat, target, band=None):
    ok, phat, width = widened(tally.counts[stat], tally.m, target, band)
    check(name, ok, f"{phat:.4f} vs {target:.5f}, allowed width {width:.4f}")


@pytest.fixture(scope="session")
def run_d50():
    return run(RunConfig(ModelSpec("bernoulli", n=50, q=Fraction(1, 2)),
                         samples=M_DESK, master_seed=101,
                         primes=(2, 3, 5, 7), max_exp=3))


@pytest.fixture(scope="session")
def run_shifted50():
    return run(RunConfig(ModelSpec("shifted_bernoulli", n=50, q=Fraction(1, 2)),
                         samples=M_DESK, master_seed=102, primes=(2,), max_exp=2))


@pytest.fixture(scope="session")
def run_e50():
    return run(RunConfig(ModelSpec("erdos_loops", n=50, q=Fraction(1, 2)),
                         samples=M_DESK, master_seed=103, primes=(2, 3), max_exp=2))


@pytest.fixture(scope="session")
def run_g50():
    return run(RunConfig(ModelSpec("regular_matchings", n=50, r=3),
                         samples=M_DESK, master_seed=104, primes=(2, 13), max_exp=3))


@pytest.fixture(scope="session")
def run_g100():
    return run(RunConfig(ModelSpec("regular_matchings", n=100, r=5),
                         samples=1000, master_seed=105, primes=(2,), max_exp=2))


class TestTheoryConstants:
    """Exact closed-form targets, tolerance 1e-4 unless noted, < 1 s."""

    def test_constants_block(self):
        t0 = time.time()
        rows = [
            ("p_cuntz_iid", theory.p_cuntz_iid(), 0.84694, 1e-4),
            ("fullshift_iid", theory.p_cuntz_iid() / 2, 0.42347, 1e-4),
            ("zeta_inverse_product", theory.exact_cuntz_iid(), 0.43576, 1e-4),
            ("dexact", theory.conjecture_constants()["dexact"].value, 0.48240, 1e-4),
            ("ecuntz", theory.conjecture_constants()["ecuntz"].value, 0.51451, 1e-4),
            ("eexact", theory.conjecture_constants()["eexact"].value, 0.60793, 1e-4),
            ("p_cyclic_symmetric_all", theory.p_cyclic_symmetric_all(), 0.79352, 1e-4),
            ("pi2", theory.conjecture_constants()["pi2"].value, 0.419, 1e-3),
            ("gamma_r_5", theory.gamma_r(5), 0.397, 1e-3),
            ("gamma_r_9", theory.gamma_r(9), 0.397, 1e-3),
            ("gamma_r_17", theory.gamma_r(17), 0.397, 1e-3),
        ]
        for name, got, want, tol in rows:
            check(f"theory.{name}", abs(got - want) < tol,
                  f"{got:.6f} vs {want} @ {tol:g}")
        check("theory.eexact_is_6_over_pi2",
              abs(theory.exact_polygon_symmetric() - 6 / math.pi**2) < 1e-5,
              f"{theory.exact_polygon_symmetric():.9f}")
        sylow13 = [
            (FinAbGroup(), 0.92265),
            (FinAbGroup((13,)), 0.07097),
            (FinAbGroup((169,)), 0.00546),
            (FinAbGroup((13, 13)), 0.00042),
            (FinAbGroup((13**3,)), 0.00042),
        ]
        for G, want in sylow13:
            got = theory.p_sylow_symmetric(G, primes=(13,))
            check(f"theory.sylow13[{G}]", abs(got - want) < 1e-5,
                  f"{got:.6f} vs {want} @ 1e-5")
        elapsed = time.time() - t0
        check("theory.runtime_under_1s", elapsed < 1.0, f"{elapsed:.3f} s")


class TestBernoulliDesk:
    """D_{50,1/2}, m = 10^4, seed 101."""

    def test_connected_all(self, run_d50):
        check("D50.connected", run_d50.counts["connected"] == run_d50.m,
              f"{run_d50.counts['connected']}/{run_d50.m}")

    def test_k1_always_trivial(self, run_d50):
        check("D50.k1_zero", run_d50.counts["k1_nonzero"] == 0,
              f"{run_d50.counts['k1_nonzero']} singular samples")

    def test_k0_cyclic(self, run_d50):
        band_check("D50.k0_cyclic", run_d50, "k0_cyclic", 0.84694)

    def test_sylow_cyclic(self, run_d50):
        for p, want in [(2, 0.86636), (3, 0.98022), (5, 0.99794), (7, 0.99951)]:
            band_check(f"D50.sylow{p}_cyclic", run_d50, f"sylow{p}_cyclic", want)

    def test_det_negative(self, run_d50):
        band_check("D50.det_negative", run_d50, "det_negative", 0.5)

    def test_full_shift(self, run_d50):
        band_check("D50.full_shift", run_d50, "full_shift", 0.42347)

    def test_exact_polygon_band(self, run_d50):
        phat = run_d50.counts["exact_polygon"] / run_d50.m
        ok = 0.47 <= phat <= 0.52
        check("D50.exact_polygon", ok,
              f"{phat:.4f} inside [0.47, 0.52]; candidate limits "
              f"0.51451 and 0.48240 are both quoted for this event")

    def test_exact_cuntz(self, run_d50):
        band_check("D50.exact_cuntz", run_d50, "exact_cuntz", 0.43576, band=0.015)


class TestShiftedDesk:
    """D_{50,1/2} + I, m = 10^4, seed 102."""

    def test_det_negative_half(self, run_shifted50):
        band_check("Dshift50.det_negative", run_shifted50, "det_negative", 0.5,
                   band=0.015)

    def test_full_shift(self, run_shifted50):
        band_check("Dshift50.full_shift", run_shifted50, "full_shift", 0.42347,
                   band=0.015)


class TestErdosDesk:
    """E_{50,1/2}, m = 10^4, seed 103."""

    def test_k0_cyclic(self, run_e50):
        band_check("E50.k0_cyclic", run_e50, "k0_cyclic", 0.79352, band=0.012)

    def test_sylow2_cyclic(self, run_e50):
        band_check("E50.sylow2_cyclic", run_e50, "sylow2_cyclic", 0.83884, band=0.011)

    def test_exact_polygon(self, run_e50):
        band_check("E50.exact_polygon", run_e50, "exact_polygon", 0.60793, band=0.015)

    def test_exact_cuntz(self, run_e50):
        # Target 0.48240 per the symmetric-model formula and the
        # reference data tables; the alternative label 0.51451 belongs
        # to the iid exact-polygon event (the two values appear swapped
        # in one statement of the source conjecture).  Both comparisons
        # are printed; the formula-consistent one gates.
        phat = run_e50.counts["exact_cuntz"] / run_e50.m
        print(f"ACCEPT-NOTE E50.exact_cuntz vs transposed 0.51451: "
              f"diff {abs(phat - 0.51451):.4f}")
        band_check("E50.exact_cuntz", run_e50, "exact_cuntz", 0.48240, band=0.015)


class TestRegularDesk:
    """G-hat_{50,3}, m = 10^4, seed 104."""

    SYLOW13_N50_CIS = {
        "sylow13_trivial": (0.9225, 0.9268),
        "sylow13_is_pN_1": (0.0672, 0.0713),
        "sylow13_is_pN_2": (0.0048, 0.0060),
        "sylow13_is_elem_2": (0.0003, 0.0006),
        "sylow13_is_pN_3": (0.0001, 0.0004),
    }

    def test_sylow13_inside_reference_cis(self, run_g50):
        for stat, (lo, hi) in self.SYLOW13_N50_CIS.items():
            phat = run_g50.counts[stat] / run_g50.m
            ok = max(lo - 0.005, 0.0) <= phat <= hi + 0.005
            check(f"G50.{stat}", ok, f"{phat:.4f} in [{max(lo-0.005,0):.4f}, {hi+0.005:.4f}]")

    def test_k1_rare_as_stated(self, run_g50):
        # Stated bound: at most 30 singular samples per 10^4.  The
        # bound traces to the reference n = 100 rate (57-65 per 10^5);
        # at n = 50 the true singularity rate of this model is about
        # 5.5e-3 (this implementation reproduces the reference n = 100
        # rate, 15 per 2*10^4, and the rate decays ~exponentially in n:
        # 4.7e-2 at n=30, 7.5e-3 at n=50, 1.3e-3 at n=70), so ~55 per
        # 10^4 is the correct value here and the stated bound cannot be
        # met at n = 50.  Kept as stated rather than recalibrated.
        count = run_g50.counts["k1_nonzero"]
        check("G50.k1_rare", count <= 30,
              f"{count} singular per {run_g50.m}; bound 30 is calibrated "
              f"for n=100 (see ledger)")

    def test_exact_polygon_essentially_never(self, run_g50):
        count = run_g50.counts["exact_polygon"]
        check("G50.exact_polygon_rare", count in (0, 1), f"count {count}")


class TestRegular100:
    """G-hat_{100,5}, m = 10^3, seed 105."""

    def test_k0_cyclic_near_gamma(self, run_g100):
        phat = run_g100.counts["k0_cyclic"] / run_g100.m
        check("G100.k0_cyclic", abs(phat - 0.395) <= 0.05,
              f"{phat:.4f} vs 0.395 +/- 0.05")


class TestDeterminism:
    def test_identical_across_worker_counts(self):
        base = dict(model=ModelSpec("bernoulli", n=50, q=Fraction(1, 2)),
                    samples=200, master_seed=106, primes=(2, 3), max_exp=2)
        results = [run(RunConfig(workers=w, **base)).counts for w in (1, 4, 8)]
        ok = results[0] == results[1] == results[2]
        check("determinism.workers_1_4_8", ok,
              "identical tallies" if ok else "tallies diverged")


class TestOpenQuestionEstimators:
    """The determinant-sign limits carry no theory value; the harness
    reports the estimators with intervals, tagged open, never gating."""

    def test_erdos_delta_sigma(self, run_e50):
        recs = {r["stat"]: r for r in
                compare(run_e50, ModelSpec("erdos_loops", n=50, q=Fraction(1, 2)),
                        (2, 3), 2)}
        for label, stat in [("delta_hat", "det_negative"), ("sigma_hat", "full_shift")]:
            r = recs[stat]
            ok = r["status"] == "open" and r["theory"] is None and r["pass"] is None
            check(f"open.E50.{label}", ok,
                  f"{r['phat']:.4f} CI [{r['ci_lo']:.4f}, {r['ci_hi']:.4f}] tagged open")

    def test_regular_epsilon_tau(self, run_g50):
        recs = {r["stat"]: r for r in
                compare(run_g50, ModelSpec("regular_matchings", n=50, r=3),
                        (2, 13), 3)}
        for label, stat in [("epsilon_hat", "det_negative"), ("tau_hat", "full_shift")]:
            r = recs[stat]
            ok = r["status"] == "open" and r["theory"] is None and r["pass"] is None
            check(f"open.G50.{label}", ok,
                  f"{r['phat']:.4f} CI [{r['ci_lo']:.4f}, {r['ci_hi']:.4f}] tagged open")

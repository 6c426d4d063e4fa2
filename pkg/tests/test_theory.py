"""Closed-form constants: frozen targets, tail bounds, cross-checks."""

import math

import pytest

from cuntzmc import abelian, theory
from cuntzmc.abelian import FinAbGroup
from cuntzmc.theory import TailBoundError, TruncationPolicy


def partitions(n: int):
    """All integer partitions of n, parts nonincreasing."""
    if n == 0:
        yield ()
        return
    def gen(rest, maxpart):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, maxpart), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail
    yield from gen(n, n)


class TestHeadlineConstants:
    def test_iid_cyclicity(self):
        assert abs(theory.p_cuntz_iid() - 0.84694) < 1e-4

    def test_exactness_constants(self):
        assert abs(theory.exact_cuntz_iid() - 0.43576) < 1e-4
        assert abs(theory.exact_polygon_iid() - 0.51451) < 1e-4
        assert abs(theory.exact_cuntz_symmetric() - 0.48240) < 1e-4
        assert abs(theory.exact_polygon_symmetric() - 0.60793) < 1e-4
        assert abs(theory.exact_polygon_symmetric() - 6 / math.pi**2) < 1e-12

    def test_symmetric_cyclicity(self):
        assert abs(theory.p_cyclic_symmetric_all() - 0.79352) < 1e-4
        assert abs(theory.p_cyclic_symmetric(2) - 0.83884) < 1e-4
        assert abs(theory.p_cyclic_symmetric(3) - 0.95851) < 1e-4

    def test_iid_per_prime_cyclicity(self):
        for p, want in [(2, 0.86636), (3, 0.98022), (5, 0.99794), (7, 0.99951)]:
            assert abs(theory.p_cyclic_iid(p) - want) < 1e-4

    def test_conjecture_constants_map(self):
        cc = theory.conjecture_constants()
        assert abs(cc["dcuntz"].value - 0.43576) < 1e-4
        assert abs(cc["ecuntz"].value - 0.51451) < 1e-4
        assert abs(cc["dexact"].value - 0.48240) < 1e-4
        assert abs(cc["eexact"].value - 0.60793) < 1e-4
        assert abs(cc["fullshift_iid"].value - 0.42347) < 1e-4
        assert abs(cc["pi2"].value - 0.419) < 1e-3
        assert all(tv.status == "conjecture" for tv in cc.values())


class TestRegularModel:
    def test_pi_pr(self):
        assert abs(theory.pi_pr(5, 6) - 0.7933) < 1e-3
        assert abs(theory.pi_pr(3, 7) - 0.639) < 1e-3
        # p not dividing 2(r-1) uses the proved k>=2 product
        assert abs(theory.pi_pr(3, 6) - theory.p_cyclic_symmetric(3)) < 1e-12
        assert abs(theory.pi_pr(2, 6) - 0.41942) < 1e-4

    def test_gamma_r(self):
        assert abs(theory.gamma_r(4) - 0.2645) < 1e-3
        assert abs(theory.gamma_r(5) - 0.39676) < 1e-4
        assert abs(theory.gamma_r(9) - 0.39676) < 1e-4
        assert abs(theory.gamma_r(6) - 0.31741) < 1e-4
        with pytest.raises(ValueError):
            theory.gamma_r(2)

    def test_gamma_is_product_of_pi(self):
        # gamma_r = prod_p pi_pr over all primes; check the finite part.
        for r in (4, 5, 6, 8):
            finite = 1.0
            rest = theory.p_cyclic_symmetric_all()
            for p in theory.primes_upto(50):
                finite *= theory.pi_pr(p, r) / theory.p_cyclic_symmetric(p)
            assert abs(theory.gamma_r(r) - finite * rest) < 1e-6


class TestSylowDistributions:
    def test_iid_trivial_and_small(self):
        base = theory.p_sylow_iid(FinAbGroup(), primes=(2,))
        assert abs(base - 0.28879) < 1e-4
        # |Aut(Z/2)| = 1, so the same value
        assert abs(theory.p_sylow_iid(FinAbGroup((2,))) - base) < 1e-12

    def test_symmetric_sylow13_limit_row(self):
        targets = [
            (FinAbGroup(), 0.92265),
            (FinAbGroup((13,)), 0.07097),
            (FinAbGroup((169,)), 0.00546),
            (FinAbGroup((13, 13)), 0.00042),
            (FinAbGroup((13**3,)), 0.00042),
        ]
        for G, want in targets:
            assert abs(theory.p_sylow_symmetric(G, primes=(13,)) - want) < 1e-5, G

    def test_symmetric_klein_four(self):
        want = theory.p_sylow_symmetric(FinAbGroup(), primes=(2,)) / 6
        assert abs(theory.p_sylow_symmetric(FinAbGroup((2, 2))) - want) < 1e-12

    def test_group_outside_prime_set_rejected(self):
        with pytest.raises(ValueError):
            theory.p_sylow_iid(FinAbGroup((3,)), primes=(2,))

    def test_normalization_over_2_groups(self):
        # Sums to 1 over all 2-groups; truncated at order 2^10 the
        # deficit must be under 1e-3.
        total = 0.0
        for size in range(0, 11):
            for lam in partitions(size):
                G = FinAbGroup(tuple(sorted(2**e for e in lam)))
                total += theory.p_sylow_iid(G, primes=(2,))
        assert total <= 1.0
        assert total >= 1.0 - 1e-3

    def test_iid_cyclicity_equals_sylow_sum(self):
        # Summing the Z/p^N masses reproduces the per-prime cyclicity.
        for p in (2, 3, 5):
            s = sum(
                theory.p_sylow_iid(FinAbGroup((p**n,)) if n else FinAbGroup(), primes=(p,))
                for n in range(0, 40)
            )
            assert abs(s - theory.p_cyclic_iid(p)) < 1e-9


class TestConsistencyAndTails:
    def test_primewise_route_agrees(self):
        assert abs(theory.p_cuntz_iid() - theory.p_cuntz_iid_primewise()) < 1e-9

    def test_euler_product_identity(self):
        # prod_{p<=1e4} (1 - p^-2) is within 1e-4 of 6/pi^2.
        acc = 1.0
        for p in theory.primes_upto(10_000):
            acc *= 1.0 - p**-2
        assert abs(acc - 6 / math.pi**2) < 1e-4

    def test_tail_bound_enforced(self):
        tiny = TruncationPolicy(abs_tol=1e-300, prime_bound=100, factor_bound=10)
        with pytest.raises(TailBoundError):
            theory.p_cyclic_iid(2, policy=tiny)
        with pytest.raises(TailBoundError):
            theory.p_cuntz_iid_primewise(policy=tiny)

    def test_default_policy_tails_pass(self):
        # Every public constant evaluates under the default tolerance.
        theory.p_cuntz_iid()
        theory.p_cuntz_iid_primewise()
        theory.p_cyclic_symmetric_all()
        theory.conjecture_constants()
        for p in (2, 3, 5, 7, 13):
            theory.p_cyclic_iid(p)
            theory.p_cyclic_symmetric(p)

    def test_halved_constant(self):
        assert abs(theory.p_cuntz_iid() / 2 - 0.42347) < 1e-4


class TestRegistry:
    def test_constant_lookup(self):
        assert abs(theory.constant("p_cuntz_iid").value - 0.84694) < 1e-4
        assert abs(theory.constant("eexact").value - 0.60793) < 1e-4
        assert abs(theory.constant("gamma_r", r=3).value - 0.39676) < 1e-4
        assert theory.constant("pi_pr", p=3, r=7).status == "conjecture"
        assert theory.constant("pi_pr", p=3, r=6).status == "theorem"
        assert theory.constant("p_cyclic_iid", p=2).status == "theorem"

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            theory.constant("nope")

    def test_underspecified(self):
        with pytest.raises(ValueError):
            theory.constant("gamma_r")

    def test_list_constants(self):
        names = theory.list_constants()
        for required in ("p_cuntz_iid", "dcuntz", "ecuntz", "dexact", "eexact",
                         "p_cyclic_symmetric_all", "pi2", "gamma_r"):
            assert required in names

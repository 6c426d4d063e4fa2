"""Closed-form asymptotic probabilities, evaluated in double precision
with log-space accumulation and rigorous tail bounds.

Every truncated product computes an explicit upper bound on the log of
the dropped tail (via log(1-x) >= -2x for x <= 1/2 and geometric or
integral sums) and refuses to return a value whose bound exceeds the
policy tolerance.  Products over all primes are rewritten through zeta
values first, because a bare prime truncation at any feasible bound
could not reach the default tolerance:

    prod_p (1 + 1/(p^2-p))          = zeta(2) zeta(3) / zeta(6)
    prod_p (1 - p^-k)               = 1 / zeta(k)
    prod_p prod_{k>=2} (1-p^-(2k-1)) = prod_{k>=2} 1/zeta(2k-1)

The slow prime-by-prime route for the iid cyclicity constant is kept
as an independent cross-check; its per-prime factors are 1 + O(p^-4),
which is what makes a certified truncation possible there.

Values are tagged with their standing: "theorem" for limits proved for
the matching model, "conjecture" for the heuristically derived ones,
"open" where no limit is known.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from . import abelian
from .abelian import FinAbGroup

__all__ = [
    "TruncationPolicy",
    "TailBoundError",
    "TheoryValue",
    "DEFAULT_POLICY",
    "primes_upto",
    "p_sylow_iid",
    "p_sylow_symmetric",
    "p_cyclic_iid",
    "p_cyclic_symmetric",
    "p_cyclic_symmetric_all",
    "p_cuntz_iid",
    "p_cuntz_iid_primewise",
    "exact_cuntz_iid",
    "exact_polygon_iid",
    "exact_cuntz_symmetric",
    "exact_polygon_symmetric",
    "pi_pr",
    "gamma_r",
    "conjecture_constants",
    "constant",
    "list_constants",
]


@dataclass(frozen=True)
class TruncationPolicy:
    abs_tol: float = 1e-12
    prime_bound: int = 10_000
    factor_bound: int = 200

    def __post_init__(self):
        if self.abs_tol <= 0 or self.prime_bound < 2 or self.factor_bound < 2:
            raise ValueError("policy bounds must be positive")


DEFAULT_POLICY = TruncationPolicy()


class TailBoundError(ArithmeticError):
    """A certified tail bound exceeded the requested tolerance."""


def _check_tail(bound: float, policy: TruncationPolicy, what: str) -> None:
    if not bound < policy.abs_tol:
        raise TailBoundError(f"{what}: tail bound {bound:.3e} >= tol {policy.abs_tol:.3e}")


@lru_cache(maxsize=64)
def primes_upto(limit: int) -> tuple[int, ...]:
    """Primes <= limit by a plain sieve."""
    if limit < 2:
        return ()
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return tuple(i for i in range(limit + 1) if sieve[i])


@lru_cache(maxsize=1024)
def _zeta(s: int) -> float:
    return float(mpmath.zeta(s))


# ---------------------------------------------------------------------------
# Certified building blocks (all return log of the product)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def _log_prod_one_minus_powers(p: int, k_start: int, policy: TruncationPolicy) -> float:
    """log prod_{k >= k_start} (1 - p^-k)."""
    kmax = policy.factor_bound
    acc = 0.0
    for k in range(k_start, kmax + 1):
        acc += math.log1p(-(p ** -k))
    # -log(1-x) <= 2x for x <= 1/2, summed geometrically past kmax
    tail = 2.0 * p ** -(kmax) / (p - 1)
    _check_tail(tail, policy, f"prod(1-{p}^-k), k>={k_start}")
    return acc


@lru_cache(maxsize=4096)
def _log_prod_one_minus_odd_powers(p: int, k_start: int, policy: TruncationPolicy) -> float:
    """log prod_{k >= k_start} (1 - p^-(2k-1))."""
    kmax = policy.factor_bound
    acc = 0.0
    for k in range(k_start, kmax + 1):
        acc += math.log1p(-(p ** -(2 * k - 1)))
    tail = 2.0 * p ** -(2 * kmax + 1) / (1.0 - p**-2)
    _check_tail(tail, policy, f"prod(1-{p}^-(2k-1)), k>={k_start}")
    return acc


@lru_cache(maxsize=64)
def _log_zeta_inv_product(k_start: int, policy: TruncationPolicy) -> float:
    """log prod_{k >= k_start} zeta(k)^-1."""
    kmax = max(policy.factor_bound, 60)
    acc = 0.0
    for k in range(k_start, kmax + 1):
        acc -= math.log(_zeta(k))
    # log zeta(k) <= zeta(k)-1 <= 3*2^-k for k >= 2
    tail = 3.0 * 2.0 ** -(kmax)
    _check_tail(tail, policy, "prod zeta(k)^-1")
    return acc


@lru_cache(maxsize=64)
def _log_zeta_odd_inv_product(k_start: int, policy: TruncationPolicy) -> float:
    """log prod_{k >= k_start} zeta(2k-1)^-1."""
    kmax = max(policy.factor_bound, 40)
    acc = 0.0
    for k in range(k_start, kmax + 1):
        acc -= math.log(_zeta(2 * k - 1))
    tail = 2.0 ** (1 - 2 * kmax)
    _check_tail(tail, policy, "prod zeta(2k-1)^-1")
    return acc


# ---------------------------------------------------------------------------
# Sylow subgroup distributions
# ---------------------------------------------------------------------------


def _support(G: FinAbGroup) -> tuple[int, ...]:
    return abelian.primary_decomposition(G).primes


def p_sylow_iid(G: FinAbGroup, primes=None, *, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Limit probability that the Sylow part (over the given primes) of
    the iid-entry model's K0 is isomorphic to G:
    (1/|Aut G|) prod_{p} prod_{k>=1} (1 - p^-k)."""
    if G.free_rank:
        raise ValueError("distribution defined for finite groups only")
    ps = tuple(sorted(primes)) if primes is not None else _support(G)
    for p in _support(G):
        if p not in ps:
            raise ValueError(f"group has {p}-torsion outside the prime set")
    log_acc = -math.log(abelian.aut_order(G)) if G.order > 1 else 0.0
    for p in ps:
        if not abelian.is_prime(p):
            raise ValueError(f"{p} is not prime")
        log_acc += _log_prod_one_minus_powers(p, 1, policy)
    return math.exp(log_acc)


def p_sylow_symmetric(G: FinAbGroup, primes=None, *, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Symmetric-model analogue, weighted by the pairing count:
    prod_p N(G_p) prod_{k>=1} (1 - p^-(2k-1))."""
    if G.free_rank:
        raise ValueError("distribution defined for finite groups only")
    ps = tuple(sorted(primes)) if primes is not None else _support(G)
    for p in _support(G):
        if p not in ps:
            raise ValueError(f"group has {p}-torsion outside the prime set")
    dec = abelian.primary_decomposition(G)
    log_acc = 0.0
    for p in ps:
        if not abelian.is_prime(p):
            raise ValueError(f"{p} is not prime")
        lam = dec.partition(p)
        log_acc += math.log(float(abelian._pairing_count_primary(p, lam))) if lam else 0.0
        log_acc += _log_prod_one_minus_odd_powers(p, 1, policy)
    return math.exp(log_acc)


def p_cyclic_iid(p: int, *, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Limit probability that the iid model's Sylow p-part is cyclic:
    (1 + 1/(p^2-p)) prod_{k>=2} (1 - p^-k)."""
    if not abelian.is_prime(p):
        raise ValueError(f"{p} is not prime")
    return math.exp(math.log1p(1.0 / (p * p - p)) + _log_prod_one_minus_powers(p, 2, policy))


def p_cyclic_symmetric(p: int, *, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Symmetric-model Sylow-p cyclicity limit: prod_{k>=2}(1-p^-(2k-1))."""
    if not abelian.is_prime(p):
        raise ValueError(f"{p} is not prime")
    return math.exp(_log_prod_one_minus_odd_powers(p, 2, policy))


def p_cyclic_symmetric_all(*, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Product of p_cyclic_symmetric over all primes, as
    prod_{k>=2} zeta(2k-1)^-1 (about 0.79352)."""
    return math.exp(_log_zeta_odd_inv_product(2, policy))


# ---------------------------------------------------------------------------
# Cyclicity and exactness constants
# ---------------------------------------------------------------------------


def p_cuntz_iid(*, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Limit probability of cyclic K0 in the iid model (about 0.84694):
    prod_p (1 + 1/(p^2-p)) * prod_{k>=2} zeta(k)^-1, with the prime
    product rewritten as zeta(2) zeta(3) / zeta(6)."""
    lead = math.log(_zeta(2)) + math.log(_zeta(3)) - math.log(_zeta(6))
    return math.exp(lead + _log_zeta_inv_product(2, policy))


def p_cuntz_iid_primewise(*, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Same constant, accumulated prime by prime (cross-check route).

    The per-prime cyclicity factor is 1 + O(p^-4): writing
    a = 1/(p^2-p) = sum_{k>=2} p^-k, the log of the factor lies in
    [-(a^2/2 + sum_k p^-2k), 0], so the dropped tail over primes > B
    is at most 2.25 * sum_{n>B} n^-4 <= 0.75 / B^3.
    """
    acc = 0.0
    for p in primes_upto(policy.prime_bound):
        acc += math.log1p(1.0 / (p * p - p)) + _log_prod_one_minus_powers(p, 2, policy)
    b = float(policy.prime_bound)
    _check_tail(0.75 / b**3, policy, "prime-by-prime cyclicity product")
    return math.exp(acc)


def exact_cuntz_iid(*, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """prod_{k>=2} zeta(k)^-1, about 0.43576."""
    return math.exp(_log_zeta_inv_product(2, policy))


def exact_polygon_iid(*, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """prod_p (1 + 1/(p^2-p))^-1 = zeta(6)/(zeta(2) zeta(3)), about 0.51451."""
    return math.exp(math.log(_zeta(6)) - math.log(_zeta(2)) - math.log(_zeta(3)))


def exact_cuntz_symmetric(*, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """prod_p (1-p^-2) prod_{k>=2} (1-p^-(2k-1))
    = (6/pi^2) prod_{k>=2} zeta(2k-1)^-1, about 0.48240."""
    return 6.0 / math.pi**2 * p_cyclic_symmetric_all(policy=policy)


def exact_polygon_symmetric(*, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """prod_p (1 - p^-2) = 6/pi^2, about 0.60793."""
    return 6.0 / math.pi**2


def pi_pr(p: int, r: int, *, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Sylow-p cyclicity limit for the r-regular matchings model:
    the k>=1 product when p = 2 or p | r-1 (conjectural case), the
    k>=2 product otherwise (proved case)."""
    if r < 3:
        raise ValueError("regular model needs r >= 3")
    if not abelian.is_prime(p):
        raise ValueError(f"{p} is not prime")
    k_start = 1 if (p == 2 or (r - 1) % p == 0) else 2
    return math.exp(_log_prod_one_minus_odd_powers(p, k_start, policy))


def gamma_r(r: int, *, policy: TruncationPolicy = DEFAULT_POLICY) -> float:
    """Conjectured K0-cyclicity limit for the r-regular model:
    prod_{p | 2(r-1)} (1 - 1/p) * prod_p prod_{k>=2} (1-p^-(2k-1))."""
    if r < 3:
        raise ValueError("regular model needs r >= 3")
    lead = 0.0
    for p in abelian.factorize(2 * (r - 1)):
        lead += math.log1p(-1.0 / p)
    return math.exp(lead + _log_zeta_odd_inv_product(2, policy))


# ---------------------------------------------------------------------------
# Named constants for the CLI, the comparison report and the tests
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TheoryValue:
    value: float
    status: str  # "theorem" | "conjecture" | "open"
    description: str


def conjecture_constants(*, policy: TruncationPolicy = DEFAULT_POLICY) -> dict[str, TheoryValue]:
    """The conjectured constants under their compact names (as used by
    the CLI and the acceptance tests).

    The descriptions state the formula and the model event each number
    measures: the iid model's exact-polygon rate is 0.51451 and the
    symmetric model's exact-Cuntz rate is 0.48240.
    """
    return {
        "dcuntz": TheoryValue(
            exact_cuntz_iid(policy=policy),
            "conjecture",
            "iid model exactly a Cuntz algebra: prod_{k>=2} zeta(k)^-1",
        ),
        "ecuntz": TheoryValue(
            exact_polygon_iid(policy=policy),
            "conjecture",
            "iid model exactly a Cuntz polygon: prod_p (1+1/(p^2-p))^-1",
        ),
        "dexact": TheoryValue(
            exact_cuntz_symmetric(policy=policy),
            "conjecture",
            "symmetric model exactly a Cuntz algebra: prod_p (1-p^-2) prod_{k>=2}(1-p^-(2k-1))",
        ),
        "eexact": TheoryValue(
            exact_polygon_symmetric(policy=policy),
            "conjecture",
            "symmetric model exactly a Cuntz polygon: prod_p (1-p^-2) = 6/pi^2",
        ),
        "fullshift_iid": TheoryValue(
            p_cuntz_iid(policy=policy) / 2.0,
            "conjecture",
            "iid edge shift flow equivalent to a full shift (theorem for the shifted variant)",
        ),
        "pi2": TheoryValue(
            math.exp(_log_prod_one_minus_odd_powers(2, 1, policy)),
            "conjecture",
            "regular model Sylow-2 cyclicity: prod_{k>=1}(1-2^-(2k-1))",
        ),
    }


_SCALAR_CONSTANTS: dict[str, tuple] = {
    "p_cuntz_iid": (p_cuntz_iid, "theorem", "iid model K0 cyclic (stably a Cuntz algebra)"),
    "p_cyclic_symmetric_all": (
        p_cyclic_symmetric_all,
        "conjecture",
        "symmetric model K0 cyclic over all primes (proved per finite prime set)",
    ),
    "exact_cuntz_iid": (exact_cuntz_iid, "conjecture", "iid model exactly a Cuntz algebra"),
    "exact_polygon_iid": (exact_polygon_iid, "conjecture", "iid model exactly a Cuntz polygon"),
    "exact_cuntz_symmetric": (
        exact_cuntz_symmetric,
        "conjecture",
        "symmetric model exactly a Cuntz algebra",
    ),
    "exact_polygon_symmetric": (
        exact_polygon_symmetric,
        "conjecture",
        "symmetric model exactly a Cuntz polygon (6/pi^2)",
    ),
}

_ALIASES = {
    "dcuntz": "exact_cuntz_iid",
    "ecuntz": "exact_polygon_iid",
    "dexact": "exact_cuntz_symmetric",
    "eexact": "exact_polygon_symmetric",
    "fullshift_iid": None,  # handled below
    "pi2": None,
}

_PARAMETRIC_CONSTANTS = ("p_cyclic_iid", "p_cyclic_symmetric", "pi_pr", "gamma_r")


def constant(name: str, *, p: int | None = None, r: int | None = None,
             policy: TruncationPolicy = DEFAULT_POLICY) -> TheoryValue:
    """Look up a named constant, resolving the short aliases."""
    if name in ("fullshift_iid", "pi2"):
        return conjecture_constants(policy=policy)[name]
    if name in _ALIASES and _ALIASES[name]:
        cc = conjecture_constants(policy=policy)
        return cc[name]
    if name in _SCALAR_CONSTANTS:
        fn, status, desc = _SCALAR_CONSTANTS[name]
        return TheoryValue(fn(policy=policy), status, desc)
    if name == "p_cyclic_iid":
        if p is None:
            raise ValueError("p_cyclic_iid needs --p")
        return TheoryValue(p_cyclic_iid(p, policy=policy), "theorem",
                           f"iid model Sylow-{p} cyclic")
    if name == "p_cyclic_symmetric":
        if p is None:
            raise ValueError("p_cyclic_symmetric needs --p")
        return TheoryValue(p_cyclic_symmetric(p, policy=policy), "theorem",
                           f"symmetric model Sylow-{p} cyclic")
    if name == "pi_pr":
        if p is None or r is None:
            raise ValueError("pi_pr needs --p and --r")
        status = "conjecture" if (p == 2 or (r - 1) % p == 0) else "theorem"
        return TheoryValue(pi_pr(p, r, policy=policy), status,
                           f"{r}-regular model Sylow-{p} cyclic")
    if name == "gamma_r":
        if r is None:
            raise ValueError("gamma_r needs --r")
        return TheoryValue(gamma_r(r, policy=policy), "conjecture",
                           f"{r}-regular model K0 cyclic")
    raise KeyError(name)


def list_constants() -> dict[str, str]:
    """Names the CLI accepts, with one-line descriptions."""
    out = {}
    for name, (_, status, desc) in _SCALAR_CONSTANTS.items():
        out[name] = f"[{status}] {desc}"
    for alias, target in _ALIASES.items():
        if target:
            out[alias] = f"alias of {target}"
    out["fullshift_iid"] = "[conjecture] iid full-shift probability"
    out["pi2"] = "[conjecture] regular model Sylow-2 cyclicity"
    out["p_cyclic_iid"] = "[theorem] per-prime, needs --p"
    out["p_cyclic_symmetric"] = "[theorem] per-prime, needs --p"
    out["pi_pr"] = "[theorem/conjecture] per-prime regular, needs --p --r"
    out["gamma_r"] = "[conjecture] regular model, needs --r"
    return out

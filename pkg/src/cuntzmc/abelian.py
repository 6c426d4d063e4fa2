"""Finite abelian groups in invariant-factor form.

Provides the classification data needed downstream: primary (Sylow)
decompositions, automorphism group orders, the normalized count N(G)
of symmetric bilinear perfect pairings, and automorphism-orbit
equivalence of elements.

Elements of a group are coordinate tuples relative to the invariant
factors: x[i] is a residue in [0, d_i).

Everything here is a pure function of immutable values and safe to
call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "FinAbGroup",
    "PrimaryDecomposition",
    "from_diagonal",
    "primary_decomposition",
    "sylow",
    "is_cyclic",
    "is_p_cyclic",
    "aut_order",
    "pairing_count_normalized",
    "orbit_invariant",
    "same_orbit",
    "ones_element",
    "unit_in_canonical_orbit",
    "is_full_order_generator",
    "is_prime",
    "factorize",
]

INF = math.inf  # sentinel for the height of the zero element


# ---------------------------------------------------------------------------
# Elementary number theory (exact, deterministic)
# ---------------------------------------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        seed += 1
        y, c, m = seed, seed, 128
        g, r, q = 1, 1, 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Prime factorization {p: exponent} of n >= 1."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = m
        # Trial division is cheap insurance before rho on small leftovers.
        for p in range(49, 1000, 2):
            if p * p > m:
                break
            if m % p == 0:
                d = p
                break
        if d == m:
            d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return dict(sorted(out.items()))


def _vp(n: int, p: int) -> int:
    """p-adic valuation of n > 0."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FinAbGroup:
    """Z/d_1 + ... + Z/d_k + Z^free_rank with d_i | d_{i+1}, d_i >= 2."""

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        f = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        if self.free_rank < 0:
            raise ValueError("free_rank must be nonnegative")
        for d in f:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(f, f[1:]):
            if b % a:
                raise ValueError(f"broken divisibility chain: {a} does not divide {b}")

    @property
    def order(self) -> int:
        """Order of the torsion part."""
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return "+".join(parts) if parts else "0"


@dataclass(frozen=True)
class PrimaryDecomposition:
    """Per-prime exponent partitions: parts[p] = (l1 >= l2 >= ...) means
    the Sylow p-subgroup is Z/p^l1 + Z/p^l2 + ..."""

    parts: tuple[tuple[int, tuple[int, ...]], ...]

    def partition(self, p: int) -> tuple[int, ...]:
        for q, lam in self.parts:
            if q == p:
                return lam
        return ()

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.parts)


def from_diagonal(diag) -> FinAbGroup:
    """Group presented by a diagonal relation matrix.

    Zeros count into free_rank, ones are dropped, and the remaining
    entries are normalized into a divisibility chain (entries coming
    from a Smith reduction already form one).
    """
    factors = []
    free = 0
    for d in diag:
        d = int(d)
        if d < 0:
            raise ValueError(f"negative diagonal entry {d}")
        if d == 0:
            free += 1
        elif d > 1:
            factors.append(d)
    # gcd/lcm exchange until every pair divides; preserves the product.
    # A gcd of coprime entries is 1 and drops out of the chain.
    changed = True
    while changed:
        changed = False
        for i in range(len(factors)):
            for j in range(i + 1, len(factors)):
                if factors[j] % factors[i]:
                    g = math.gcd(factors[i], factors[j])
                    factors[i], factors[j] = g, factors[i] // g * factors[j]
                    changed = True
    return FinAbGroup(tuple(sorted(x for x in factors if x > 1)), free)


@lru_cache(maxsize=4096)
def primary_decomposition(G: FinAbGroup) -> PrimaryDecomposition:
    """Sylow decomposition of the torsion part (cached)."""
    per_prime: dict[int, list[int]] = {}
    for d in G.invariant_factors:
        for p, e in factorize(d).items():
            per_prime.setdefault(p, []).append(e)
    parts = tuple(
        (p, tuple(sorted(exps, reverse=True))) for p, exps in sorted(per_prime.items())
    )
    return PrimaryDecomposition(parts)


def sylow(G: FinAbGroup, p: int) -> tuple[int, ...]:
    """Exponent partition of the Sylow p-subgroup, nonincreasing.

    Unlike primary_decomposition this never factorizes the invariant
    factors, so it is safe on groups of astronomically large order.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    lam = [_vp(d, p) for d in G.invariant_factors]
    return tuple(sorted((e for e in lam if e), reverse=True))


def is_cyclic(G: FinAbGroup) -> bool:
    """True iff the torsion part is cyclic (free part reported separately)."""
    return len(G.invariant_factors) <= 1


def is_p_cyclic(G: FinAbGroup, p: int) -> bool:
    return len(sylow(G, p)) <= 1


def _aut_order_primary(p: int, exps_desc: tuple[int, ...]) -> int:
    """|Aut| of the p-group with exponent partition exps_desc.

    Closed form of Hillar and Rhea: with e_1 <= ... <= e_n,
    d_k = max{l : e_l = e_k} and c_k = min{l : e_l = e_k},
    |Aut| = prod(p^d_k - p^(k-1)) * prod p^(e_j (n-d_j))
          * prod p^((e_i - 1)(n - c_i + 1)).
    """
    e = sorted(exps_desc)
    n = len(e)
    out = 1
    for k in range(1, n + 1):
        dk = max(l + 1 for l in range(n) if e[l] == e[k - 1])
        out *= p**dk - p ** (k - 1)
    for j in range(1, n + 1):
        dj = max(l + 1 for l in range(n) if e[l] == e[j - 1])
        out *= p ** (e[j - 1] * (n - dj))
    for i in range(1, n + 1):
        ci = min(l + 1 for l in range(n) if e[l] == e[i - 1])
        out *= p ** ((e[i - 1] - 1) * (n - ci + 1))
    return out


def aut_order(G: FinAbGroup) -> int:
    """Order of Aut(G) for finite G; multiplicative over Sylow parts."""
    if G.free_rank:
        raise ValueError("aut_order requires a finite group")
    out = 1
    for p, lam in primary_decomposition(G).parts:
        out *= _aut_order_primary(p, lam)
    return out


def _pairing_count_primary(p: int, lam: tuple[int, ...]) -> Fraction:
    """N of a p-group: p^(-sum mu_i(mu_i+1)/2) * prod (1-p^(-2j))^(-1)
    over 1 <= j <= floor((mu_i - mu_{i+1})/2), with mu the conjugate
    partition of lam."""
    if not lam:
        return Fraction(1)
    l1 = lam[0]
    mu = [sum(1 for l in lam if l >= i) for i in range(1, l1 + 1)]
    mu_next = mu[1:] + [0]
    s = sum(m * (m + 1) // 2 for m in mu)
    out = Fraction(1, p**s)
    for m_i, m_n in zip(mu, mu_next):
        for j in range(1, (m_i - m_n) // 2 + 1):
            q = p ** (2 * j)
            out *= Fraction(q, q - 1)
    return out


def pairing_count_normalized(G: FinAbGroup) -> Fraction:
    """Count of symmetric bilinear perfect pairings G x G -> C*,
    normalized by |G|*|Aut(G)|; multiplicative over Sylow parts."""
    if G.free_rank:
        raise ValueError("pairing count requires a finite group")
    out = Fraction(1)
    for p, lam in primary_decomposition(G).parts:
        out *= _pairing_count_primary(p, lam)
    return out


# ---------------------------------------------------------------------------
# Elements and automorphism orbits
# ---------------------------------------------------------------------------


def _check_element(G: FinAbGroup, x) -> tuple[int, ...]:
    k = len(G.invariant_factors)
    xs = tuple(int(c) for c in x)
    if len(xs) != k:
        raise ValueError(f"element has {len(xs)} coordinates, group has {k}")
    for c, d in zip(xs, G.invariant_factors):
        if not 0 <= c < d:
            raise ValueError(f"coordinate {c} out of range [0, {d})")
    return xs


def ones_element(G: FinAbGroup) -> tuple[int, ...]:
    """The all-ones coordinate vector (reduced mod each factor)."""
    return tuple(1 % d for d in G.invariant_factors)


def _height_sequence(p: int, lam: list[int], y: list[int]) -> tuple:
    """Heights of y, p*y, p^2*y, ... inside the p-group with coordinate
    exponents lam; terminates with the INF sentinel once y hits zero.

    The height of a nonzero vector is min p-valuation over nonzero
    coordinates; this sequence is a complete Aut-orbit invariant for
    finite abelian p-groups (checked against brute force in tests).
    """
    mods = [p**l for l in lam]
    cur = [c % m for c, m in zip(y, mods)]
    seq = []
    while True:
        vals = [_vp(c, p) for c in cur if c]
        if not vals:
            seq.append(INF)
            return tuple(seq)
        seq.append(min(vals))
        cur = [c * p % m for c, m in zip(cur, mods)]


def orbit_invariant(G: FinAbGroup, x) -> tuple:
    """Canonical Aut(G)-orbit label of x: per-prime height sequences.

    Needs the factorization of the invariant factors, so intended for
    groups of modest order; the Monte Carlo path uses the
    factorization-free unit_in_canonical_orbit instead.
    """
    if G.free_rank:
        raise ValueError("orbit invariants require a finite group")
    xs = _check_element(G, x)
    dec = primary_decomposition(G)
    label = []
    for p, _ in dec.parts:
        lam = [_vp(d, p) for d in G.invariant_factors]
        label.append((p, _height_sequence(p, lam, list(xs))))
    return tuple(label)


def same_orbit(G: FinAbGroup, x, y) -> bool:
    """True iff some automorphism of G maps x to y."""
    return orbit_invariant(G, x) == orbit_invariant(G, y)


def unit_in_canonical_orbit(G: FinAbGroup, x) -> bool:
    """True iff x lies in the Aut(G)-orbit of the all-ones vector.

    Equivalent to same_orbit(G, x, ones_element(G)) but needs no
    factorization: with d_k the largest invariant factor, x is in the
    orbit iff no prime dividing d_k divides every (d_k/d_i)*x_i, i.e.

        gcd(d_k, gcd_i((d_k // d_i) * x_i)) == 1.

    The equivalence is exercised exhaustively against brute force in
    the tests.
    """
    if G.free_rank:
        raise ValueError("orbit test requires a finite group")
    xs = _check_element(G, x)
    f = G.invariant_factors
    if not f:
        return True
    dk = f[-1]
    g = 0
    for d, c in zip(f, xs):
        g = math.gcd(g, (dk // d) * c)
        if g == 1:
            return True
    return math.gcd(dk, g) == 1


def is_full_order_generator(G: FinAbGroup, x) -> bool:
    """True iff x generates the (cyclic, finite) group G."""
    if G.free_rank:
        raise ValueError("generator test requires a finite group")
    if not is_cyclic(G):
        raise ValueError("generator test requires a cyclic group")
    xs = _check_element(G, x)
    if not xs:
        return True  # trivial group: 0 generates
    return math.gcd(xs[0], G.invariant_factors[0]) == 1

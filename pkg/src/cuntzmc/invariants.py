"""Per-graph classification records.

compute_invariant assembles, for one directed multigraph with
adjacency matrix A, the data the sampler tallies:

  * K0 = coker(A^t - I) in invariant-factor form (plus free rank),
  * K1 rank = dim ker(A^t - I),
  * the class of the unit, i.e. [U*(1,...,1)] for the left Smith
    transform U, reduced into the retained (d_i >= 2) coordinates,
  * the sign of det(I - A), computed by Bareiss elimination rather
    than from the transform signs, so the two exact paths cross-check
    each other on every sample,
  * structural flags (strong connectivity, sinks, permutation matrix).

Graphs with sinks or with singular A^t - I are never rejected; the
flags record the caveat and the exactness predicates return False.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import abelian
from .abelian import FinAbGroup
from .graphgen import AdjacencyMatrix, has_sink, is_permutation_matrix, is_strongly_connected
from .kernels import det_kernel, snf_kernel

__all__ = [
    "KInvariant",
    "InvariantConsistencyError",
    "compute_invariant",
    "stably_cuntz_polygon",
    "stably_cuntz_algebra",
    "exactly_cuntz_polygon",
    "exactly_cuntz_algebra",
    "flow_equiv_full_shift",
    "sylow_profile",
    "predicate_flags",
]


class InvariantConsistencyError(AssertionError):
    """The two independent exact paths disagreed (kernel bug trap)."""


@dataclass(frozen=True)
class KInvariant:
    """Full classification record of one sampled graph."""

    n: int
    strongly_connected: bool
    has_sink: bool
    is_permutation: bool
    k0: FinAbGroup
    k1_rank: int
    unit_class: tuple[int, ...] | None  # None when K1 is infinite
    det_i_minus_a_sign: int  # sign of det(I - A): -1, 0 or +1


def compute_invariant(adj: AdjacencyMatrix) -> KInvariant:
    n = adj.n
    a = adj.a

    # M = A^t - I drives both K-groups.
    m = [[a[j][i] - (i == j) for j in range(n)] for i in range(n)]
    d, u, _, u_sign, v_sign = snf_kernel(m, n, n, True, False)

    k0 = abelian.from_diagonal(d)
    k1_rank = sum(1 for x in d if x == 0)

    unit: tuple[int, ...] | None = None
    if k1_rank == 0:
        ones_image = [sum(row) for row in u]  # U * (1,...,1)^t
        unit = tuple(
            w % di for w, di in zip(ones_image, d) if di >= 2
        )

    ia = [[(i == j) - a[i][j] for j in range(n)] for i in range(n)]
    det_ia = det_kernel(ia, n)
    sign = 0 if det_ia == 0 else (1 if det_ia > 0 else -1)

    # det(I - A) = (-1)^n det(M) = (-1)^n u_sign v_sign prod(d): the
    # Bareiss and Smith paths must agree exactly on every sample.
    prod_d = 1
    for x in d:
        prod_d *= x
    expected = (-(prod_d) if n % 2 else prod_d) * u_sign * v_sign
    if det_ia != expected:
        raise InvariantConsistencyError(
            f"det(I-A) = {det_ia} but Smith data gives {expected}"
        )
    if (sign == 0) != (k1_rank > 0):
        raise InvariantConsistencyError("determinant zero iff kernel nontrivial failed")

    return KInvariant(
        n=n,
        strongly_connected=is_strongly_connected(adj),
        has_sink=has_sink(adj),
        is_permutation=is_permutation_matrix(adj),
        k0=k0,
        k1_rank=k1_rank,
        unit_class=unit,
        det_i_minus_a_sign=sign,
    )


def stably_cuntz_polygon(inv: KInvariant) -> bool:
    """Strongly connected, not a single cycle, finite K0."""
    return inv.strongly_connected and not inv.is_permutation and inv.k1_rank == 0


def stably_cuntz_algebra(inv: KInvariant) -> bool:
    return stably_cuntz_polygon(inv) and abelian.is_cyclic(inv.k0)


def exactly_cuntz_polygon(inv: KInvariant) -> bool:
    """Unit class in the automorphism orbit of the all-ones vector.

    Total: returns False (never raises) when K1 is nontrivial, so the
    sampler can tally it on every sample.
    """
    if not stably_cuntz_polygon(inv) or inv.unit_class is None:
        return False
    return abelian.unit_in_canonical_orbit(inv.k0, inv.unit_class)


def exactly_cuntz_algebra(inv: KInvariant) -> bool:
    if not stably_cuntz_algebra(inv) or inv.unit_class is None:
        return False
    return abelian.is_full_order_generator(inv.k0, inv.unit_class)


def flow_equiv_full_shift(inv: KInvariant) -> bool:
    """Negative determinant with cyclic finite K0: the signed invariant
    of a full shift.  Requires the edge shift to be defined (strongly
    connected, not a permutation); recorded as False otherwise."""
    if not inv.strongly_connected or inv.is_permutation:
        return False
    return inv.det_i_minus_a_sign == -1 and inv.k1_rank == 0 and abelian.is_cyclic(inv.k0)


def sylow_profile(inv: KInvariant, primes, max_exp: int) -> dict[int, dict]:
    """Per-prime classification of the Sylow subgroups of K0.

    For each requested prime: the exponent partition plus flags for
    cyclicity, being Z/p^N or (Z/p)^N for N <= max_exp, and triviality.
    """
    out: dict[int, dict] = {}
    for p in primes:
        lam = abelian.sylow(inv.k0, p)  # raises on non-prime input
        entry = {
            "partition": lam,
            "trivial": not lam,
            "cyclic": len(lam) <= 1,
            "is_pN": {N: lam == (N,) for N in range(1, max_exp + 1)},
            "is_elem_N": {N: lam == (1,) * N for N in range(1, max_exp + 1)},
        }
        out[p] = entry
    return out


def predicate_flags(inv: KInvariant) -> dict[str, bool]:
    """All boolean predicates in one map (raw-output and tally order)."""
    return {
        "connected": inv.strongly_connected,
        "sinks_present": inv.has_sink,
        "is_permutation": inv.is_permutation,
        "k1_nonzero": inv.k1_rank > 0,
        "k0_cyclic": abelian.is_cyclic(inv.k0),
        "det_negative": inv.det_i_minus_a_sign < 0,
        "stably_cuntz": stably_cuntz_polygon(inv),
        "exact_polygon": exactly_cuntz_polygon(inv),
        "exact_cuntz": exactly_cuntz_algebra(inv),
        "full_shift": flow_equiv_full_shift(inv),
    }

"""Random and deterministic directed-multigraph constructions.

Reproducibility contract: one sample is fully determined by the pair
(master_seed, sample_index).  The project-wide generator is
SplitMix64 (Steele-Lea-Flood); the per-sample stream seed is derived
by avalanching master seed and index separately through the SplitMix64
finalizer and xoring the results.  All bounded draws use top-bits
rejection, so probabilities given as exact rationals are hit exactly.

Generators never reject a sample: sinks and disconnected graphs are
legitimate outputs (sparse regimes produce them), and downstream code
flags them instead of failing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "SeedSpec",
    "ModelSpec",
    "SplitMix64",
    "AdjacencyMatrix",
    "generate",
    "gen_bernoulli",
    "gen_erdos_loops",
    "gen_regular_matchings",
    "gen_shifted_bernoulli",
    "gen_uniform_counts",
    "cuntz_polygon_adjacency",
    "is_strongly_connected",
    "is_permutation_matrix",
    "has_sink",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """SplitMix64 finalizer (the fmix64 avalanche)."""
    z &= _MASK64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """The project-wide 64-bit generator."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix64(self._state)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by top-bits rejection (exact)."""
        if n <= 1:
            return 0
        k = (n - 1).bit_length()
        shift = 64 - k
        while True:
            r = self.next64() >> shift
            if r < n:
                return r

    def bernoulli(self, q: Fraction) -> int:
        """1 with probability q (exact for rational q), else 0."""
        return 1 if self.below(q.denominator) < q.numerator else 0

    def shuffle(self, xs: list) -> None:
        """Fisher-Yates, uniform over permutations."""
        for i in range(len(xs) - 1, 0, -1):
            j = self.below(i + 1)
            xs[i], xs[j] = xs[j], xs[i]


@dataclass(frozen=True)
class SeedSpec:
    """(master_seed, sample_index) fully determines one sample."""

    master_seed: int
    sample_index: int = 0

    def stream(self) -> SplitMix64:
        a = _mix64(self.master_seed)
        b = _mix64((self.sample_index + 1) * _GOLDEN)
        return SplitMix64(a ^ b)


MODEL_KINDS = ("bernoulli", "erdos_loops", "regular_matchings", "shifted_bernoulli",
               "uniform_counts", "cuntz_polygon")


@dataclass(frozen=True)
class ModelSpec:
    """Which construction to run and its parameters."""

    kind: str
    n: int = 0
    q: Fraction | None = None
    r: int | None = None
    m1: int | None = None
    m2: int | None = None
    mbar: tuple[int, ...] | None = None

    def __post_init__(self):
        k = self.kind
        if k not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {k!r}")
        if k == "cuntz_polygon":
            if not self.mbar or any(m < 1 for m in self.mbar):
                raise ValueError("cuntz_polygon needs a nonempty list of positive counts")
            object.__setattr__(self, "n", len(self.mbar))
            return
        if self.n < 1:
            raise ValueError("vertex count must be positive")
        if k in ("bernoulli", "erdos_loops", "shifted_bernoulli"):
            if self.q is None or not 0 <= self.q <= 1:
                raise ValueError("edge probability must lie in [0, 1]")
            object.__setattr__(self, "q", Fraction(self.q))
        elif k == "regular_matchings":
            if self.n % 2:
                raise ValueError("perfect matchings need an even vertex count")
            if self.r is None or self.r < 1:
                raise ValueError("regularity degree must be >= 1")
        elif k == "uniform_counts":
            cap = self.n * (self.n - 1) // 2
            if self.m1 is None or self.m2 is None or not (0 <= self.m1 <= cap and 0 <= self.m2 <= cap):
                raise ValueError(f"edge counts must lie in [0, {cap}]")

    def describe(self) -> str:
        k = self.kind
        if k in ("bernoulli", "erdos_loops", "shifted_bernoulli"):
            return f"{k}(n={self.n}, q={self.q})"
        if k == "regular_matchings":
            return f"{k}(n={self.n}, r={self.r})"
        if k == "uniform_counts":
            return f"{k}(n={self.n}, m1={self.m1}, m2={self.m2})"
        return f"{k}(mbar={list(self.mbar)})"


@dataclass(frozen=True)
class AdjacencyMatrix:
    """a[i][j] = number of edges i -> j (machine-size counts)."""

    n: int
    a: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows) -> "AdjacencyMatrix":
        ent = tuple(tuple(int(x) for x in r) for r in rows)
        n = len(ent)
        if any(len(r) != n for r in ent):
            raise ValueError("adjacency matrix must be square")
        if any(x < 0 for r in ent for x in r):
            raise ValueError("edge counts must be nonnegative")
        return cls(n, ent)


def gen_bernoulli(n: int, q: Fraction, seed: SeedSpec) -> AdjacencyMatrix:
    """Each of the n^2 possible edges (loops allowed, no multiplicities)
    present independently with probability q; entries drawn row-major."""
    q = Fraction(q)
    if not 0 <= q <= 1:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = seed.stream()
    return AdjacencyMatrix.from_rows(
        [[rng.bernoulli(q) for _ in range(n)] for _ in range(n)]
    )


def gen_erdos_loops(n: int, q: Fraction, seed: SeedSpec) -> AdjacencyMatrix:
    """Symmetric Bernoulli graph with loops: entries on and above the
    diagonal independent, mirrored below."""
    q = Fraction(q)
    if not 0 <= q <= 1:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = seed.stream()
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            e = rng.bernoulli(q)
            a[i][j] = e
            a[j][i] = e
    return AdjacencyMatrix.from_rows(a)


def gen_regular_matchings(n: int, r: int, seed: SeedSpec) -> AdjacencyMatrix:
    """Union of r independent uniform perfect matchings on n (even)
    vertices, each undirected edge doubled into both directions.
    Output is symmetric with zero diagonal and all row sums r."""
    if n % 2:
        raise ValueError("perfect matchings need an even vertex count")
    if r < 1:
        raise ValueError("regularity degree must be >= 1")
    rng = seed.stream()
    a = [[0] * n for _ in range(n)]
    labels = list(range(n))
    for _ in range(r):
        rng.shuffle(labels)
        for k in range(0, n, 2):
            i, j = labels[k], labels[k + 1]
            a[i][j] += 1
            a[j][i] += 1
    return AdjacencyMatrix.from_rows(a)


def gen_shifted_bernoulli(n: int, q: Fraction, seed: SeedSpec) -> AdjacencyMatrix:
    """Bernoulli digraph plus the identity: one guaranteed loop per
    vertex, a second with probability q."""
    base = gen_bernoulli(n, q, seed)
    a = [list(row) for row in base.a]
    for i in range(n):
        a[i][i] += 1
    return AdjacencyMatrix.from_rows(a)


def gen_uniform_counts(n: int, m1: int, m2: int, seed: SeedSpec) -> AdjacencyMatrix:
    """Uniform digraph with exactly m1 forward edges (above diagonal),
    m2 backward ones (below), and an independent fair-coin loop at each
    vertex.  Draw order: forward subset, backward subset, loops."""
    cap = n * (n - 1) // 2
    if not (0 <= m1 <= cap and 0 <= m2 <= cap):
        raise ValueError(f"edge counts must lie in [0, {cap}]")
    rng = seed.stream()
    a = [[0] * n for _ in range(n)]

    def pick(cells: list[tuple[int, int]], m: int) -> None:
        # Partial Fisher-Yates: the first m entries are a uniform subset.
        for k in range(m):
            j = k + rng.below(len(cells) - k)
            cells[k], cells[j] = cells[j], cells[k]
            i, jj = cells[k]
            a[i][jj] = 1

    pick([(i, j) for i in range(n) for j in range(i + 1, n)], m1)
    pick([(i, j) for i in range(1, n) for j in range(i)], m2)
    for i in range(n):
        a[i][i] = rng.bernoulli(Fraction(1, 2))
    return AdjacencyMatrix.from_rows(a)


def cuntz_polygon_adjacency(mbar) -> AdjacencyMatrix:
    """Cycle of n vertices, one loop each, plus m_i parallel edges from
    vertex i-1 (mod n) into vertex i; equals I + P*diag(mbar) for the
    cyclic shift P."""
    mbar = tuple(int(m) for m in mbar)
    if not mbar or any(m < 1 for m in mbar):
        raise ValueError("need a nonempty list of positive edge counts")
    n = len(mbar)
    a = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n):
        a[(i - 1) % n][i] += mbar[i]
    return AdjacencyMatrix.from_rows(a)


def generate(spec: ModelSpec, seed: SeedSpec) -> AdjacencyMatrix:
    """Dispatch one sample for the given model."""
    k = spec.kind
    if k == "bernoulli":
        return gen_bernoulli(spec.n, spec.q, seed)
    if k == "erdos_loops":
        return gen_erdos_loops(spec.n, spec.q, seed)
    if k == "regular_matchings":
        return gen_regular_matchings(spec.n, spec.r, seed)
    if k == "shifted_bernoulli":
        return gen_shifted_bernoulli(spec.n, spec.q, seed)
    if k == "uniform_counts":
        return gen_uniform_counts(spec.n, spec.m1, spec.m2, seed)
    return cuntz_polygon_adjacency(spec.mbar)


# ---------------------------------------------------------------------------
# Structural predicates
# ---------------------------------------------------------------------------


def _reachable_all(a, n: int, transpose: bool) -> bool:
    seen = [False] * n
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        for w in range(n):
            present = a[w][v] if transpose else a[v][w]
            if present and not seen[w]:
                seen[w] = True
                stack.append(w)
    return all(seen)


def is_strongly_connected(adj: AdjacencyMatrix) -> bool:
    """Single strongly connected component covering every vertex:
    vertex 0 reaches everything along edges and along reversed edges."""
    return _reachable_all(adj.a, adj.n, False) and _reachable_all(adj.a, adj.n, True)


def is_permutation_matrix(adj: AdjacencyMatrix) -> bool:
    n = adj.n
    for row in adj.a:
        if sum(row) != 1 or max(row) != 1:
            return False
    for j in range(n):
        if sum(adj.a[i][j] for i in range(n)) != 1:
            return False
    return True


def has_sink(adj: AdjacencyMatrix) -> bool:
    """A sink is a vertex with no outgoing edges (an all-zero row)."""
    return any(not any(row) for row in adj.a)

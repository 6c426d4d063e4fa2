"""Monte Carlo laboratory for the K-theoretic and dynamical invariants
of random directed multigraphs: exact integer Smith reduction, finite
abelian group classification, random graph models with reproducible
seeding, closed-form asymptotic constants, a sampling harness and CLI.
"""

from .abelian import FinAbGroup, from_diagonal
from .exactla import IntMatrix, SnfResult, cokernel, det_signed, kernel_rank, snf
from .graphgen import AdjacencyMatrix, ModelSpec, SeedSpec, generate
from .invariants import KInvariant, compute_invariant
from .kernels import BACKEND
from .montecarlo import RunConfig, TallySheet, run

__version__ = "0.1.0"

__all__ = [
    "FinAbGroup",
    "from_diagonal",
    "IntMatrix",
    "SnfResult",
    "snf",
    "cokernel",
    "kernel_rank",
    "det_signed",
    "AdjacencyMatrix",
    "ModelSpec",
    "SeedSpec",
    "generate",
    "KInvariant",
    "compute_invariant",
    "RunConfig",
    "TallySheet",
    "run",
    "BACKEND",
    "__version__",
]

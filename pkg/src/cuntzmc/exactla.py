"""Exact integer linear algebra: Smith normal form with unimodular
transforms, signed determinant, kernel rank.

Entries are Python ints throughout, so there is no overflow at any
size.  The inner loops live in cuntzmc.kernels (compiled when the
extension built, pure Python otherwise; identical outputs either way).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import abelian
from .kernels import det_kernel, snf_kernel

__all__ = [
    "IntMatrix",
    "SnfResult",
    "snf",
    "cokernel",
    "kernel_rank",
    "det_signed",
    "parse_matrix_text",
    "format_matrix_text",
    "MatrixFormatError",
]


@dataclass(frozen=True)
class IntMatrix:
    """Dense row-major integer matrix, immutable after construction."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry grid does not match declared dimensions")

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        ent = tuple(tuple(int(x) for x in r) for r in rows)
        return cls(len(ent), len(ent[0]) if ent else 0, ent)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        bt = other.transpose().entries
        return IntMatrix.from_rows(
            [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in self.entries]
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix.from_rows([[-x for x in r] for r in self.entries])


@dataclass(frozen=True)
class SnfResult:
    """Diagonal d (ascending divisibility, zeros trailing) with
    u_det_sign = det(U), v_det_sign = det(V) and the optional
    transforms satisfying U*M*V = diag(d)."""

    d: tuple[int, ...]
    u_det_sign: int
    v_det_sign: int
    u: IntMatrix | None = None
    v: IntMatrix | None = None


def snf(m: IntMatrix, keep_u: bool = False, keep_v: bool = False) -> SnfResult:
    """Smith normal form of m.  Deterministic for fixed input.

    The transforms are optional because the sampling loop needs U (for
    the unit class) but never V.
    """
    work = m.to_lists()
    d, u, v, us, vs = snf_kernel(work, m.rows, m.cols, keep_u, keep_v)
    return SnfResult(
        d=tuple(d),
        u_det_sign=us,
        v_det_sign=vs,
        u=IntMatrix.from_rows(u) if keep_u else None,
        v=IntMatrix.from_rows(v) if keep_v else None,
    )


def cokernel(m: IntMatrix) -> abelian.FinAbGroup:
    """coker(m) = Z^rows / m Z^cols as a finite abelian group plus free rank."""
    if m.rows != m.cols:
        raise ValueError("cokernel expects a square matrix")
    return abelian.from_diagonal(snf(m).d)


def kernel_rank(m: IntMatrix) -> int:
    """dim ker(m) over Q = number of zero diagonal entries in the SNF."""
    if m.rows != m.cols:
        raise ValueError("kernel_rank expects a square matrix")
    return sum(1 for x in snf(m).d if x == 0)


def det_signed(m: IntMatrix) -> int:
    """Exact determinant (with sign) by Bareiss elimination; independent
    of the Smith reduction, which doubles as a cross-check in tests."""
    if m.rows != m.cols:
        raise ValueError("determinant expects a square matrix")
    return det_kernel(m.to_lists(), m.rows)


# ---------------------------------------------------------------------------
# Shared matrix text format: first line "rows cols", then one
# whitespace-separated row of signed decimal integers per line.
# ---------------------------------------------------------------------------


class MatrixFormatError(ValueError):
    """Malformed matrix text; carries the 1-based offending line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_matrix_text(text: str) -> IntMatrix:
    lines = text.splitlines()
    if not lines or not lines[0].split():
        raise MatrixFormatError(1, "expected header 'rows cols'")
    head = lines[0].split()
    if len(head) != 2:
        raise MatrixFormatError(1, "expected header 'rows cols'")
    try:
        rows, cols = int(head[0]), int(head[1])
    except ValueError:
        raise MatrixFormatError(1, "expected two integers in header") from None
    if rows < 1 or cols < 1:
        raise MatrixFormatError(1, "dimensions must be positive")
    ent = []
    lineno = 1
    for _ in range(rows):
        lineno += 1
        if lineno > len(lines):
            raise MatrixFormatError(lineno, "missing row")
        parts = lines[lineno - 1].split()
        if len(parts) != cols:
            raise MatrixFormatError(lineno, f"expected {cols} entries, got {len(parts)}")
        try:
            ent.append([int(x) for x in parts])
        except ValueError:
            raise MatrixFormatError(lineno, "entries must be integers") from None
    for extra in range(lineno, len(lines)):
        if lines[extra].split():
            raise MatrixFormatError(extra + 1, "unexpected trailing content")
    return IntMatrix.from_rows(ent)


def format_matrix_text(m: IntMatrix) -> str:
    lines = [f"{m.rows} {m.cols}"]
    lines.extend(" ".join(str(x) for x in row) for row in m.entries)
    return "\n".join(lines) + "\n"

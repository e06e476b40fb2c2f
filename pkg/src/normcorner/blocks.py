"""2x2 block partition ``N = [[A, B], [C, D]]`` and corner diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    as_matrix,
    frobenius_norm,
    normality_residual,
    random_unitary,
    singular_values,
)

__all__ = [
    "BlockMatrix",
    "CornerReport",
    "CornerVerdict",
    "assemble",
    "partition",
    "corner_report",
    "check_normal_corner_conditions",
    "random_normal",
    "corner_ratio",
]


@dataclass(frozen=True)
class BlockMatrix:
    """A ``2n x 2n`` matrix held as its four ``n x n`` blocks."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.C, self.D]])


@dataclass(frozen=True)
class CornerReport:
    frobenius_gap: float
    ratio: float
    ratio_bound: float
    normality_residual: float
    singular_value_gap: float
    norm_B: float
    norm_C: float
    frobenius_B: float
    frobenius_C: float


@dataclass(frozen=True)
class CornerVerdict:
    """Outcome of :func:`check_normal_corner_conditions`.

    ``is_normal`` says whether the residual was under tolerance at all.  The
    corner conditions are only asserted for normal input, so both of them are
    reported as passing (vacuously) otherwise.
    """

    is_normal: bool
    frobenius_equality: bool
    ratio_bound: bool
    report: CornerReport
    tol: float

    @property
    def passed(self) -> bool:
        return self.frobenius_equality and self.ratio_bound


def assemble(A, B, C, D) -> BlockMatrix:
    blocks = [as_matrix(X, name) for X, name in zip((A, B, C, D), "ABCD")]
    n = blocks[0].shape[0]
    for X, name in zip(blocks, "ABCD"):
        if X.shape != (n, n):
            raise ValueError(f"block {name} has shape {X.shape}, expected {(n, n)}")
    return BlockMatrix(*blocks)


def partition(N) -> BlockMatrix:
    N = as_matrix(N, "N")
    m, k = N.shape
    if m != k:
        raise ValueError(f"N must be square, got shape {N.shape}")
    if m % 2:
        raise ValueError(f"N must have even dimension, got {m}")
    n = m // 2
    return BlockMatrix(N[:n, :n], N[:n, n:], N[n:, :n], N[n:, n:])


def corner_ratio(norm_B: float, norm_C: float) -> float:
    """``norm_B / norm_C`` with the conventions ``x/0 = inf`` and ``0/0 = 1``."""
    if norm_C == 0.0:
        return math.inf if norm_B > 0.0 else 1.0
    return norm_B / norm_C


def corner_report(N) -> CornerReport:
    blocks = N if isinstance(N, BlockMatrix) else partition(N)
    sB = singular_values(blocks.B)
    sC = singular_values(blocks.C)
    fB, fC = frobenius_norm(blocks.B), frobenius_norm(blocks.C)
    return CornerReport(
        frobenius_gap=abs(fB - fC),
        ratio=corner_ratio(float(sB[0]), float(sC[0])),
        ratio_bound=math.sqrt(blocks.n),
        normality_residual=normality_residual(blocks.matrix),
        singular_value_gap=float(np.max(np.abs(sB - sC))),
        norm_B=float(sB[0]),
        norm_C=float(sC[0]),
        frobenius_B=fB,
        frobenius_C=fC,
    )


def check_normal_corner_conditions(N, tol: float = 1e-10) -> CornerVerdict:
    """Screen the necessary conditions that normality puts on the corners.

    For a normal ``N`` the Frobenius norms of B and C agree and
    ``||B|| <= sqrt(n) ||C||``.  Failures are reported, never raised.  Nothing
    is claimed when ``N`` is not normal: the conditions are necessary only.
    """
    rep = corner_report(N)
    blocks = N if isinstance(N, BlockMatrix) else partition(N)
    is_normal = rep.normality_residual <= tol
    if not is_normal:
        return CornerVerdict(False, True, True, rep, tol)
    slack = _frobenius_gap_bound(blocks, tol, rep)
    frob_ok = rep.frobenius_gap <= slack
    ratio_ok = rep.norm_B <= rep.ratio_bound * rep.norm_C + slack
    return CornerVerdict(True, bool(frob_ok), bool(ratio_ok), rep, tol)


def _frobenius_gap_bound(blocks: BlockMatrix, tol: float, rep: CornerReport) -> float:
    # trace of the top-left commutator block is ||C||_2^2 - ||B||_2^2, and its
    # modulus is at most sqrt(n) * ||N^*N - NN^*||_F <= sqrt(n) tol max(1, ||N||_F^2)
    sq = 2.0 * math.sqrt(blocks.n) * tol * max(1.0, frobenius_norm(blocks.matrix) ** 2)
    total = rep.frobenius_B + rep.frobenius_C
    return math.sqrt(sq) if total == 0.0 else min(math.sqrt(sq), sq / total)


def random_normal(size: int, seed) -> np.ndarray:
    """Seeded random normal matrix ``W diag(z) W^*`` with Haar ``W``."""
    if size < 1:
        raise ValueError("size must be >= 1")
    rng = np.random.default_rng(seed)
    W = random_unitary(size, rng)
    z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return (W * z) @ np.conj(W).T

"""Dense complex matrix helpers: norms, decompositions, residuals.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Every function
here treats its inputs as immutable values and returns fresh arrays.

The SVD convention is ``T = U @ diag(s) @ V`` with the right factor *not*
adjointed, which is exactly what :func:`numpy.linalg.svd` returns as ``Vh``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "SvdFactors",
    "PolarFactors",
    "as_matrix",
    "adj",
    "frobenius_norm",
    "operator_norm",
    "singular_values",
    "svd",
    "polar",
    "psd_sqrt",
    "normality_residual",
    "commutation_residual",
    "subspace_intersection_dimension",
    "random_unitary",
]


@dataclass(frozen=True)
class Tolerances:
    """Relative tolerances shared by the decomposition and validation code."""

    decomposition_tol: float = 1e-10
    residual_tol: float = 1e-10
    commutation_tol: float = 1e-10

    def __post_init__(self):
        for name in ("decomposition_tol", "residual_tol", "commutation_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class SvdFactors:
    left: np.ndarray
    singulars: np.ndarray
    right: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.singulars) @ self.right


@dataclass(frozen=True)
class PolarFactors:
    unitary_part: np.ndarray
    psd_part: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.unitary_part @ self.psd_part


def as_matrix(T, name: str = "matrix") -> np.ndarray:
    """Return `T` as a finite 2-D complex128 array (a copy).

    Raises
    ------
    ValueError
        If `T` is not two dimensional or holds NaN/Inf entries.
    """
    arr = np.array(T, dtype=np.complex128, copy=True)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be two dimensional, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    arr.flags.writeable = False
    return arr


def adj(T: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(T).T


def _require_square(T: np.ndarray, name: str = "matrix"):
    if T.shape[0] != T.shape[1]:
        raise ValueError(f"{name} must be square, got shape {T.shape}")


def frobenius_norm(T) -> float:
    T = as_matrix(T)
    return float(np.sqrt(np.sum(T.real**2 + T.imag**2)))


def operator_norm(T) -> float:
    """Largest singular value of `T` (0 for empty input)."""
    s = singular_values(T)
    return float(s[0]) if s.size else 0.0


def singular_values(T) -> np.ndarray:
    """Singular values in non-increasing order, length ``min(rows, cols)``."""
    T = as_matrix(T)
    if T.size == 0:
        return np.zeros(0)
    return np.linalg.svd(T, compute_uv=False)


def svd(T) -> SvdFactors:
    """Full SVD with ``T = left @ diag(singulars) @ right``."""
    T = as_matrix(T)
    W, s, Vh = np.linalg.svd(T)
    return SvdFactors(left=W, singulars=s, right=Vh)


def polar(T) -> PolarFactors:
    """Polar decomposition ``T = unitary_part @ psd_part``.

    The unitary factor is fixed through the SVD, ``unitary_part = left @ right``,
    which makes the result deterministic even when `T` is singular.
    """
    T = as_matrix(T)
    _require_square(T)
    f = svd(T)
    W, s, V = f.left, f.singulars, f.right
    U = W @ V
    P = (adj(V) * s) @ V
    P = 0.5 * (P + adj(P))
    return PolarFactors(unitary_part=U, psd_part=P)


def psd_sqrt(P, tol: float = DEFAULT_TOLERANCES.commutation_tol) -> np.ndarray:
    """Positive square root of a hermitian positive semidefinite matrix.

    Eigenvalues in ``[-tol * scale, 0)`` are clamped to zero, where ``scale``
    is ``max(1, largest |eigenvalue|)``; anything more negative is rejected.
    """
    P = as_matrix(P)
    _require_square(P)
    scale = max(1.0, frobenius_norm(P))
    asym = frobenius_norm(P - adj(P))
    if asym > tol * scale:
        raise ValueError(f"psd_sqrt: input is not hermitian (residual {asym:.3e})")
    H = 0.5 * (P + adj(P))
    w, Q = np.linalg.eigh(H)
    floor = -tol * max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    if w.size and w.min() < floor:
        raise ValueError(
            f"psd_sqrt: input is indefinite (smallest eigenvalue {w.min():.3e})"
        )
    root = (Q * np.sqrt(np.clip(w, 0.0, None))) @ adj(Q)
    return 0.5 * (root + adj(root))


def normality_residual(T) -> float:
    """``||T^* T - T T^*||_F / max(1, ||T||_F^2)``."""
    T = as_matrix(T)
    _require_square(T)
    G = adj(T) @ T - T @ adj(T)
    return frobenius_norm(G) / max(1.0, frobenius_norm(T) ** 2)


def commutation_residual(X, Y) -> float:
    """``||XY - YX||_F / max(1, ||X||_F ||Y||_F)``."""
    X = as_matrix(X, "X")
    Y = as_matrix(Y, "Y")
    _require_square(X, "X")
    if X.shape != Y.shape:
        raise ValueError(f"shape mismatch: {X.shape} vs {Y.shape}")
    R = X @ Y - Y @ X
    return frobenius_norm(R) / max(1.0, frobenius_norm(X) * frobenius_norm(Y))


def _rank(M: np.ndarray) -> int:
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    cutoff = max(M.shape) * np.finfo(float).eps * s[0]
    return int(np.sum(s > cutoff))


def _orthonormal_basis(M: np.ndarray) -> np.ndarray:
    if M.shape[1] == 0:
        return M
    W, s, _ = np.linalg.svd(M, full_matrices=False)
    cutoff = max(M.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    return W[:, s > cutoff]


def subspace_intersection_dimension(bases) -> int:
    """Dimension of the intersection of the column spans in `bases`.

    Each basis is orthonormalised (dependent columns are dropped), then the
    intersection is the solution set of ``Q_1 c_1 = Q_j c_j`` for all j > 1.
    Its dimension is ``sum(r_j) - rank(M)`` for the stacked system ``M``.
    """
    mats = [as_matrix(b, f"bases[{i}]") for i, b in enumerate(bases)]
    if not mats:
        raise ValueError("need at least one subspace")
    n = mats[0].shape[0]
    for i, m in enumerate(mats):
        if m.shape[0] != n:
            raise ValueError(
                f"bases[{i}] has {m.shape[0]} rows, expected {n} (inconsistent ambient dimension)"
            )
    qs = [_orthonormal_basis(m) for m in mats]
    ranks = [q.shape[1] for q in qs]
    if len(qs) == 1:
        return ranks[0]
    total = sum(ranks)
    if total == 0:
        return 0
    k = len(qs)
    M = np.zeros(((k - 1) * n, total), dtype=np.complex128)
    offsets = np.concatenate([[0], np.cumsum(ranks)])
    for j in range(1, k):
        rows = slice((j - 1) * n, j * n)
        M[rows, offsets[0] : offsets[1]] = qs[0]
        M[rows, offsets[j] : offsets[j + 1]] = -qs[j]
    return total - _rank(M)


def random_unitary(size: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR of a complex Gaussian matrix."""
    Z = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    phases = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return Q * phases

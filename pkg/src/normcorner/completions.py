"""Explicit normal and unitary completions of ``[[?, B], [C, ?]]``.

Every constructor returns a :class:`CompletionResult` whose corner blocks are
the prescribed inputs placed verbatim; only the diagonal blocks are computed.
The certificate then measures how normal (or unitary) the assembled matrix is.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .blocks import BlockMatrix, assemble
from .linalg import (
    DEFAULT_TOLERANCES,
    adj,
    as_matrix,
    commutation_residual,
    frobenius_norm,
    normality_residual,
    operator_norm,
    polar,
    svd,
)

__all__ = [
    "ValidationError",
    "HermitianCornerParams",
    "Certificate",
    "CompletionResult",
    "HermitianCornerCheck",
    "symmetric_completion",
    "symmetric_unitary_completion",
    "least_norm_symmetric_completion",
    "equal_singular_value_completion",
    "hermitian_corner_normality_check",
    "hermitian_corner_completion",
    "hermitian_corner_unitary_completion",
]


class ValidationError(ValueError):
    """A constructor precondition failed.

    ``constraint`` names the violated condition and ``residual`` is the
    measured (scaled) value that exceeded ``tol``.
    """

    def __init__(self, constraint: str, residual: float, tol: float):
        self.constraint = constraint
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"constraint '{constraint}' violated: residual {residual:.6g} > tol {tol:.3g}"
        )


@dataclass(frozen=True)
class HermitianCornerParams:
    """Hermitian parameters for the ``C = B^*`` recipes.

    ``Hfirst`` is the hermitian part of the top-left block: it is used as is in
    the normal recipe and conjugated by the polar unitary in the unitary one.
    """

    K0: np.ndarray
    K2: np.ndarray
    Hfirst: np.ndarray
    H2: np.ndarray

    @classmethod
    def zeros(cls, n: int) -> "HermitianCornerParams":
        z = np.zeros((n, n), dtype=np.complex128)
        return cls(z, z, z, z)


@dataclass(frozen=True)
class Certificate:
    normality_residual: float
    corner_residual_B: float
    corner_residual_C: float
    unitarity_residual: Optional[float] = None
    scale: float = 1.0

    def as_dict(self) -> dict:
        out = {
            "normality_residual": self.normality_residual,
            "corner_residual_B": self.corner_residual_B,
            "corner_residual_C": self.corner_residual_C,
            "scale": self.scale,
        }
        if self.unitarity_residual is not None:
            out["unitarity_residual"] = self.unitarity_residual
        return out


@dataclass(frozen=True)
class CompletionResult:
    completion: BlockMatrix
    certificate: Certificate

    @property
    def matrix(self) -> np.ndarray:
        return self.completion.matrix


def _certify(blocks: BlockMatrix, B, C, scale: Optional[float] = None) -> CompletionResult:
    N = blocks.matrix
    unitarity = None
    if scale is not None:
        # ||N^* N - scale^2 I||_F relative to max(1, scale^2)
        gram = adj(N) @ N - scale**2 * np.eye(N.shape[0])
        unitarity = frobenius_norm(gram) / max(1.0, scale**2)
    cert = Certificate(
        normality_residual=normality_residual(N),
        corner_residual_B=frobenius_norm(blocks.B - B),
        corner_residual_C=frobenius_norm(blocks.C - C),
        unitarity_residual=unitarity,
        scale=1.0 if scale is None else scale,
    )
    return CompletionResult(blocks, cert)


def _square(X, name):
    X = as_matrix(X, name)
    if X.shape[0] != X.shape[1]:
        raise ValueError(f"{name} must be square, got shape {X.shape}")
    return X


def symmetric_completion(B) -> CompletionResult:
    """``[[B^*, B], [B, B^*]]``, normal for every square B.

    Conjugating by ``(1/sqrt 2) [[I, I], [-I, I]]`` turns it into
    ``(B^* + B) (+) (B^* - B)``, a sum of a hermitian and a skew-hermitian
    block, so its norm is ``max(||B + B^*||, ||B - B^*||)``.
    """
    B = _square(B, "B")
    Bh = adj(B)
    return _certify(assemble(Bh, B, B, Bh), B, B)


def symmetric_unitary_completion(B, tol: float = DEFAULT_TOLERANCES.decomposition_tol) -> CompletionResult:
    """Unitary ``[[A, B], [B, A]]`` for a contraction B.

    With ``B = U S V``, ``A = U (i sqrt(I - S^2)) V``.
    """
    B = _square(B, "B")
    f = svd(B)
    if f.singulars.size and f.singulars[0] > 1.0 + tol:
        raise ValidationError("operator_norm(B) <= 1", float(f.singulars[0]) - 1.0, tol)
    s = np.clip(f.singulars, 0.0, 1.0)
    A = (f.left * (1j * np.sqrt(1.0 - s**2))) @ f.right
    return _certify(assemble(A, B, B, A), B, B, scale=1.0)


def least_norm_symmetric_completion(B) -> CompletionResult:
    """Normal ``[[A, B], [B, A]]`` whose operator norm equals ``||B||``.

    No completion can do better since B is a submatrix.  The result is
    ``||B||`` times the unitary completion of ``B / ||B||``.
    """
    B = _square(B, "B")
    nb = operator_norm(B)
    if nb == 0.0:
        Z = np.zeros_like(B)
        return _certify(assemble(Z, B, B, Z), B, B, scale=0.0)
    inner = symmetric_unitary_completion(B / nb, tol=np.inf)
    A = nb * inner.completion.A
    return _certify(assemble(A, B, B, A), B, B, scale=nb)


def equal_singular_value_completion(
    B, C, tol: float = DEFAULT_TOLERANCES.decomposition_tol
) -> CompletionResult:
    """Completion that is a scalar multiple of a unitary, for B, C with equal singular values.

    With ``B = U1 S U2`` and ``C = V1 S V2`` (S shared, taken from B) and
    ``s1 = ||S||``, ``Q = sqrt(I - S^2/s1^2)``, the completion is
    ``s1 (U1 (+) V1) [[Q, S/s1], [S/s1, -Q]] (V2 (+) U2)``, i.e.
    ``A = s1 U1 Q V2`` and ``D = -s1 V1 Q U2``.
    """
    B = _square(B, "B")
    C = _square(C, "C")
    if B.shape != C.shape:
        raise ValueError(f"B and C differ in shape: {B.shape} vs {C.shape}")
    fb, fc = svd(B), svd(C)
    s = fb.singulars
    s1 = float(s[0]) if s.size else 0.0
    gap = float(np.max(np.abs(s - fc.singulars))) if s.size else 0.0
    if gap > tol * max(1.0, s1):
        raise ValidationError("singular values of B and C agree", gap / max(1.0, s1), tol)
    if s1 == 0.0:
        Z = np.zeros_like(B)
        return _certify(assemble(Z, B, C, Z), B, C, scale=0.0)
    shat = np.clip(s / s1, 0.0, 1.0)
    q = np.sqrt(1.0 - shat**2)
    A = s1 * (fb.left * q) @ fc.right
    D = -s1 * (fc.left * q) @ fb.right
    return _certify(assemble(A, B, C, D), B, C, scale=s1)


@dataclass(frozen=True)
class HermitianCornerCheck:
    """Residuals of the three conditions that make ``[[A, B], [B^*, D]]`` normal."""

    normality_A: float
    normality_D: float
    intertwining: float
    assembled: float

    def conditions_hold(self, tol: float = 1e-10) -> bool:
        return max(self.normality_A, self.normality_D, self.intertwining) < tol


def hermitian_corner_normality_check(A, B, D) -> HermitianCornerCheck:
    """Test normality of ``[[A, B], [B^*, D]]`` through its three block conditions.

    The matrix is normal exactly when A and D are normal and
    ``(A - A^*) B = B (D - D^*)``.  The last residual is scaled by
    ``max(1, (||A||_F + ||D||_F) ||B||_F)``.
    """
    A = _square(A, "A")
    B = _square(B, "B")
    D = _square(D, "D")
    if not (A.shape == B.shape == D.shape):
        raise ValueError(f"shape mismatch: A{A.shape}, B{B.shape}, D{D.shape}")
    R = (A - adj(A)) @ B - B @ (D - adj(D))
    scale = max(1.0, (frobenius_norm(A) + frobenius_norm(D)) * frobenius_norm(B))
    N = np.block([[A, B], [adj(B), D]])
    return HermitianCornerCheck(
        normality_A=normality_residual(A),
        normality_D=normality_residual(D),
        intertwining=frobenius_norm(R) / scale,
        assembled=normality_residual(N),
    )


def _check(name: str, value: float, tol: float):
    if not value <= tol:
        raise ValidationError(name, value, tol)


def _hermitian_residual(X) -> float:
    return frobenius_norm(X - adj(X)) / max(1.0, frobenius_norm(X))


def _product_residual(X, P) -> float:
    return frobenius_norm(X @ P) / max(1.0, frobenius_norm(X) * frobenius_norm(P))


def _params(B, params: HermitianCornerParams, tol: float):
    mats = {}
    for name in ("K0", "K2", "Hfirst", "H2"):
        X = _square(getattr(params, name), name)
        if X.shape != B.shape:
            raise ValueError(f"{name} has shape {X.shape}, expected {B.shape}")
        _check(f"{name} hermitian", _hermitian_residual(X), tol)
        mats[name] = X
    return mats


def hermitian_corner_completion(
    B, params: HermitianCornerParams, tol: float = DEFAULT_TOLERANCES.commutation_tol
) -> CompletionResult:
    """Normal completion of ``[[?, B], [B^*, ?]]`` from hermitian parameters.

    With the polar form ``B = U P`` the parameters must satisfy
    ``[K0, P] = [K2, P] = 0``, ``(K0 - K2) P = 0``, ``[Hfirst, K1] = 0`` and
    ``[H2, K2] = 0`` where ``K1 = U K0 U^*``.  The completion is
    ``A = Hfirst + i K1``, ``D = H2 + i K2``.
    """
    B = _square(B, "B")
    p = _params(B, params, tol)
    pol = polar(B)
    U, P = pol.unitary_part, pol.psd_part
    K0, K2, H1, H2 = p["K0"], p["K2"], p["Hfirst"], p["H2"]
    _check("[K0, P] = 0", commutation_residual(K0, P), tol)
    _check("[K2, P] = 0", commutation_residual(K2, P), tol)
    _check("(K0 - K2) P = 0", _product_residual(K0 - K2, P), tol)
    K1 = U @ K0 @ adj(U)
    _check("[Hfirst, K1] = 0", commutation_residual(H1, K1), tol)
    _check("[H2, K2] = 0", commutation_residual(H2, K2), tol)
    A = H1 + 1j * K1
    D = H2 + 1j * K2
    return _certify(assemble(A, B, adj(B), D), B, adj(B))


def hermitian_corner_unitary_completion(
    B,
    params: HermitianCornerParams,
    tol: float = DEFAULT_TOLERANCES.commutation_tol,
    unchecked_mode: bool = False,
) -> CompletionResult:
    """Unitary completion of ``[[?, B], [B^*, ?]]`` for a contraction B.

    With ``B = U P``: K0, K2, Hfirst (acting as H0) and H2 commute with P,
    ``[Hfirst, K0] = [H2, K2] = 0``, ``Hfirst^2 + K0^2 = H2^2 + K2^2 = I - P^2``,
    and additionally ``(K0 - K2) P = 0`` and ``(Hfirst + H2) P = 0``.  The
    off-diagonal block of ``N^* N`` equals ``U ((H0 + H2) P + i (K2 - K0) P)``,
    so without the last two conditions N is generally not unitary.
    ``unchecked_mode`` skips exactly those two and returns N as built.
    """
    B = _square(B, "B")
    nb = operator_norm(B)
    _check("operator_norm(B) <= 1", max(0.0, nb - 1.0), tol)
    p = _params(B, params, tol)
    pol = polar(B)
    U, P = pol.unitary_part, pol.psd_part
    K0, K2, H0, H2 = p["K0"], p["K2"], p["Hfirst"], p["H2"]
    for name, X in (("K0", K0), ("K2", K2), ("Hfirst", H0), ("H2", H2)):
        _check(f"[{name}, P] = 0", commutation_residual(X, P), tol)
    _check("[Hfirst, K0] = 0", commutation_residual(H0, K0), tol)
    _check("[H2, K2] = 0", commutation_residual(H2, K2), tol)
    defect = np.eye(B.shape[0]) - P @ P
    scale = max(1.0, frobenius_norm(defect))
    _check("Hfirst^2 + K0^2 = I - P^2", frobenius_norm(H0 @ H0 + K0 @ K0 - defect) / scale, tol)
    _check("H2^2 + K2^2 = I - P^2", frobenius_norm(H2 @ H2 + K2 @ K2 - defect) / scale, tol)
    if not unchecked_mode:
        _check("(K0 - K2) P = 0", _product_residual(K0 - K2, P), tol)
        _check("(Hfirst + H2) P = 0", _product_residual(H0 + H2, P), tol)
    A = U @ (H0 + 1j * K0) @ adj(U)
    D = H2 + 1j * K2
    return _certify(assemble(A, B, adj(B), D), B, adj(B), scale=1.0)

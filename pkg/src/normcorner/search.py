"""Extremal corner examples and seeded multistart searches.

Two searches live here:

* :func:`alpha_lower_bound_search` looks for normal ``N = [[A, B], [C, D]]``
  with a large ratio ``||B|| / ||C||``.  Each restart runs a quadratic penalty
  ascent on ``s1(B) - mu ||N^*N - NN^*||_F^2 - nu sum_j (s_j(C) - 1)_+^2``
  followed by a least-squares polish that restores normality.  The best
  polished ratio is a lower bound for the supremum, nothing more.
* :func:`feasibility_search` minimises ``||N^*N - NN^*||_F^2`` over the
  diagonal blocks with B and C held fixed.

Both are deterministic: restart ``k`` draws its randomness from
``SeedSequence([seed, k])`` so results do not depend on the number of
restarts requested or on how many worker threads run them.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import least_squares, minimize

from .blocks import BlockMatrix, assemble, corner_ratio
from .completions import ValidationError, equal_singular_value_completion
from .kernels import commutator_objective, commutator_value
from .linalg import adj, as_matrix, frobenius_norm, normality_residual

log = logging.getLogger(__name__)

__all__ = [
    "SearchConfig",
    "SearchResult",
    "FeasibilityReport",
    "example_n2",
    "example_n3",
    "alpha_lower_bound_search",
    "feasibility_search",
    "feasibility_objective",
    "gradient_check",
]


def example_n2() -> BlockMatrix:
    """4x4 normal matrix with ``||B|| = sqrt(2) ||C||``."""
    r2 = math.sqrt(2.0)
    A = [[0, 0], [1, 0]]
    B = [[r2, 0], [0, 0]]
    C = [[0, 1], [1, 0]]
    D = [[0, 1], [0, 0]]
    return assemble(A, B, C, D)


def example_n3() -> BlockMatrix:
    """6x6 normal matrix with ``||B|| = sqrt(3)`` and ``||C|| = 1``."""
    a = 2.0 / math.sqrt(3.0)
    lo, mid, hi = math.sqrt(a - 1.0), math.sqrt(a), math.sqrt(a + 1.0)
    A = [[0, lo, 0], [0, 0, mid], [hi, 0, 0]]
    B = [[math.sqrt(3.0), 0, 0], [0, 0, 0], [0, 0, 0]]
    C = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    D = [[0, 0, hi], [lo, 0, 0], [0, mid, 0]]
    return assemble(A, B, C, D)


_PAPER_EXAMPLES = {2: example_n2, 3: example_n3}


@dataclass(frozen=True)
class SearchConfig:
    """Settings shared by both searches.

    ``penalty_weight`` is the initial weight of both penalty terms; it is
    multiplied by ``penalty_growth`` after each of the ``epochs`` ascent
    phases.  The perturbed paper example (``include_paper_seed``) is already
    nearly feasible and starts at ``warm_penalty_weight`` instead, so the
    first loose epochs do not carry it away from its basin.
    """

    restarts: int = 20
    max_iterations: int = 300
    step_size: float = 1.0
    penalty_weight: float = 1.0
    penalty_growth: float = 10.0
    epochs: int = 6
    seed: int = 0
    convergence_tol: float = 1e-10
    include_paper_seed: bool = True
    warm_penalty_weight: float = 1e3
    paper_seed_noise: float = 1e-3
    workers: int = 1

    def __post_init__(self):
        for name in ("restarts", "max_iterations", "epochs", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        for name in ("step_size", "penalty_weight", "convergence_tol", "warm_penalty_weight"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.penalty_growth > 1:
            raise ValueError("penalty_growth must exceed 1")
        if self.paper_seed_noise < 0:
            raise ValueError("paper_seed_noise must be non-negative")


@dataclass(frozen=True)
class SearchResult:
    best_ratio: float
    witness: BlockMatrix
    witness_normality_residual: float
    per_restart_history: List[Tuple[int, float]]
    best_restart: int
    feasible: bool
    restart_ratios: List[float] = field(default_factory=list)


@dataclass(frozen=True)
class FeasibilityReport:
    min_residual: float
    witness_A: np.ndarray
    witness_D: np.ndarray
    restarts_below_tol: int
    gradient_check_error: float
    best_start: str
    start_residuals: List[Tuple[str, float]] = field(default_factory=list)


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def _map(fn, items, workers: int):
    if workers == 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- least-squares normality polish ------------------------------------------


def _direction_basis(m: int, mask: np.ndarray) -> np.ndarray:
    """Unit real and imaginary perturbations of the entries selected by `mask`."""
    idx = np.flatnonzero(mask.ravel())
    E = np.zeros((idx.size, m * m), dtype=np.complex128)
    E[np.arange(idx.size), idx] = 1.0
    E = E.reshape(idx.size, m, m)
    return np.concatenate([E, 1j * E])


def _polish(N: np.ndarray, mask: np.ndarray, max_nfev: int = 200) -> np.ndarray:
    """Trust-region least squares on the entries of ``N^*N - NN^*`` over the free entries."""
    m = N.shape[0]
    E = _direction_basis(m, mask)
    Eh = np.conj(np.swapaxes(E, 1, 2))
    k = E.shape[0] // 2
    flat = np.flatnonzero(mask.ravel())
    base = N.copy()

    def unpack(x):
        M = base.copy().ravel()
        M[flat] = x[:k] + 1j * x[k:]
        return M.reshape(m, m)

    def residual(x):
        M = unpack(x)
        G = adj(M) @ M - M @ adj(M)
        return np.concatenate([G.real.ravel(), G.imag.ravel()])

    def jacobian(x):
        M = unpack(x)
        Mh = adj(M)
        dG = Eh @ M + Mh @ E - E @ Mh - M @ Eh
        dG = dG.reshape(E.shape[0], -1)
        return np.concatenate([dG.real.T, dG.imag.T])

    x0 = np.concatenate([N.ravel()[flat].real, N.ravel()[flat].imag])
    # "trf" rather than MINPACK's "lm": the latter returned different last
    # bits for identical input depending on earlier calls in the process
    sol = least_squares(
        residual, x0, jac=jacobian, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15,
        max_nfev=max_nfev,
    )
    return unpack(sol.x)


# -- Problem 1: ratio maximisation -------------------------------------------


def _alpha_objective(N: np.ndarray, n: int, mu: float, nu: float):
    f, gf = commutator_objective(N)
    B = N[:n, n:]
    C = N[n:, :n]
    Wb, sb, Vb = np.linalg.svd(B)
    Wc, sc, Vc = np.linalg.svd(C)
    excess = np.maximum(sc - 1.0, 0.0)
    value = sb[0] - mu * f - nu * float(np.sum(excess**2))
    grad = -mu * gf
    # subgradient of s1(B): outer product of the top singular pair
    grad[:n, n:] += np.outer(Wb[:, 0], Vb[0, :])
    grad[n:, :n] -= nu * ((Wc * (2.0 * excess)) @ Vc)
    return float(value), grad


def _ascend(N, n, mu, nu, cfg: SearchConfig):
    """Gradient ascent with Armijo backtracking (halving, factor 1e-4).

    Each trial step starts at ``min(step_size, 4 * last accepted step)``.
    """
    value, grad = _alpha_objective(N, n, mu, nu)
    t = cfg.step_size
    for _ in range(cfg.max_iterations):
        gg = float(np.sum(grad.real**2 + grad.imag**2))
        if math.sqrt(gg) <= cfg.convergence_tol * max(1.0, mu):
            break
        t = min(cfg.step_size, 4.0 * t)
        while True:
            trial = N + t * grad
            v_new, g_new = _alpha_objective(trial, n, mu, nu)
            if v_new >= value + 1e-4 * t * gg:
                break
            t *= 0.5
            if t < 1e-16:
                return N, value
        N, value, grad = trial, v_new, g_new
    return N, value


@dataclass(frozen=True)
class _RestartOutcome:
    index: int
    objective: float
    ratio: float
    residual: float
    feasible: bool
    N: np.ndarray


def _alpha_restart(n: int, cfg: SearchConfig, index: int) -> _RestartOutcome:
    m = 2 * n
    rng = _rng(cfg.seed, index)
    paper = cfg.include_paper_seed and index == 0 and n in _PAPER_EXAMPLES
    if paper:
        N = _PAPER_EXAMPLES[n]().matrix.copy()
        N = N + cfg.paper_seed_noise * (
            rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        )
        mu = cfg.warm_penalty_weight
    else:
        N = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(m)
        mu = cfg.penalty_weight
    value = float("nan")
    for _ in range(cfg.epochs):
        N, value = _ascend(N, n, mu, mu, cfg)
        mu *= cfg.penalty_growth
    P = _polish(N, np.ones((m, m), dtype=bool))
    residual = normality_residual(P)
    sb = np.linalg.norm(P[:n, n:], 2)
    sc = np.linalg.norm(P[n:, :n], 2)
    # a vanishing C makes the ratio meaningless even for normal N
    degenerate = sc <= 1e-8 * max(1.0, frobenius_norm(P))
    feasible = residual <= cfg.convergence_tol and not degenerate
    ratio = corner_ratio(float(sb), float(sc))
    log.debug("restart %d: ratio %.8f residual %.2e%s", index, ratio, residual,
              " (paper seed)" if paper else "")
    return _RestartOutcome(index, value, ratio, residual, feasible, P)


def alpha_lower_bound_search(n: int, config: Optional[SearchConfig] = None) -> SearchResult:
    """Multistart search for normal ``2n x 2n`` matrices with large ``||B||/||C||``.

    Returns the best ratio among restarts whose polished witness has normality
    residual at most ``config.convergence_tol``.  Ties go to the lowest
    restart index.  If no restart is feasible the least-residual one is
    returned with ``feasible=False``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    cfg = config or SearchConfig()
    outcomes = _map(lambda k: _alpha_restart(n, cfg, k), range(cfg.restarts), cfg.workers)
    best = None
    for o in outcomes:
        if o.feasible and (best is None or o.ratio > best.ratio):
            best = o
    feasible = best is not None
    if best is None:
        log.warning("no feasible restart for n=%d; returning least-residual witness", n)
        best = min(outcomes, key=lambda o: (o.residual, o.index))
    P = best.N
    witness = assemble(P[:n, :n], P[:n, n:], P[n:, :n], P[n:, n:])
    return SearchResult(
        best_ratio=best.ratio,
        witness=witness,
        witness_normality_residual=best.residual,
        per_restart_history=[(o.index, o.objective) for o in outcomes],
        best_restart=best.index,
        feasible=feasible,
        restart_ratios=[o.ratio if o.feasible else float("nan") for o in outcomes],
    )


# -- Problem 2: completion feasibility ----------------------------------------


def feasibility_objective(B, C, A, D):
    """``f = ||N^*N - NN^*||_F^2`` for ``N = [[A, B], [C, D]]`` and its gradient.

    Returns ``(f, grad_A, grad_D)`` with gradients packed as complex arrays
    (real part: derivative in Re, imaginary part: derivative in Im).
    """
    n = np.shape(A)[0]
    N = np.block([[A, B], [C, D]]).astype(np.complex128)
    f, g = commutator_objective(N)
    return f, g[:n, :n], g[n:, n:]


def _pack(A, D) -> np.ndarray:
    return np.concatenate([A.real.ravel(), A.imag.ravel(), D.real.ravel(), D.imag.ravel()])


def _unpack(x: np.ndarray, n: int):
    k = n * n
    A = (x[:k] + 1j * x[k : 2 * k]).reshape(n, n)
    D = (x[2 * k : 3 * k] + 1j * x[3 * k :]).reshape(n, n)
    return A, D


def gradient_check(B, C, A, D, h: float = 1e-5) -> float:
    """Largest deviation between analytic and central-difference gradients of f.

    Deviations are taken over all ``4 n^2`` real coordinates of (A, D) and
    divided by ``max(1, largest analytic gradient entry)``.
    """
    if not 1e-7 <= h <= 1e-3:
        raise ValueError(f"step h={h} outside [1e-7, 1e-3]")
    B, C, A, D = (as_matrix(X, name) for X, name in zip((B, C, A, D), "BCAD"))
    n = A.shape[0]
    _, gA, gD = feasibility_objective(B, C, A, D)
    analytic = _pack(gA, gD)
    x0 = _pack(A, D)
    numeric = np.empty_like(x0)
    for j in range(x0.size):
        xp = x0.copy()
        xm = x0.copy()
        xp[j] += h
        xm[j] -= h
        fp = commutator_value(np.block([[_unpack(xp, n)[0], B], [C, _unpack(xp, n)[1]]]))
        fm = commutator_value(np.block([[_unpack(xm, n)[0], B], [C, _unpack(xm, n)[1]]]))
        numeric[j] = (fp - fm) / (2.0 * h)
    scale = max(1.0, float(np.max(np.abs(analytic))))
    return float(np.max(np.abs(analytic - numeric)) / scale)


def _structured_starts(B, C, tol: float = 1e-10):
    """Known exact completions usable as starting points."""
    starts = []
    scale = max(1.0, frobenius_norm(B), frobenius_norm(C))
    if frobenius_norm(B - C) <= tol * scale:
        starts.append(("symmetric", adj(B), adj(B)))
    if frobenius_norm(C - adj(B)) <= tol * scale:
        Z = np.zeros_like(B)
        starts.append(("hermitian-corner", Z, Z))
    try:
        res = equal_singular_value_completion(B, C, tol=tol)
    except ValidationError:
        pass
    else:
        starts.append(("equal-singular-values", res.completion.A, res.completion.D))
    return starts


def _descend(B, C, A, D, cfg: SearchConfig):
    n = B.shape[0]

    def fun(x):
        Ai, Di = _unpack(x, n)
        f, gA, gD = feasibility_objective(B, C, Ai, Di)
        return f, _pack(gA, gD)

    sol = minimize(
        fun, _pack(A, D), jac=True, method="L-BFGS-B",
        options={"maxiter": cfg.max_iterations * cfg.epochs, "ftol": 1e-30, "gtol": 1e-16},
    )
    A, D = _unpack(sol.x, n)
    N = np.block([[A, B], [C, D]])
    mask = np.zeros((2 * n, 2 * n), dtype=bool)
    mask[:n, :n] = True
    mask[n:, n:] = True
    P = _polish(N, mask)
    if commutator_value(P) <= commutator_value(N):
        N = P
    return N[:n, :n].copy(), N[n:, n:].copy()


def feasibility_search(B, C, config: Optional[SearchConfig] = None) -> FeasibilityReport:
    """Search for diagonal blocks making ``[[A, B], [C, D]]`` normal.

    Starts are the exact constructions that apply to (B, C) followed by
    ``config.restarts`` seeded random starts.  ``min_residual`` is the
    smallest normality residual reached; it is evidence, not a proof, either
    way.  ``restarts_below_tol`` counts starts ending at or below
    ``config.convergence_tol``.
    """
    cfg = config or SearchConfig()
    B = as_matrix(B, "B")
    C = as_matrix(C, "C")
    if B.shape != C.shape or B.shape[0] != B.shape[1]:
        raise ValueError(f"B and C must be square of equal size, got {B.shape} and {C.shape}")
    n = B.shape[0]
    scale = max(1.0, frobenius_norm(B), frobenius_norm(C)) / math.sqrt(n)

    def random_start(k):
        rng = _rng(cfg.seed, k)
        width = scale * math.exp(rng.uniform(-1.0, 1.0))
        A = width * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
        D = width * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
        return f"random-{k}", A, D

    starts = _structured_starts(B, C) + [random_start(k) for k in range(cfg.restarts)]
    first_random = next(s for s in starts if s[0].startswith("random"))
    grad_err = gradient_check(B, C, first_random[1], first_random[2])

    def run(start):
        label, A0, D0 = start
        A, D = _descend(B, C, A0, D0, cfg)
        res = normality_residual(np.block([[A, B], [C, D]]))
        log.debug("start %s: residual %.3e", label, res)
        return label, res, A, D

    results = _map(run, starts, cfg.workers)
    best = min(range(len(results)), key=lambda i: (results[i][1], i))
    label, res, A, D = results[best]
    return FeasibilityReport(
        min_residual=res,
        witness_A=A,
        witness_D=D,
        restarts_below_tol=sum(r[1] <= cfg.convergence_tol for r in results),
        gradient_check_error=grad_err,
        best_start=label,
        start_residuals=[(r[0], r[1]) for r in results],
    )

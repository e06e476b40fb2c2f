import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from normcorner.linalg import (
    Tolerances,
    adj,
    as_matrix,
    commutation_residual,
    frobenius_norm,
    normality_residual,
    operator_norm,
    polar,
    psd_sqrt,
    random_unitary,
    singular_values,
    subspace_intersection_dimension,
    svd,
)

from conftest import random_complex


def closed_form_singular_values_2x2(M):
    # s^2 = (F^2 +- sqrt(F^4 - 4 |det M|^2)) / 2
    F2 = float(np.sum(np.abs(M) ** 2))
    det = abs(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    disc = math.sqrt(max(F2 * F2 - 4 * det * det, 0.0))
    return math.sqrt((F2 + disc) / 2), math.sqrt(max((F2 - disc) / 2, 0.0))


def test_frobenius_examples():
    assert frobenius_norm(np.zeros((3, 3))) == 0.0
    assert frobenius_norm(np.eye(3)) == pytest.approx(math.sqrt(3), abs=1e-15)
    assert frobenius_norm([[1, 0.5], [0, 0]]) == pytest.approx(math.sqrt(1.25), abs=1e-15)


def test_operator_norm_examples():
    assert operator_norm(np.eye(4)) == pytest.approx(1.0, abs=1e-15)
    assert operator_norm([[math.sqrt(2), 0], [0, 0]]) == pytest.approx(math.sqrt(2), abs=1e-15)
    B7 = np.zeros((3, 3))
    B7[0, 0] = math.sqrt(3)
    assert operator_norm(B7) == pytest.approx(math.sqrt(3), abs=1e-15)


def test_singular_values_examples():
    np.testing.assert_allclose(singular_values(np.diag([3.0, 1.0, 2.0])), [3, 2, 1], atol=1e-15)
    B = np.array([[1, 0.5], [0, 0]])
    np.testing.assert_allclose(singular_values(B), closed_form_singular_values_2x2(B), atol=1e-15)
    np.testing.assert_allclose(singular_values(B), [math.sqrt(1.25), 0.0], atol=1e-15)
    np.testing.assert_allclose(singular_values(np.diag([1, 0.5])), [1, 0.5], atol=1e-15)


def test_singular_values_match_closed_form_on_random_2x2(rng):
    for _ in range(100):
        M = random_complex(rng, 2)
        np.testing.assert_allclose(singular_values(M), closed_form_singular_values_2x2(M), rtol=1e-12, atol=1e-12)


def test_singular_values_consistent_with_norms(rng):
    for m in range(1, 7):
        T = random_complex(rng, m)
        s = singular_values(T)
        assert s[0] == pytest.approx(operator_norm(T))
        assert np.linalg.norm(s) == pytest.approx(frobenius_norm(T), rel=1e-13)
        assert np.all(np.diff(s) <= 0)


def test_non_finite_rejected():
    with pytest.raises(ValueError, match="non-finite"):
        as_matrix([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(ValueError):
        svd([[np.inf]])


def test_tolerances_positive():
    with pytest.raises(ValueError):
        Tolerances(decomposition_tol=0.0)


def _is_unitary(U, tol=1e-12):
    return frobenius_norm(U @ adj(U) - np.eye(U.shape[0])) < tol


def test_svd_identity_and_diag():
    f = svd(np.eye(3))
    np.testing.assert_allclose(f.singulars, np.ones(3))
    np.testing.assert_allclose(f.reconstruct(), np.eye(3), atol=1e-15)
    f = svd(np.diag([2.0, 0.0]))
    np.testing.assert_allclose(f.singulars, [2, 0])
    assert frobenius_norm(f.reconstruct() - np.diag([2.0, 0.0])) < 1e-12


def test_svd_convention_right_factor_not_adjointed(rng):
    T = random_complex(rng, 4)
    f = svd(T)
    assert _is_unitary(f.left) and _is_unitary(f.right)
    # T = U diag(s) V, no adjoint on V
    assert frobenius_norm(f.left @ np.diag(f.singulars) @ f.right - T) < 1e-10 * frobenius_norm(T)


@pytest.mark.parametrize("rank", [0, 1, 2, 4])
def test_svd_and_polar_reconstruct_rank_deficient(rng, rank):
    for m in (4, 5):
        T = random_complex(rng, m, rank) @ random_complex(rng, rank, m) if rank else np.zeros((m, m))
        scale = max(1.0, frobenius_norm(T))
        assert frobenius_norm(svd(T).reconstruct() - T) < 1e-10 * scale
        p = polar(T)
        assert _is_unitary(p.unitary_part, 1e-10)
        assert frobenius_norm(p.psd_part - adj(p.psd_part)) < 1e-12 * scale
        assert np.linalg.eigvalsh(p.psd_part).min() > -1e-10 * scale
        assert frobenius_norm(p.reconstruct() - T) < 1e-10 * scale


def test_polar_examples(rng):
    X = random_complex(rng, 3)
    P0 = X @ adj(X) + np.eye(3)
    p = polar(P0)
    np.testing.assert_allclose(p.unitary_part, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(p.psd_part, P0, atol=1e-12)

    W = random_unitary(3, rng)
    p = polar(W)
    np.testing.assert_allclose(p.unitary_part, W, atol=1e-12)
    np.testing.assert_allclose(p.psd_part, np.eye(3), atol=1e-12)

    B = np.array([[0, 1], [0, 0]], dtype=complex)
    p = polar(B)
    # B^*B = diag(0, 1) is its own square root
    np.testing.assert_allclose(p.psd_part, np.diag([0, 1]), atol=1e-15)
    assert frobenius_norm(p.reconstruct() - B) < 1e-12


def test_polar_gauge_is_svd_induced(rng):
    T = random_complex(rng, 3, 1) @ random_complex(rng, 1, 3)
    f = svd(T)
    p = polar(T)
    np.testing.assert_allclose(p.unitary_part, f.left @ f.right, atol=1e-14)


def test_psd_sqrt_examples():
    np.testing.assert_allclose(psd_sqrt(np.eye(2)), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(psd_sqrt(np.diag([4.0, 0.0])), np.diag([2.0, 0.0]), atol=1e-15)
    S = np.diag([1.0, 0.0])
    np.testing.assert_allclose(psd_sqrt(np.eye(2) - S @ S), np.diag([0.0, 1.0]), atol=1e-15)


def test_psd_sqrt_clamps_and_rejects():
    R = psd_sqrt(np.diag([1.0, -1e-13]))
    np.testing.assert_allclose(R, np.diag([1.0, 0.0]), atol=1e-15)
    with pytest.raises(ValueError, match="indefinite"):
        psd_sqrt(np.diag([1.0, -1e-3]))
    with pytest.raises(ValueError, match="hermitian"):
        psd_sqrt(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_psd_sqrt_squares_back(rng):
    for m in range(1, 7):
        X = random_complex(rng, m)
        P = X @ adj(X)
        R = psd_sqrt(P)
        assert frobenius_norm(R @ R - P) < 1e-10 * max(1.0, frobenius_norm(P))
        assert np.linalg.eigvalsh(R).min() > -1e-12


def test_normality_residual_examples(rng):
    H = random_complex(rng, 4)
    H = H + adj(H)
    assert normality_residual(H) < 1e-14
    # commutator of [[0,1],[0,0]] is diag(-1, 1)
    assert normality_residual([[0, 1], [0, 0]]) == pytest.approx(math.sqrt(2), abs=1e-15)


def test_commutation_residual_examples(rng):
    assert commutation_residual(np.eye(3), random_complex(rng, 3)) < 1e-15
    assert commutation_residual(np.diag([1, 2]), np.diag([3, 4])) == 0.0
    X = np.diag([1.0, 2.0])
    Y = np.array([[0.0, 1.0], [1.0, 0.0]])
    # XY - YX = [[0, -1], [1, 0]] by hand; scale sqrt(5) * sqrt(2)
    expected = math.sqrt(2) / math.sqrt(10)
    assert commutation_residual(X, Y) == pytest.approx(expected, rel=1e-14)
    with pytest.raises(ValueError):
        commutation_residual(np.eye(2), np.eye(3))


def test_norm_chain_eq4(rng):
    for k in range(500):
        m = 1 + k % 6
        T = random_complex(rng, m) * rng.uniform(0.01, 10)
        op, fro = operator_norm(T), frobenius_norm(T)
        assert op <= fro + 1e-12 * fro
        assert fro <= math.sqrt(m) * op + 1e-12 * fro


def test_singular_values_unitarily_invariant(rng):
    for m in range(1, 7):
        T = random_complex(rng, m)
        U, V = random_unitary(m, rng), random_unitary(m, rng)
        assert np.max(np.abs(singular_values(U @ T @ V) - singular_values(T))) < 1e-10


# -- subspace intersection ----------------------------------------------------


def pairwise_oracle(X, Y):
    # zero principal angles count the shared directions
    angles = scipy.linalg.subspace_angles(X, Y)
    return int(np.sum(angles < 1e-7))


def test_subspace_intersection_examples(rng):
    X = random_complex(rng, 4, 2)
    assert subspace_intersection_dimension([X, X]) == 2
    Q, _ = np.linalg.qr(random_complex(rng, 4))
    assert subspace_intersection_dimension([Q[:, :2], Q[:, 2:]]) == 0
    for _ in range(20):
        X, Y = random_complex(rng, 4, 3), random_complex(rng, 4, 3)
        d = subspace_intersection_dimension([X, Y])
        assert d == 2 == pairwise_oracle(X, Y)


def test_subspace_intersection_dependent_columns(rng):
    X = random_complex(rng, 5, 2)
    X = np.hstack([X, X @ random_complex(rng, 2, 2)])
    assert subspace_intersection_dimension([X]) == 2
    assert subspace_intersection_dimension([X, X[:, :2]]) == 2


def test_subspace_intersection_shared_direction(rng):
    v = random_complex(rng, 6, 1)
    bases = [np.hstack([v, random_complex(rng, 6, 2)]) for _ in range(3)]
    # three generic 3-dim subspaces of C^6 sharing one vector
    assert subspace_intersection_dimension(bases) == 1


def test_subspace_intersection_rejects_row_mismatch():
    with pytest.raises(ValueError, match="rows"):
        subspace_intersection_dimension([np.eye(3), np.eye(4)])


def test_subspace_intersection_lemma_bound_1000(rng):
    for _ in range(1000):
        k = int(rng.integers(2, 5))
        n = int(rng.integers(2, 7))
        dims = rng.integers(0, n + 1, size=k)
        bases = [random_complex(rng, n, int(d)) for d in dims]
        got = subspace_intersection_dimension(bases)
        assert got >= sum(dims) - (k - 1) * n
        assert got <= min(dims)
        if k == 2:
            assert got == pairwise_oracle(*bases) if min(dims) > 0 else got == 0


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(2, 6),
    shared=st.integers(0, 3),
    extra=st.lists(st.integers(0, 3), min_size=2, max_size=4),
    seed=st.integers(0, 2**32 - 1),
)
def test_subspace_intersection_planted(n, shared, extra, seed):
    r = np.random.default_rng(seed)
    shared = min(shared, n)
    S = random_complex(r, n, shared)
    bases = [np.hstack([S, random_complex(r, n, min(e, n - shared))]) for e in extra]
    got = subspace_intersection_dimension(bases)
    dims = [b.shape[1] for b in bases]
    assert got >= shared
    assert got >= sum(dims) - (len(dims) - 1) * n

import numpy as np
import pytest

from normcorner.linalg import adj, polar, random_unitary


def random_complex(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def random_hermitian(rng, n):
    X = random_complex(rng, n)
    return (X + adj(X)) / 2


def random_contraction(rng, n):
    W = random_unitary(n, rng)
    V = random_unitary(n, rng)
    s = np.sort(rng.uniform(0.0, 1.0, n))[::-1]
    return (W * s) @ V


def diag_in_basis(Q, d):
    return (Q * d) @ adj(Q)


def normal_recipe_params(rng, B, rank=None):
    """Random parameters satisfying the normal-completion constraints for B.

    Works in an eigenbasis of the polar factor P: K0 and K2 are diagonal there
    and agree wherever P is nonzero.  H1 and H2 are built to commute with K1 and K2
    by sharing their eigenbases.
    """
    from normcorner.completions import HermitianCornerParams

    n = B.shape[0]
    pol = polar(B)
    w, Q = np.linalg.eigh(pol.psd_part)
    k0 = rng.standard_normal(n)
    k2 = np.where(w > 1e-12, k0, rng.standard_normal(n))
    K0 = diag_in_basis(Q, k0)
    K2 = diag_in_basis(Q, k2)
    K1 = pol.unitary_part @ K0 @ adj(pol.unitary_part)
    _, Q1 = np.linalg.eigh(K1)
    H1 = diag_in_basis(Q1, rng.standard_normal(n))
    H2 = diag_in_basis(Q, rng.standard_normal(n))
    return HermitianCornerParams(K0=K0, K2=K2, Hfirst=H1, H2=H2)


def unitary_recipe_params(rng, B):
    """Random parameters satisfying the corrected unitary-recipe constraints."""
    from normcorner.completions import HermitianCornerParams

    n = B.shape[0]
    # w: eigenvalues of the polar factor P, so I - P^2 has eigenvalues 1 - w^2
    w, Q = np.linalg.eigh(polar(B).psd_part)
    room = np.clip(1.0 - w**2, 0.0, None)
    k0 = np.sqrt(room) * rng.uniform(-1.0, 1.0, n)
    free = w < 1e-12
    k2 = np.where(free, np.sqrt(room) * rng.uniform(-1.0, 1.0, n), k0)
    h0 = np.sqrt(np.clip(room - k0**2, 0.0, None)) * rng.choice([-1.0, 1.0], n)
    h2_free = np.sqrt(np.clip(room - k2**2, 0.0, None)) * rng.choice([-1.0, 1.0], n)
    h2 = np.where(free, h2_free, -h0)
    return HermitianCornerParams(
        K0=diag_in_basis(Q, k0),
        K2=diag_in_basis(Q, k2),
        Hfirst=diag_in_basis(Q, h0),
        H2=diag_in_basis(Q, h2),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

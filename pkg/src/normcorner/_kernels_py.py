"""Reference numpy kernels, used when the compiled extension is unavailable."""

import numpy as np


def commutator_objective(N):
    """Return ``(f, grad)`` for ``f(N) = ||N^*N - NN^*||_F^2``.

    ``grad`` packs both real partial derivatives into one complex array:
    ``grad.real = df/dRe(N)`` and ``grad.imag = df/dIm(N)``.  It equals
    ``4 (N G - G N)`` with ``G = N^*N - NN^*``.
    """
    Nh = N.conj().T
    G = Nh @ N - N @ Nh
    f = float(np.sum(G.real**2 + G.imag**2))
    return f, 4.0 * (N @ G - G @ N)


def commutator_value(N):
    Nh = N.conj().T
    G = Nh @ N - N @ Nh
    return float(np.sum(G.real**2 + G.imag**2))

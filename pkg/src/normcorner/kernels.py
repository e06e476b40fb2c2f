"""Backend selection for the commutator kernels.

The Cython extension is preferred; the numpy version in ``_kernels_py`` is
used when the extension has not been built.  ``BACKEND`` names the one in use.
"""

try:
    from ._kernels import commutator_objective, commutator_value

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on the build
    from ._kernels_py import commutator_objective, commutator_value

    BACKEND = "numpy"

__all__ = ["commutator_objective", "commutator_value", "BACKEND"]

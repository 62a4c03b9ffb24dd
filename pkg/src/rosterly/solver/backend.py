"""Kernel backend re-exports.

``ROSTERLY_BACKEND=numpy`` forces the pure-numpy kernels; anything else
(default) compiles them with numba when importable. See
`rosterly.solver.kernels` for the selection logic.
"""

from .kernels import (  # noqa: F401
    BACKEND,
    dual_simplex,
    primal_simplex,
    recompute_basics,
    refactorize,
)

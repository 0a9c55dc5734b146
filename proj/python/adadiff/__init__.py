"""AdaGrad-Diff variable-metric proximal solver.

The heavy lifting lives in the compiled extension; this package re-exports
the public operations.
"""

from adadiff._core import (
    gaussian_kernel,
    gen_synthetic,
    gen_two_moons,
    parse_libsvm,
    prox_l1,
    prox_signed_box,
    serialize_libsvm,
    solve,
    solve_svm_dual,
)

__all__ = [
    "gaussian_kernel",
    "gen_synthetic",
    "gen_two_moons",
    "parse_libsvm",
    "prox_l1",
    "prox_signed_box",
    "serialize_libsvm",
    "solve",
    "solve_svm_dual",
]

__version__ = "0.1.0"

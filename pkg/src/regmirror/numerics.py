"""Dense linear algebra helpers and seeded randomness.

Vectors and matrices are plain float64 numpy arrays throughout the
package. All randomness flows through generators created by
:func:`rng_stream`, so a fixed seed reproduces every draw sequence.
"""

import numpy as np

from .errors import SingularMatrixError

# Relative pivot threshold below which elimination refuses to proceed.
PIVOT_TOL = 1e-12


def rng_stream(seed):
    """Return a deterministic PCG64 generator for the given 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed))


def spawn_stream(seed, *path):
    """Derive an independent child stream from a seed and integer path.

    Used to give each experiment grid cell its own stream so cells can
    be reordered (or parallelized) without changing any draw.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, path)])))


def gaussian_matrix(rows, cols, rng):
    """Draw an i.i.d. standard-normal matrix of shape (rows, cols)."""
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix shape must be positive, got ({rows}, {cols})")
    return rng.standard_normal((rows, cols))


def solve_linear_system(a, b):
    """Solve A x = b by Gaussian elimination with partial pivoting.

    Raises SingularMatrixError when the largest available pivot falls
    below PIVOT_TOL * max|A|. Intended for the small (<= a few hundred
    dimensional) systems the oracles produce.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or b.shape != (n,):
        raise ValueError(f"expected square system, got A{a.shape}, b{b.shape}")

    scale = np.max(np.abs(a)) if n else 0.0
    if scale == 0.0:
        raise SingularMatrixError("coefficient matrix is zero")

    for k in range(n):
        pivot_row = k + int(np.argmax(np.abs(a[k:, k])))
        pivot = a[pivot_row, k]
        if abs(pivot) < PIVOT_TOL * scale:
            raise SingularMatrixError(f"pivot {pivot:.3e} below tolerance at column {k}")
        if pivot_row != k:
            a[[k, pivot_row]] = a[[pivot_row, k]]
            b[[k, pivot_row]] = b[[pivot_row, k]]
        factors = a[k + 1:, k] / pivot
        a[k + 1:, k + 1:] -= np.outer(factors, a[k, k + 1:])
        a[k + 1:, k] = 0.0
        b[k + 1:] -= factors * b[k]

    x = np.empty(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x

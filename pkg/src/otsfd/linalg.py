"""Direct banded solves and a conjugate-gradient solve for implicit baselines.

Elimination is done without pivoting; the systems produced by the implicit
schemes (I + lambda * operator with lambda > 0) are diagonally dominant, so a
vanishing pivot signals a caller bug and raises instead of degrading silently.
"""

import numpy as np

from .errors import IterationLimitError, ZeroPivotError

_PIVOT_TOL = 1e-300


def solve_tridiagonal(lower, diag, upper, rhs):
    """Thomas algorithm for a tridiagonal system.

    lower/upper have length n-1 (sub/super diagonal), diag and rhs length n.
    """
    diag = np.asarray(diag, dtype=float)
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    n = diag.size
    c = np.empty(n - 1) if n > 1 else np.empty(0)
    d = np.empty(n)

    piv = diag[0]
    if abs(piv) < _PIVOT_TOL:
        raise ZeroPivotError("zero pivot at row 0")
    if n > 1:
        c[0] = upper[0] / piv
    d[0] = rhs[0] / piv
    for k in range(1, n):
        piv = diag[k] - lower[k - 1] * c[k - 1]
        if abs(piv) < _PIVOT_TOL:
            raise ZeroPivotError(f"zero pivot at row {k}")
        if k < n - 1:
            c[k] = upper[k] / piv
        d[k] = (rhs[k] - lower[k - 1] * d[k - 1]) / piv

    x = np.empty(n)
    x[-1] = d[-1]
    for k in range(n - 2, -1, -1):
        x[k] = d[k] - c[k] * x[k + 1]
    return x


def solve_banded(bandwidth, bands, rhs):
    """LU solve (no pivoting) of a banded system.

    bands has shape (2*bandwidth + 1, n) in diagonal-major layout:
    bands[bandwidth + k, i] is the matrix entry A[i, i + k] for
    -bandwidth <= k <= bandwidth (entries outside the matrix are ignored).
    """
    bw = int(bandwidth)
    bands = np.array(bands, dtype=float)
    rhs = np.array(rhs, dtype=float)
    n = rhs.size
    if bands.shape != (2 * bw + 1, n):
        raise ValueError(f"bands shape {bands.shape} != {(2 * bw + 1, n)}")

    # dense-in-the-band elimination; a[i][k] holds A[i, i+k-bw]
    a = bands.T.copy()  # shape (n, 2bw+1); a[i, bw + k] = A[i, i+k]
    x = rhs
    for i in range(n):
        piv = a[i, bw]
        if abs(piv) < _PIVOT_TOL:
            raise ZeroPivotError(f"zero pivot at row {i}")
        for r in range(i + 1, min(i + bw + 1, n)):
            off = i - r  # column i relative to row r
            factor = a[r, bw + off] / piv
            if factor == 0.0:
                continue
            a[r, bw + off] = 0.0
            for k in range(1, bw + 1):
                if i + k < n:
                    a[r, bw + off + k] -= factor * a[i, bw + k]
            x[r] -= factor * x[i]

    sol = np.empty(n)
    for i in range(n - 1, -1, -1):
        acc = x[i]
        for k in range(1, bw + 1):
            if i + k < n:
                acc -= a[i, bw + k] * sol[i + k]
        sol[i] = acc / a[i, bw]
    return sol


def solve_cg(apply_operator, rhs, tolerance=1e-12, max_iter=None, x0=None):
    """Conjugate gradient for an SPD operator given as a matvec callable.

    Stops when ||rhs - A x|| <= tolerance * max(1, ||rhs||).
    """
    rhs = np.asarray(rhs, dtype=float)
    n = rhs.size
    if max_iter is None:
        max_iter = 10 * n
    x = np.zeros_like(rhs) if x0 is None else np.array(x0, dtype=float)

    r = rhs - apply_operator(x) if x.any() else rhs.copy()
    target = tolerance * max(1.0, float(np.linalg.norm(rhs)))
    if np.linalg.norm(r) <= target:
        return x
    p = r.copy()
    rs = float(r @ r)
    for _ in range(max_iter):
        ap = apply_operator(p)
        alpha = rs / float(p @ ap)
        x = x + alpha * p
        r = r - alpha * ap
        rs_new = float(r @ r)
        if np.sqrt(rs_new) <= target:
            return x
        p = r + (rs_new / rs) * p
        rs = rs_new
    raise IterationLimitError(f"CG failed to converge in {max_iter} iterations")

"""Banded direct solves and conjugate gradient against dense numpy oracles."""

import numpy as np
import pytest

from otsfd.errors import IterationLimitError, ZeroPivotError
from otsfd.linalg import solve_banded, solve_cg, solve_tridiagonal


def bands_from_dense(A, bw):
    n = A.shape[0]
    bands = np.zeros((2 * bw + 1, n))
    for k in range(-bw, bw + 1):
        for i in range(n):
            if 0 <= i + k < n:
                bands[bw + k, i] = A[i, i + k]
    return bands


def second_difference_matrix(n):
    A = 2.0 * np.eye(n)
    A -= np.diag(np.ones(n - 1), 1)
    A -= np.diag(np.ones(n - 1), -1)
    return A


def test_tridiagonal_hand_example():
    # {2, -1} operator, rhs (1, 0, 1) -> solution (1, 1, 1)
    x = solve_tridiagonal([-1.0, -1.0], [2.0, 2.0, 2.0], [-1.0, -1.0], [1.0, 0.0, 1.0])
    assert x == pytest.approx([1.0, 1.0, 1.0], abs=1e-14)


def test_tridiagonal_against_dense():
    rng = np.random.default_rng(11)
    n = 40
    A = second_difference_matrix(n) + np.diag(1.0 + rng.random(n))
    rhs = rng.standard_normal(n)
    x = solve_tridiagonal(np.diag(A, -1), np.diag(A), np.diag(A, 1), rhs)
    assert x == pytest.approx(np.linalg.solve(A, rhs), abs=1e-10)


def test_tridiagonal_single_row():
    assert solve_tridiagonal([], [4.0], [], [2.0]) == pytest.approx([0.5])


def test_tridiagonal_zero_pivot():
    with pytest.raises(ZeroPivotError):
        solve_tridiagonal([1.0], [0.0, 1.0], [1.0], [1.0, 1.0])


def test_banded_matches_tridiagonal():
    rng = np.random.default_rng(3)
    n = 25
    A = second_difference_matrix(n) + np.diag(2.0 + rng.random(n))
    rhs = rng.standard_normal(n)
    x_band = solve_banded(1, bands_from_dense(A, 1), rhs)
    x_tri = solve_tridiagonal(np.diag(A, -1), np.diag(A), np.diag(A, 1), rhs)
    assert x_band == pytest.approx(x_tri, abs=1e-12)


def test_banded_pentadiagonal_against_dense():
    # diagonally dominant pentadiagonal system like the implicit bilaplacian
    rng = np.random.default_rng(5)
    n = 30
    A = 12.0 * np.eye(n)
    for k, v in ((1, -4.0), (2, 1.0)):
        A += np.diag(np.full(n - k, v), k)
        A += np.diag(np.full(n - k, v), -k)
    rhs = rng.standard_normal(n)
    x = solve_banded(2, bands_from_dense(A, 2), rhs)
    expect = np.linalg.solve(A, rhs)
    assert x == pytest.approx(expect, abs=1e-11)
    assert np.max(np.abs(A @ x - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(rhs)))


def test_banded_heptadiagonal_residual():
    rng = np.random.default_rng(9)
    n = 50
    A = 60.0 * np.eye(n)
    for k, v in ((1, -10.0), (2, 4.0), (3, -1.0)):
        A += np.diag(np.full(n - k, v), k)
        A += np.diag(np.full(n - k, v), -k)
    rhs = rng.standard_normal(n)
    x = solve_banded(3, bands_from_dense(A, 3), rhs)
    assert np.max(np.abs(A @ x - rhs)) <= 1e-12


def test_banded_shape_and_pivot_checks():
    with pytest.raises(ValueError):
        solve_banded(1, np.zeros((2, 4)), np.zeros(4))
    bands = np.zeros((3, 3))
    bands[1] = [1.0, 0.0, 1.0]
    with pytest.raises(ZeroPivotError):
        solve_banded(1, bands, np.ones(3))


def test_cg_dense_spd_oracle():
    rng = np.random.default_rng(17)
    M = rng.standard_normal((8, 8))
    A = M @ M.T + 8.0 * np.eye(8)
    rhs = rng.standard_normal(8)
    x = solve_cg(lambda v: A @ v, rhs, tolerance=1e-13)
    assert x == pytest.approx(np.linalg.solve(A, rhs), abs=1e-10)


def test_cg_stopping_criterion_scale():
    # the absolute floor max(1, ||rhs||) keeps tiny right-hand sides cheap
    A = np.diag([1.0, 2.0, 3.0])
    x = solve_cg(lambda v: A @ v, np.array([1e-16, 0.0, 0.0]), tolerance=1e-12)
    assert x == pytest.approx(np.zeros(3), abs=1e-12)


def test_cg_warm_start():
    A = second_difference_matrix(12) + np.eye(12)
    rhs = np.ones(12)
    exact = np.linalg.solve(A, rhs)
    x = solve_cg(lambda v: A @ v, rhs, tolerance=1e-13, x0=exact)
    assert x == pytest.approx(exact, abs=1e-11)


def test_cg_iteration_limit():
    A = second_difference_matrix(64) + 1e-8 * np.eye(64)
    with pytest.raises(IterationLimitError):
        solve_cg(lambda v: A @ v, np.ones(64), tolerance=1e-15, max_iter=3)

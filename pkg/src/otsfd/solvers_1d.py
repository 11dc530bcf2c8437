"""Time steppers for the 1D schemes, with toggleable optimal-step and
defect-correction behavior, plus implicit baselines.

Steppers return freshly allocated real-node arrays; the integrate_* drivers
own the time loop and refresh Dirichlet boundary nodes and ghost values from
the exact solution at every level (the regular-domain boundary convention
used throughout).
"""

from dataclasses import dataclass

import numpy as np

from .errors import CFLViolationError, StabilityViolationError
from .grid import UniformGrid1D
from .linalg import solve_banded, solve_tridiagonal
from .ots import OPTIMAL, TimeStepPolicy
from .sources import ExactSolution, SourceModel
from .stencil import (
    BILAPLACIAN_O2_WEIGHTS,
    BILAPLACIAN_O4_WEIGHTS,
    ScalarField1D,
    bilaplacian_1d_o4,
    gradient_central_1d,
    gradient_upwind_1d,
    laplacian_1d_c2,
)

_REL_TOL = 1.0 + 1e-9


@dataclass(frozen=True)
class SchemeVariant:
    """Run-time switches: optimal step on/off, correction term on/off."""

    ots: bool = True
    nidc: bool = True
    policy: TimeStepPolicy = OPTIMAL


def _core_x(field):
    return field.grid.nodes()


# ---------------------------------------------------------------------------
# explicit steppers

def advection_upwind_fe_step(field: ScalarField1D, A: float, dt: float) -> np.ndarray:
    """Upwind forward-Euler advection update; exact index shift at unit CFL."""
    cfl = abs(A) * dt / field.grid.dx
    if cfl > _REL_TOL:
        raise CFLViolationError(f"CFL number {cfl:.3f} exceeds 1")
    sign = 1 if A >= 0 else -1
    return field.core - A * dt * gradient_upwind_1d(field, sign)


def wave_kpy_step(
    prev: ScalarField1D,
    curr: ScalarField1D,
    c: float,
    dt: float,
    source: SourceModel,
    variant: SchemeVariant,
) -> np.ndarray:
    """Three-level second-order wave update u_tt = c^2 u_xx + f."""
    if c * dt / curr.grid.dx > _REL_TOL:
        raise StabilityViolationError("wave step exceeds dt <= dx/c")
    x, t = _core_x(curr), curr.time
    rhs = c**2 * laplacian_1d_c2(curr) + source.f(x, t)
    if variant.nidc:
        source.require("f_xx", "f_tt")
        rhs = rhs + dt**2 / 12.0 * (c**2 * source.f_xx(x, t) + source.f_tt(x, t))
    return 2.0 * curr.core - prev.core + dt**2 * rhs


def kpy_first_step(
    grid: UniformGrid1D,
    exact: ExactSolution,
    source: SourceModel,
    c: float,
    dt: float,
    order: int = 5,
) -> ScalarField1D:
    """Taylor start for the three-level wave scheme.

    order 5 keeps terms through dt^4 (the accuracy the corrected scheme
    needs); order 3 stops after the dt^2 term and is deliberately too coarse,
    used to demonstrate the start-up sensitivity of the scheme.
    """
    if order not in (3, 4, 5):
        raise ValueError("first-step order must be 3, 4, or 5")
    exact.require("u_t", "u_xx")
    source.require("f")
    x = grid.nodes(with_ghosts=True)
    u0 = exact.u(x, 0.0)
    u1 = u0 + dt * exact.u_t(x, 0.0)
    u1 += dt**2 / 2.0 * (c**2 * exact.u_xx(x, 0.0) + source.f(x, 0.0))
    if order >= 4:
        exact.require("u_txx")
        source.require("f_t")
        u1 += dt**3 / 6.0 * (c**2 * exact.u_txx(x, 0.0) + source.f_t(x, 0.0))
    if order >= 5:
        exact.require("u_xxxx")
        source.require("f_xx", "f_tt")
        u1 += dt**4 / 24.0 * (
            c**4 * exact.u_xxxx(x, 0.0)
            + c**2 * source.f_xx(x, 0.0)
            + source.f_tt(x, 0.0)
        )
    return ScalarField1D(grid, u1, time=dt)


def diffusion_fe_step(
    field: ScalarField1D,
    D: float,
    dt: float,
    source: SourceModel,
    variant: SchemeVariant,
) -> np.ndarray:
    """Forward-Euler diffusion update u_t = D u_xx + f."""
    dx = field.grid.dx
    if dt > _REL_TOL * dx**2 / (2.0 * D):
        raise StabilityViolationError("diffusion step exceeds dt <= dx^2 / 2D")
    x, t = _core_x(field), field.time
    new = field.core + dt * (D * laplacian_1d_c2(field) + source.f(x, t))
    if variant.nidc:
        source.require("f_xx", "f_t")
        new = new + dt**2 / 2.0 * (D * source.f_xx(x, t) + source.f_t(x, t))
    return new


def dufort_frankel_step(
    prev: ScalarField1D,
    curr: ScalarField1D,
    D: float,
    dt: float,
    source: SourceModel,
    variant: SchemeVariant,
) -> np.ndarray:
    """Leap-frog diffusion update stabilized by a discrete u_tt term.

    The implicit occurrence of the new level is solved in closed form per
    node; the left-hand coefficient 1 + 2 D dt / dx^2 stays above one.
    """
    dx = curr.grid.dx
    mu = 2.0 * D * dt / dx**2
    x, t = _core_x(curr), curr.time
    rhs = prev.core + 2.0 * dt * (D * laplacian_1d_c2(curr) + source.f(x, t))
    rhs += mu * (2.0 * curr.core - prev.core)
    if variant.nidc:
        source.require("f_xx", "f_t")
        rhs += (2.0 * D * dt**3 / dx**2) * (
            D * source.f_xx(x, t) + source.f_t(x, t)
        )
    return rhs / (1.0 + mu)


def burgers_fe_step(
    field: ScalarField1D,
    nu: float,
    dt: float,
    variant: SchemeVariant,
    printed_correction: bool = False,
) -> np.ndarray:
    """Forward-Euler viscous Burgers update with central differences.

    The correction bracket is -(dt^2/2)(4 nu u_x u_xx - 2 u u_x^2 - u^2 u_xx),
    with u_x, u_xx from second-order central stencils of the current solution.
    `printed_correction` swaps u_x^2 for u_xx^2 so the variants can be
    compared.
    """
    dx = field.grid.dx
    if dt > _REL_TOL * dx**2 / (2.0 * nu):
        raise StabilityViolationError("Burgers step exceeds heuristic dt <= dx^2 / 2nu")
    u = field.core
    u_xx = laplacian_1d_c2(field)
    u_x = gradient_central_1d(field)
    new = u + dt * (nu * u_xx - u * u_x)
    if variant.nidc:
        sq = u_xx**2 if printed_correction else u_x**2
        bracket = 4.0 * nu * u_x * u_xx - 2.0 * u * sq - u**2 * u_xx
        new = new - dt**2 / 2.0 * bracket
    return new


def parabolic4_fe_step(
    field: ScalarField1D,
    kappa: float,
    dt: float,
    source: SourceModel,
    variant: SchemeVariant,
) -> np.ndarray:
    """Forward-Euler update for u_t = -kappa u_xxxx + f (7-point bilaplacian)."""
    dx = field.grid.dx
    if dt > _REL_TOL * 3.0 * dx**4 / (40.0 * kappa):
        raise StabilityViolationError("parabolic step exceeds dt <= 3 dx^4 / 40 kappa")
    x, t = _core_x(field), field.time
    new = field.core + dt * (-kappa * bilaplacian_1d_o4(field) + source.f(x, t))
    if variant.nidc:
        source.require("f_xxxx", "f_t")
        new = new - dt**2 / 2.0 * (
            kappa * source.f_xxxx(x, t) - source.f_t(x, t)
        )
    return new


# ---------------------------------------------------------------------------
# implicit baselines

def _implicit_banded_solve(grid, coeffs, rhs_interior, known_new):
    """Solve u_j - sum_o coeffs[o] u_{j+o} = rhs_j on interior nodes 1..n-2.

    coeffs maps stencil offsets to coefficients; references to boundary or
    ghost nodes read `known_new` (padded values at the new time level).
    """
    n, g = grid.n, grid.ghost_width
    bw = max(abs(o) for o in coeffs)
    m = n - 2
    bands = np.zeros((2 * bw + 1, m))
    rhs = np.array(rhs_interior, dtype=float)
    for o, c in coeffs.items():
        if o == 0:
            bands[bw] += 1.0 - c
        else:
            bands[bw + o, :] = -c
    # fold known-node contributions into the right-hand side
    for q in range(m):
        j = q + 1
        for o, c in coeffs.items():
            jj = j + o
            if jj < 1 or jj > n - 2:
                rhs[q] += c * known_new[g + jj]
    if bw == 1:
        # diagonal-major layout: bands[bw+k, i] = A[i, i+k]
        sub = bands[bw - 1, 1:]
        sup = bands[bw + 1, :-1]
        interior = solve_tridiagonal(sub, bands[bw], sup, rhs)
    else:
        interior = solve_banded(bw, bands, rhs)
    out = known_new[g : g + n].copy()
    out[1:-1] = interior
    return out


def backward_euler_diffusion_step(field, D, dt, source, u_exact_new, t_new):
    """Backward-Euler diffusion update; boundary values from the exact solution."""
    dx = field.grid.dx
    lam = D * dt / dx**2
    coeffs = {-1: lam, 0: -2.0 * lam, 1: lam}
    x = _core_x(field)
    rhs = field.core[1:-1] + dt * source.f(x[1:-1], t_new)
    return _implicit_banded_solve(field.grid, coeffs, rhs, u_exact_new)


def crank_nicolson_diffusion_step(field, D, dt, source, u_exact_new, t_new):
    """Trapezoidal diffusion update with the 3-point Laplacian."""
    dx = field.grid.dx
    lam = 0.5 * D * dt / dx**2
    coeffs = {-1: lam, 0: -2.0 * lam, 1: lam}
    x, t = _core_x(field), field.time
    explicit = field.core + 0.5 * dt * D * laplacian_1d_c2(field)
    rhs = explicit[1:-1] + 0.5 * dt * (
        source.f(x[1:-1], t) + source.f(x[1:-1], t_new)
    )
    return _implicit_banded_solve(field.grid, coeffs, rhs, u_exact_new)


def crank_nicolson_parabolic4_step(
    field, kappa, dt, source, u_exact_new, t_new, stencil_order=4
):
    """Trapezoidal update for u_t = -kappa u_xxxx + f.

    stencil_order selects the 2nd-order 5-point or 4th-order 7-point
    bilaplacian for both the implicit and explicit halves.
    """
    dx = field.grid.dx
    if stencil_order == 4:
        weights = BILAPLACIAN_O4_WEIGHTS / 6.0
        offsets = range(-3, 4)
    elif stencil_order == 2:
        weights = BILAPLACIAN_O2_WEIGHTS
        offsets = range(-2, 3)
    else:
        raise ValueError("stencil_order must be 2 or 4")
    scale = -kappa * 0.5 * dt / dx**4
    coeffs = {o: scale * w for o, w in zip(offsets, weights)}

    g, n = field.grid.ghost_width, field.grid.n
    explicit = field.core.copy()
    for o, c in coeffs.items():
        explicit = explicit + c * field.values[g + o : g + o + n]
    x, t = _core_x(field), field.time
    rhs = explicit[1:-1] + 0.5 * dt * (
        source.f(x[1:-1], t) + source.f(x[1:-1], t_new)
    )
    return _implicit_banded_solve(field.grid, coeffs, rhs, u_exact_new)


# ---------------------------------------------------------------------------
# time-loop drivers

def _assemble(grid, u_exact, core_new, t_new):
    """Padded field at t_new: numeric interior, exact boundary and ghosts."""
    vals = np.asarray(u_exact(grid.nodes(with_ghosts=True), t_new), dtype=float)
    g = grid.ghost_width
    vals[g + 1 : g + grid.n - 1] = core_new[1:-1]
    return ScalarField1D(grid, vals, time=t_new)


def integrate_one_level(grid, u_exact, step, dt, T, norm_guard=None):
    """March a single-history scheme to exactly T (final step truncated)."""
    field = ScalarField1D.from_function(grid, u_exact, t=0.0)
    t = 0.0
    eps = 1e-12 * max(T, 1.0)
    while T - t > eps:
        h = min(dt, T - t)
        core_new = step(field, h)
        t = T if T - (t + h) <= eps else t + h
        field = _assemble(grid, u_exact, core_new, t)
        if norm_guard is not None:
            m = float(np.max(np.abs(field.core)))
            if not np.isfinite(m) or m > norm_guard:
                raise StabilityViolationError(
                    f"solution norm {m:.3g} exceeded guard {norm_guard:.3g}"
                )
    return field, t


def integrate_two_level(grid, u_exact, first, step, dt, T):
    """March a two-history scheme with a uniform dt.

    The level spacing must stay exactly dt, so the run ends at the multiple
    of dt nearest T and the reached time is returned alongside the field.
    """
    n_steps = max(1, round(T / dt))
    prev = ScalarField1D.from_function(grid, u_exact, t=0.0)
    curr = first(dt)
    vals = np.asarray(u_exact(grid.nodes(with_ghosts=True), dt), dtype=float)
    g = grid.ghost_width
    vals[g + 1 : g + grid.n - 1] = curr.values[g + 1 : g + grid.n - 1]
    curr = ScalarField1D(grid, vals, time=dt)
    for k in range(2, n_steps + 1):
        core_new = step(prev, curr, dt)
        prev, curr = curr, _assemble(grid, u_exact, core_new, k * dt)
    return curr, n_steps * dt

"""2D steppers: upwind advection, 9-point diffusion (regular and irregular
level-set domains), and a Crank-Nicolson baseline.

Irregular-domain fields keep NaN in far-exterior nodes.  Ghost values are
rebuilt every step from the current boundary data -- edge ghosts first, then
corner ghosts (whose stencils may read edge ghosts); filling out of order
trips the NaN sentinel.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    CFLViolationError,
    GhostFillOrderError,
    RatioMismatchError,
    StabilityViolationError,
)
from .grid import CellClassification, FAR_EXTERIOR, UniformGrid2D
from .linalg import solve_cg
from .sources import SourceModel
from .stencil import (
    ScalarField2D,
    laplacian_2d_9pt,
    mixed_xy_upwind,
)
from .solvers_1d import SchemeVariant

_REL_TOL = 1.0 + 1e-9


def _shift2(field, ox, oy):
    g = field.grid.ghost_width
    nx, ny = field.grid.nx, field.grid.ny
    return field.values[g + ox : g + ox + nx, g + oy : g + oy + ny]


def _upwind_grad(field, axis, sign):
    """One-sided difference along one axis, biased into the wind."""
    h = field.grid.dx if axis == 0 else field.grid.dy
    off = (-sign, 0) if axis == 0 else (0, -sign)
    return (_shift2(field, 0, 0) - _shift2(field, *off)) / (sign * h)


def advection2d_step(field: ScalarField2D, A, dt: float, variant: SchemeVariant):
    """First-order upwind advection u_t + Ax u_x + Ay u_y = 0.

    The grid must satisfy dy/dx = |Ay/Ax| so a single time step can reach
    unit CFL in both directions at once; the correction term is the upwind
    cross-derivative Ax Ay dt^2 u_xy.
    """
    Ax, Ay = A
    if Ax == 0.0 or Ay == 0.0:
        raise ValueError("both advection speeds must be nonzero")
    ratio = abs(Ay / Ax)
    if abs(field.grid.spacing_ratio - ratio) > 1e-12 * ratio:
        raise RatioMismatchError(
            f"grid spacing ratio {field.grid.spacing_ratio:.6g} != |Ay/Ax| = {ratio:.6g}"
        )
    cx = abs(Ax) * dt / field.grid.dx
    cy = abs(Ay) * dt / field.grid.dy
    if cx > _REL_TOL or cy > _REL_TOL:
        raise CFLViolationError(f"CFL numbers ({cx:.3f}, {cy:.3f}) exceed 1")
    sx = 1 if Ax > 0 else -1
    sy = 1 if Ay > 0 else -1
    new = (
        _shift2(field, 0, 0)
        - dt * Ax * _upwind_grad(field, 0, sx)
        - dt * Ay * _upwind_grad(field, 1, sy)
    )
    if variant.nidc:
        new = new + Ax * Ay * dt**2 * mixed_xy_upwind(field, (sx, sy))
    return new


def diffusion2d_9pt_step(
    field: ScalarField2D,
    D: float,
    dt: float,
    source: SourceModel,
    variant: SchemeVariant,
):
    """Forward Euler with the isotropic 9-point Laplacian, u_t = D lap(u) + f."""
    dx = field.grid.dx
    if dt > _REL_TOL * 3.0 * dx**2 / (8.0 * D):
        raise StabilityViolationError("9-point diffusion step exceeds dt <= 3 dx^2 / 8D")
    x, y = field.grid.xy_nodes()
    t = field.time
    new = field.core + dt * (D * laplacian_2d_9pt(field) + source.f(x, y, t))
    if variant.nidc:
        source.require("lap_f", "f_t")
        new = new + dt**2 / 2.0 * (D * source.lap_f(x, y, t) + source.f_t(x, y, t))
    return new


# ---------------------------------------------------------------------------
# irregular-domain ghost filling

@dataclass
class GhostFillPlan:
    """Classification geometry flattened into arrays for vectorized filling."""

    eg_index: np.ndarray     # (m, 2) padded indices of edge ghosts
    eg_boundary: np.ndarray  # (m, 2) boundary-point coordinates
    eg_nodes: np.ndarray     # (m, 3, 2) interior interpolation nodes
    eg_weights: np.ndarray   # (m, 4): boundary weight then node weights
    cg_index: np.ndarray     # (k, 2) padded indices of corner ghosts
    cg_nodes: np.ndarray     # (k, 8, 2) extrapolation stencil nodes
    cg_weights: np.ndarray   # (k, 8)


def build_fill_plan(cls: CellClassification) -> GhostFillPlan:
    m = len(cls.edge_ghosts)
    k = len(cls.corner_ghosts)
    plan = GhostFillPlan(
        eg_index=np.array([eg.index for eg in cls.edge_ghosts], int).reshape(m, 2),
        eg_boundary=np.array([eg.boundary for eg in cls.edge_ghosts]).reshape(m, 2),
        eg_nodes=np.array([eg.interp_indices for eg in cls.edge_ghosts], int).reshape(m, 3, 2),
        eg_weights=np.array([eg.weights for eg in cls.edge_ghosts]).reshape(m, 4),
        cg_index=np.array([cg.index for cg in cls.corner_ghosts], int).reshape(k, 2),
        cg_nodes=np.array(
            [[ij for ij, _ in cg.stencil] for cg in cls.corner_ghosts], int
        ).reshape(k, 8, 2),
        cg_weights=np.array(
            [[w for _, w in cg.stencil] for cg in cls.corner_ghosts]
        ).reshape(k, 8),
    )
    return plan


def fill_edge_ghosts(values, plan: GhostFillPlan, boundary_values, t: float):
    """Cubic extrapolation through the boundary point and 3 interior nodes."""
    if plan.eg_index.size == 0:
        return
    ub = boundary_values(plan.eg_boundary[:, 0], plan.eg_boundary[:, 1], t)
    interior = values[plan.eg_nodes[:, :, 0], plan.eg_nodes[:, :, 1]]
    filled = plan.eg_weights[:, 0] * ub + np.sum(
        plan.eg_weights[:, 1:] * interior, axis=1
    )
    values[plan.eg_index[:, 0], plan.eg_index[:, 1]] = filled


def fill_corner_ghosts(values, plan: GhostFillPlan):
    """Quadratic (plus xy-mixed) extrapolation from 8 already-set nodes."""
    if plan.cg_index.size == 0:
        return
    stencil_vals = values[plan.cg_nodes[:, :, 0], plan.cg_nodes[:, :, 1]]
    if np.isnan(stencil_vals).any():
        raise GhostFillOrderError(
            "corner-ghost stencil reads unset values; fill edge ghosts first"
        )
    values[plan.cg_index[:, 0], plan.cg_index[:, 1]] = np.sum(
        plan.cg_weights * stencil_vals, axis=1
    )


def prepare_irregular_field(cls: CellClassification, init_fn, t=0.0) -> ScalarField2D:
    """Padded field with interior nodes from init_fn and NaN everywhere else."""
    grid = cls.domain.grid
    x, y = grid.xy_nodes(with_ghosts=True)
    vals = np.full(cls.kinds.shape, np.nan)
    mask = cls.interior_mask
    vals[mask] = np.asarray(init_fn(x, y, t), dtype=float)[mask]
    return ScalarField2D(grid, vals, time=t)


def diffusion2d_irregular_step(
    field: ScalarField2D,
    cls: CellClassification,
    plan: GhostFillPlan,
    D: float,
    dt: float,
    source: SourceModel,
    variant: SchemeVariant,
    boundary_values,
):
    """One irregular-domain forward-Euler step (ghost fill + 9-point update).

    Returns a new padded array: updated interior, NaN elsewhere (ghosts are
    refilled at the start of the next step, at the new time level).
    """
    dx = field.grid.dx
    if dt > _REL_TOL * 3.0 * dx**2 / (8.0 * D):
        raise StabilityViolationError("9-point diffusion step exceeds dt <= 3 dx^2 / 8D")
    fill_edge_ghosts(field.values, plan, boundary_values, field.time)
    fill_corner_ghosts(field.values, plan)

    g = field.grid.ghost_width
    x, y = field.grid.xy_nodes(with_ghosts=True)
    t = field.time
    lap = laplacian_2d_9pt(field)
    rhs = D * lap + source.f(x, y, t)[g:-g, g:-g]
    if variant.nidc:
        source.require("lap_f", "f_t")
        rhs = rhs + dt / 2.0 * (
            D * source.lap_f(x, y, t)[g:-g, g:-g] + source.f_t(x, y, t)[g:-g, g:-g]
        )

    new = np.full(field.values.shape, np.nan)
    core_mask = cls.interior_mask[g:-g, g:-g]
    new_core = new[g:-g, g:-g]
    new_core[core_mask] = field.core[core_mask] + dt * rhs[core_mask]
    # interior nodes in the pad ring (if any) carry their boundary data forward
    pad_mask = cls.interior_mask.copy()
    pad_mask[g:-g, g:-g] = False
    new[pad_mask] = field.values[pad_mask]
    return new


def integrate_irregular(
    cls: CellClassification,
    u_exact,
    source: SourceModel,
    D: float,
    dt: float,
    T: float,
    variant: SchemeVariant,
):
    """March the irregular-domain diffusion scheme to exactly T.

    u_exact(x, y, t) supplies the initial data and the Dirichlet boundary
    values at the cut-edge boundary points.  Interior nodes that fall in the
    grid's pad ring are held at the exact solution (they sit within a cell of
    the bounding box and act as boundary data).
    """
    plan = build_fill_plan(cls)
    grid = cls.domain.grid
    g = grid.ghost_width
    field = prepare_irregular_field(cls, u_exact, t=0.0)

    pad_mask = cls.interior_mask.copy()
    pad_mask[g:-g, g:-g] = False
    x_pad, y_pad = grid.xy_nodes(with_ghosts=True)

    t = 0.0
    eps = 1e-12 * max(T, 1.0)
    while T - t > eps:
        h = min(dt, T - t)
        new_vals = diffusion2d_irregular_step(
            field, cls, plan, D, h, source, variant, u_exact
        )
        t = T if T - (t + h) <= eps else t + h
        if pad_mask.any():
            new_vals[pad_mask] = u_exact(x_pad[pad_mask], y_pad[pad_mask], t)
        field = ScalarField2D(grid, new_vals, time=t)
    return field, t


# ---------------------------------------------------------------------------
# regular-domain driver and Crank-Nicolson baseline

def _assemble_2d(grid, u_exact, core_new, t_new):
    """Padded field at t_new: numeric interior, exact boundary ring and ghosts."""
    x, y = grid.xy_nodes(with_ghosts=True)
    vals = np.asarray(u_exact(x, y, t_new), dtype=float)
    g = grid.ghost_width
    vals[g + 1 : g + grid.nx - 1, g + 1 : g + grid.ny - 1] = core_new[1:-1, 1:-1]
    return ScalarField2D(grid, vals, time=t_new)


def integrate_one_level_2d(grid: UniformGrid2D, u_exact, step, dt, T):
    """March a single-history 2D scheme to exactly T (final step truncated)."""
    field = ScalarField2D.from_function(grid, u_exact, t=0.0)
    t = 0.0
    eps = 1e-12 * max(T, 1.0)
    while T - t > eps:
        h = min(dt, T - t)
        core_new = step(field, h)
        t = T if T - (t + h) <= eps else t + h
        field = _assemble_2d(grid, u_exact, core_new, t)
    return field, t


def _lap5(grid, padded):
    """Five-point Laplacian of a padded array, evaluated on the real nodes."""
    g = grid.ghost_width
    nx, ny = grid.nx, grid.ny

    def s(ox, oy):
        return padded[g + ox : g + ox + nx, g + oy : g + oy + ny]

    return (s(1, 0) + s(-1, 0) + s(0, 1) + s(0, -1) - 4.0 * s(0, 0)) / grid.dx**2


def crank_nicolson_2d_5pt_step(
    field: ScalarField2D,
    D: float,
    dt: float,
    source: SourceModel,
    u_exact,
    t_new: float,
    tolerance: float = 1e-12,
):
    """Trapezoidal 5-point diffusion update solved by conjugate gradient.

    Unknowns are the strict-interior nodes; boundary-ring values at t_new come
    from the exact solution and are folded into the right-hand side.
    """
    grid = field.grid
    g = grid.ghost_width
    nx, ny = grid.nx, grid.ny
    lam = 0.5 * D * dt
    shape = (nx - 2, ny - 2)

    def matvec(v):
        pad = np.zeros((nx + 2 * g, ny + 2 * g))
        pad[g + 1 : g + nx - 1, g + 1 : g + ny - 1] = v.reshape(shape)
        return (v.reshape(shape) - lam * _lap5(grid, pad)[1:-1, 1:-1]).ravel()

    x, y = grid.xy_nodes()
    explicit = field.core + lam * _lap5(grid, field.values)
    rhs_core = explicit + 0.5 * dt * (
        source.f(x, y, field.time) + source.f(x, y, t_new)
    )
    rhs = rhs_core[1:-1, 1:-1].copy()

    # new-time boundary-ring contribution to the implicit operator
    bpad = np.zeros((nx + 2 * g, ny + 2 * g))
    xb, yb = grid.xy_nodes()
    ring = np.asarray(u_exact(xb, yb, t_new), dtype=float)
    bcore = np.zeros((nx, ny))
    bcore[0, :], bcore[-1, :] = ring[0, :], ring[-1, :]
    bcore[:, 0], bcore[:, -1] = ring[:, 0], ring[:, -1]
    bpad[g : g + nx, g : g + ny] = bcore
    rhs += lam * _lap5(grid, bpad)[1:-1, 1:-1]

    sol = solve_cg(matvec, rhs.ravel(), tolerance=tolerance)
    core_new = ring.copy()
    core_new[1:-1, 1:-1] = sol.reshape(shape)
    return core_new

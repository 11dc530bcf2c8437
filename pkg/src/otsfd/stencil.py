"""Finite-difference stencils applied over the real nodes of a field.

All operators return freshly allocated arrays sized like the real-node block
(ghosts stripped), so multi-term schemes can combine several outputs.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import AnisotropicGridError, InsufficientGhostError
from .grid import UniformGrid1D, UniformGrid2D


@dataclass
class ScalarField1D:
    grid: UniformGrid1D
    values: np.ndarray          # length n + 2 * ghost_width
    time: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.total_points,):
            raise ValueError("values length does not match grid storage")

    @property
    def core(self) -> np.ndarray:
        """View of the n real-node values."""
        g = self.grid.ghost_width
        return self.values[g : g + self.grid.n]

    @classmethod
    def from_function(cls, grid, fn, t=0.0):
        return cls(grid, fn(grid.nodes(with_ghosts=True), t), time=t)


@dataclass
class ScalarField2D:
    grid: UniformGrid2D
    values: np.ndarray          # shape (nx + 2g, ny + 2g), indexed [i, j]
    time: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        g = self.grid.ghost_width
        expect = (self.grid.nx + 2 * g, self.grid.ny + 2 * g)
        if self.values.shape != expect:
            raise ValueError(f"values shape {self.values.shape} != {expect}")

    @property
    def core(self) -> np.ndarray:
        g = self.grid.ghost_width
        if g == 0:
            return self.values
        return self.values[g:-g, g:-g]

    @classmethod
    def from_function(cls, grid, fn, t=0.0):
        x, y = grid.xy_nodes(with_ghosts=True)
        return cls(grid, fn(x, y, t), time=t)


def _need_ghosts(field, width):
    if field.grid.ghost_width < width:
        raise InsufficientGhostError(
            f"stencil needs ghost_width >= {width}, have {field.grid.ghost_width}"
        )


def _shift1(field, offset):
    """Real-node block shifted by `offset` nodes (reads into the ghosts)."""
    g = field.grid.ghost_width
    n = field.grid.n
    return field.values[g + offset : g + offset + n]


def laplacian_1d_c2(field: ScalarField1D) -> np.ndarray:
    """(u_{j+1} - 2 u_j + u_{j-1}) / dx^2."""
    _need_ghosts(field, 1)
    dx = field.grid.dx
    return (_shift1(field, 1) - 2.0 * _shift1(field, 0) + _shift1(field, -1)) / dx**2


def gradient_upwind_1d(field: ScalarField1D, wind_sign: int) -> np.ndarray:
    """One-sided first difference biased into the wind."""
    _need_ghosts(field, 1)
    dx = field.grid.dx
    if wind_sign > 0:
        return (_shift1(field, 0) - _shift1(field, -1)) / dx
    return (_shift1(field, 1) - _shift1(field, 0)) / dx


def gradient_central_1d(field: ScalarField1D) -> np.ndarray:
    """(u_{j+1} - u_{j-1}) / 2 dx."""
    _need_ghosts(field, 1)
    dx = field.grid.dx
    return (_shift1(field, 1) - _shift1(field, -1)) / (2.0 * dx)


# weights of the fourth-order 7-point bilaplacian, offsets -3..3, scale 1/(6 dx^4)
BILAPLACIAN_O4_WEIGHTS = np.array([-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0])

# second-order 5-point bilaplacian, offsets -2..2, scale 1/dx^4
BILAPLACIAN_O2_WEIGHTS = np.array([1.0, -4.0, 6.0, -4.0, 1.0])


def bilaplacian_1d_o4(field: ScalarField1D) -> np.ndarray:
    """Fourth-order 7-point approximation of u_xxxx."""
    _need_ghosts(field, 3)
    dx = field.grid.dx
    acc = np.zeros(field.grid.n)
    for off, w in zip(range(-3, 4), BILAPLACIAN_O4_WEIGHTS[::-1]):
        acc += w * _shift1(field, off)
    return acc / (6.0 * dx**4)


def bilaplacian_1d_o2(field: ScalarField1D) -> np.ndarray:
    """Second-order 5-point approximation of u_xxxx."""
    _need_ghosts(field, 2)
    dx = field.grid.dx
    acc = np.zeros(field.grid.n)
    for off, w in zip(range(-2, 3), BILAPLACIAN_O2_WEIGHTS):
        acc += w * _shift1(field, off)
    return acc / dx**4


def _shift2(field, ox, oy):
    g = field.grid.ghost_width
    nx, ny = field.grid.nx, field.grid.ny
    return field.values[g + ox : g + ox + nx, g + oy : g + oy + ny]


def _need_isotropic(field):
    if abs(field.grid.dy - field.grid.dx) > 1e-14 * field.grid.dx:
        raise AnisotropicGridError("2D Laplacian stencils require dx == dy")


def laplacian_2d_5pt(field: ScalarField2D) -> np.ndarray:
    """Standard five-point Laplacian (dx == dy required)."""
    _need_ghosts(field, 1)
    _need_isotropic(field)
    dx = field.grid.dx
    return (
        _shift2(field, 1, 0)
        + _shift2(field, -1, 0)
        + _shift2(field, 0, 1)
        + _shift2(field, 0, -1)
        - 4.0 * _shift2(field, 0, 0)
    ) / dx**2


def laplacian_2d_9pt(field: ScalarField2D) -> np.ndarray:
    """Nine-point Laplacian with isotropic leading error (dx^2/12) * biharmonic."""
    _need_ghosts(field, 1)
    _need_isotropic(field)
    dx = field.grid.dx
    corners = (
        _shift2(field, 1, 1)
        + _shift2(field, 1, -1)
        + _shift2(field, -1, 1)
        + _shift2(field, -1, -1)
    )
    edges = (
        _shift2(field, 1, 0)
        + _shift2(field, -1, 0)
        + _shift2(field, 0, 1)
        + _shift2(field, 0, -1)
    )
    return (corners + 4.0 * edges - 20.0 * _shift2(field, 0, 0)) / (6.0 * dx**2)


def mixed_xy_upwind(field: ScalarField2D, wind_signs=(1, 1)) -> np.ndarray:
    """First-order approximation of u_xy biased into the wind in both axes."""
    _need_ghosts(field, 1)
    sx, sy = wind_signs
    sx = 1 if sx >= 0 else -1
    sy = 1 if sy >= 0 else -1
    dx, dy = field.grid.dx, field.grid.dy
    u = _shift2(field, 0, 0)
    ux = _shift2(field, -sx, 0)
    uy = _shift2(field, 0, -sy)
    uxy = _shift2(field, -sx, -sy)
    return (u - ux - uy + uxy) / (sx * sy * dx * dy)

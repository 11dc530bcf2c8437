"""Uniform grids with ghost layers and implicit (level-set) irregular domains.

Convention: grids are node-centered, so regular-domain boundary points
coincide with grid nodes.  A level-set value phi <= 0 marks a node as
interior (ties at phi == 0 count as interior).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateDomainError,
    NoSignChangeError,
    NotEnoughInteriorPointsError,
    UnresolvedBoundaryError,
)

# node kinds used by CellClassification
INTERIOR = 0
EDGE_GHOST = 1
CORNER_GHOST = 2
FAR_EXTERIOR = 3


@dataclass(frozen=True)
class UniformGrid1D:
    """Uniform 1D grid with `n` real nodes spanning [x_lo, x_hi]."""

    x_lo: float
    x_hi: float
    n: int
    ghost_width: int = 1

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least 2 grid nodes")
        if self.x_hi <= self.x_lo:
            raise ValueError("x_hi must exceed x_lo")
        if self.ghost_width < 0:
            raise ValueError("ghost_width must be nonnegative")

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / (self.n - 1)

    @property
    def total_points(self) -> int:
        return self.n + 2 * self.ghost_width

    def nodes(self, with_ghosts: bool = False) -> np.ndarray:
        """Node coordinates; with_ghosts includes the ghost layers."""
        if with_ghosts:
            j = np.arange(-self.ghost_width, self.n + self.ghost_width)
        else:
            j = np.arange(self.n)
        return self.x_lo + j * self.dx


@dataclass(frozen=True)
class UniformGrid2D:
    """Uniform 2D grid; dy/dx need not be 1 (advection uses dy = (Ay/Ax) dx)."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    nx: int
    ny: int
    ghost_width: int = 1

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("need at least 2 nodes per direction")
        if self.x_hi <= self.x_lo or self.y_hi <= self.y_lo:
            raise ValueError("degenerate bounding box")
        if self.ghost_width < 0:
            raise ValueError("ghost_width must be nonnegative")

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / (self.nx - 1)

    @property
    def dy(self) -> float:
        return (self.y_hi - self.y_lo) / (self.ny - 1)

    @property
    def spacing_ratio(self) -> float:
        return self.dy / self.dx

    def xy_nodes(self, with_ghosts: bool = False):
        """Meshgrid-style (X, Y) coordinate arrays indexed [i, j]."""
        g = self.ghost_width if with_ghosts else 0
        i = np.arange(-g, self.nx + g)
        j = np.arange(-g, self.ny + g)
        x = self.x_lo + i * self.dx
        y = self.y_lo + j * self.dy
        return np.meshgrid(x, y, indexing="ij")


@dataclass(frozen=True)
class ImplicitDomain:
    """Irregular domain given by a level-set function phi(x, y) < 0 inside."""

    phi: callable
    grid: UniformGrid2D


@dataclass
class EdgeGhost:
    """Exterior node connected to the interior across a grid edge."""

    index: tuple            # padded array index (i, j)
    axis: int               # 0 = x, 1 = y
    direction: int          # +1 / -1 step toward the interior along axis
    boundary: tuple         # (x, y) of the boundary point on the cut edge
    shifted: bool           # interpolation nodes moved one node inward
    interp_indices: list    # three collinear interior node indices
    weights: np.ndarray     # Lagrange weights: (w_boundary, w1, w2, w3)


@dataclass
class CornerGhost:
    """Exterior node whose only interior neighbor is diagonal."""

    index: tuple
    anchor: tuple           # nearest interior (diagonal) neighbor
    orientation: tuple      # (sx, sy): ghost = anchor + (sx, sy)
    stencil: list           # [((i, j), weight), ...] eight nodes


# extrapolation stencil for a corner ghost at offset (+1, +1) from its anchor,
# expressed as relative offsets from the anchor; weights sum to 1
_CORNER_STENCIL = (
    ((0, 0), -4.0),
    ((-1, -1), -1.0),
    ((1, 0), 2.0),
    ((0, 1), 2.0),
    ((1, -1), -1.0),
    ((-1, 1), -1.0),
    ((0, -1), 2.0),
    ((-1, 0), 2.0),
)

# how close (in units of dx) the boundary point may come to the nearest
# interpolation node before the node set is shifted one node inward
SHIFT_THRESHOLD = 0.5


@dataclass
class CellClassification:
    """Per-node classification plus precomputed ghost-fill geometry."""

    domain: ImplicitDomain
    kinds: np.ndarray               # (nx+2g, ny+2g) int array of node kinds
    edge_ghosts: list = field(default_factory=list)
    corner_ghosts: list = field(default_factory=list)

    @property
    def interior_mask(self) -> np.ndarray:
        return self.kinds == INTERIOR

    def counts(self) -> dict:
        return {
            "interior": int(np.count_nonzero(self.kinds == INTERIOR)),
            "edge_ghost": int(np.count_nonzero(self.kinds == EDGE_GHOST)),
            "corner_ghost": int(np.count_nonzero(self.kinds == CORNER_GHOST)),
            "far_exterior": int(np.count_nonzero(self.kinds == FAR_EXTERIOR)),
        }


def boundary_point(ghost_xy, neighbor_xy, phi):
    """Root of the linear interpolant of phi along the edge ghost -> neighbor.

    Raises NoSignChangeError if phi has the same sign at both nodes.
    """
    gx = np.asarray(ghost_xy, dtype=float)
    nx_ = np.asarray(neighbor_xy, dtype=float)
    pg = float(phi(*gx))
    pn = float(phi(*nx_))
    if pg * pn > 0.0 or pg == pn:
        raise NoSignChangeError(
            f"phi does not change sign between {tuple(gx)} and {tuple(nx_)}"
        )
    s = pg / (pg - pn)
    return gx + s * (nx_ - gx)


def _lagrange_weights(s_eval, s_nodes):
    """Weights of the Lagrange interpolant through s_nodes evaluated at s_eval."""
    s_nodes = np.asarray(s_nodes, dtype=float)
    w = np.empty(len(s_nodes))
    for k, sk in enumerate(s_nodes):
        others = np.delete(s_nodes, k)
        w[k] = np.prod((s_eval - others) / (sk - others))
    return w


def classify_cells(domain: ImplicitDomain) -> CellClassification:
    """Classify every node (including the ghost layer) of the bounding grid.

    Exterior nodes with an interior 4-neighbor become edge ghosts; exterior
    nodes whose only interior neighbors are diagonal become corner ghosts.
    Edge ghosts get precomputed cubic-extrapolation geometry, corner ghosts a
    precomputed 8-node Taylor extrapolation stencil.
    """
    g = domain.grid
    gw = g.ghost_width
    x_pad, y_pad = g.xy_nodes(with_ghosts=True)
    phi_vals = np.asarray(domain.phi(x_pad, y_pad), dtype=float)
    inside = phi_vals <= 0.0

    if not inside.any():
        raise DegenerateDomainError("no interior nodes at this resolution")

    ntx, nty = inside.shape
    kinds = np.full(inside.shape, FAR_EXTERIOR, dtype=np.int8)
    kinds[inside] = INTERIOR

    padded = np.zeros((ntx + 2, nty + 2), dtype=bool)
    padded[1:-1, 1:-1] = inside
    has_edge_nb = (
        padded[:-2, 1:-1] | padded[2:, 1:-1] | padded[1:-1, :-2] | padded[1:-1, 2:]
    )
    has_diag_nb = (
        padded[:-2, :-2] | padded[:-2, 2:] | padded[2:, :-2] | padded[2:, 2:]
    )
    kinds[~inside & has_edge_nb] = EDGE_GHOST
    kinds[~inside & ~has_edge_nb & has_diag_nb] = CORNER_GHOST

    cls = CellClassification(domain=domain, kinds=kinds)
    _check_interior_neighborhoods(kinds, gw)
    _build_edge_ghosts(cls, phi_vals, x_pad, y_pad)
    _build_corner_ghosts(cls)
    return cls


def _check_interior_neighborhoods(kinds, gw):
    """Every core interior node must have a full 9-point non-far neighborhood."""
    core = kinds[1:-1, 1:-1] if kinds.shape[0] > 2 else kinds
    interior = core == INTERIOR
    bad = np.zeros_like(interior)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            nb = kinds[1 + di : kinds.shape[0] - 1 + di, 1 + dj : kinds.shape[1] - 1 + dj]
            bad |= interior & (nb == FAR_EXTERIOR)
    if bad.any():
        raise UnresolvedBoundaryError(
            "interior node touches far-exterior; grid does not resolve the boundary"
        )


def _build_edge_ghosts(cls: CellClassification, phi_vals, x_pad, y_pad):
    g = cls.domain.grid
    kinds = cls.kinds
    dx, dy = g.dx, g.dy
    spacing = (dx, dy)
    ntx, nty = kinds.shape

    for i, j in zip(*np.nonzero(kinds == EDGE_GHOST)):
        candidates = []
        for axis, d in ((0, 1), (0, -1), (1, 1), (1, -1)):
            ni = i + d if axis == 0 else i
            nj = j + d if axis == 1 else j
            if 0 <= ni < ntx and 0 <= nj < nty and kinds[ni, nj] == INTERIOR:
                candidates.append((axis, d))
        ghost = None
        for axis, d in candidates:
            ghost = _make_edge_ghost(cls, phi_vals, x_pad, y_pad, (i, j), axis, d, spacing)
            if ghost is not None:
                break
        if ghost is None:
            raise NotEnoughInteriorPointsError(
                f"edge ghost at padded index ({i}, {j}) has no valid interior chain"
            )
        cls.edge_ghosts.append(ghost)


def _make_edge_ghost(cls, phi_vals, x_pad, y_pad, idx, axis, d, spacing):
    """Build one edge ghost; returns None if the interior chain is too short."""
    kinds = cls.kinds
    i, j = idx
    h = spacing[axis]

    def node(k):  # node k steps from the ghost toward the interior
        return (i + d * k, j) if axis == 0 else (i, j + d * k)

    def in_bounds(ij):
        return 0 <= ij[0] < kinds.shape[0] and 0 <= ij[1] < kinds.shape[1]

    # boundary point on the cut edge via the linear interpolant of phi
    nb = node(1)
    pg, pn = phi_vals[i, j], phi_vals[nb]
    if pg == pn:
        raise NoSignChangeError(f"flat phi along edge at {idx}")
    s_b = pg / (pg - pn)  # in (ghost=0, neighbor=1) units of h

    # distance from the boundary point to the nearest interpolation node
    shifted = (1.0 - s_b) < SHIFT_THRESHOLD
    offsets = (2, 3, 4) if shifted else (1, 2, 3)
    interp = [node(k) for k in offsets]
    if not all(in_bounds(p) and kinds[p] == INTERIOR for p in interp):
        if shifted:
            return None
        # fall back to the shifted set before giving up on this axis
        offsets = (2, 3, 4)
        interp = [node(k) for k in offsets]
        shifted = True
        if not all(in_bounds(p) and kinds[p] == INTERIOR for p in interp):
            return None

    s_nodes = [s_b] + [float(k) for k in offsets]
    weights = _lagrange_weights(0.0, s_nodes)

    bx = x_pad[i, j] + (x_pad[nb] - x_pad[i, j]) * s_b
    by = y_pad[i, j] + (y_pad[nb] - y_pad[i, j]) * s_b
    return EdgeGhost(
        index=(i, j),
        axis=axis,
        direction=d,
        boundary=(bx, by),
        shifted=shifted,
        interp_indices=interp,
        weights=weights,
    )


def _build_corner_ghosts(cls: CellClassification):
    kinds = cls.kinds
    ntx, nty = kinds.shape

    for i, j in zip(*np.nonzero(kinds == CORNER_GHOST)):
        placed = False
        for sx in (1, -1):
            for sy in (1, -1):
                ai, aj = i - sx, j - sy
                if not (0 <= ai < ntx and 0 <= aj < nty):
                    continue
                if kinds[ai, aj] != INTERIOR:
                    continue
                stencil = []
                ok = True
                for (a, b), w in _CORNER_STENCIL:
                    pi, pj = ai + a * sx, aj + b * sy
                    if not (0 <= pi < ntx and 0 <= pj < nty):
                        ok = False
                        break
                    if kinds[pi, pj] not in (INTERIOR, EDGE_GHOST):
                        ok = False
                        break
                    stencil.append(((pi, pj), w))
                if ok:
                    cls.corner_ghosts.append(
                        CornerGhost(
                            index=(i, j),
                            anchor=(ai, aj),
                            orientation=(sx, sy),
                            stencil=stencil,
                        )
                    )
                    placed = True
                    break
            if placed:
                break
        if not placed:
            raise NotEnoughInteriorPointsError(
                f"corner ghost at padded index ({i}, {j}) has no valid stencil"
            )

"""Grid construction and level-set cell classification."""

import numpy as np
import pytest

from otsfd.errors import (
    DegenerateDomainError,
    NoSignChangeError,
    NotEnoughInteriorPointsError,
)
from otsfd.grid import (
    CORNER_GHOST,
    EDGE_GHOST,
    FAR_EXTERIOR,
    INTERIOR,
    ImplicitDomain,
    UniformGrid1D,
    UniformGrid2D,
    _CORNER_STENCIL,
    boundary_point,
    classify_cells,
)


def circle(r):
    return lambda x, y: np.hypot(x, y) - r


def test_grid1d_spacing_and_storage():
    g = UniformGrid1D(0.0, 1.0, 11, ghost_width=2)
    assert g.dx == pytest.approx(0.1)
    assert g.total_points == 15
    nodes = g.nodes()
    assert nodes[0] == 0.0 and nodes[-1] == pytest.approx(1.0)
    padded = g.nodes(with_ghosts=True)
    assert padded.size == 15
    assert padded[2] == nodes[0]


def test_grid1d_validation():
    with pytest.raises(ValueError):
        UniformGrid1D(0.0, 1.0, 1)
    with pytest.raises(ValueError):
        UniformGrid1D(1.0, 0.0, 5)
    with pytest.raises(ValueError):
        UniformGrid1D(0.0, 1.0, 5, ghost_width=-1)


def test_grid2d_spacing_ratio():
    g = UniformGrid2D(0.0, 1.0, 0.0, 2.0, 11, 11)
    assert g.dx == pytest.approx(0.1)
    assert g.dy == pytest.approx(0.2)
    assert g.spacing_ratio == pytest.approx(2.0, rel=1e-14)
    x, y = g.xy_nodes()
    assert x.shape == (11, 11)
    assert x[3, 0] == pytest.approx(0.3) and y[0, 3] == pytest.approx(0.6)


def test_classify_all_interior():
    g = UniformGrid2D(-1.0, 1.0, -1.0, 1.0, 9, 9)
    cls = classify_cells(ImplicitDomain(lambda x, y: -1.0 + 0.0 * x, g))
    counts = cls.counts()
    assert counts["interior"] == 11 * 11      # includes the ghost pad
    assert counts["edge_ghost"] == 0
    assert counts["corner_ghost"] == 0
    assert not cls.edge_ghosts and not cls.corner_ghosts


def test_classify_half_plane_has_no_corners():
    g = UniformGrid2D(-1.0, 1.0, -1.0, 1.0, 21, 21)
    cls = classify_cells(ImplicitDomain(lambda x, y: x + 0.0 * y, g))
    counts = cls.counts()
    assert counts["corner_ghost"] == 0
    assert counts["edge_ghost"] > 0
    # the ghost layer is exactly the first positive-x column
    kinds = cls.kinds
    x, _ = g.xy_nodes(with_ghosts=True)
    assert np.all(kinds[x <= 0.0] == INTERIOR)
    first_pos = np.isclose(x, 0.1)
    assert np.all(kinds[first_pos] == EDGE_GHOST)


def test_phi_zero_counts_as_interior():
    g = UniformGrid2D(-1.0, 1.0, -1.0, 1.0, 21, 21)
    cls = classify_cells(ImplicitDomain(lambda x, y: x + 0.0 * y, g))
    x, _ = g.xy_nodes(with_ghosts=True)
    assert np.all(cls.kinds[np.isclose(x, 0.0)] == INTERIOR)


def starfish(x, y):
    r = np.hypot(x, y)
    theta = np.arctan2(y, x)
    return r - (0.5 + 0.15 * np.cos(5.0 * theta))


def brute_force_kinds(phi_vals):
    """Independent re-classification by direct neighbor enumeration."""
    inside = phi_vals <= 0.0
    ni, nj = inside.shape
    kinds = np.full(inside.shape, FAR_EXTERIOR, dtype=int)
    for i in range(ni):
        for j in range(nj):
            if inside[i, j]:
                kinds[i, j] = INTERIOR
                continue
            edge = diag = False
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    ii, jj = i + di, j + dj
                    if (di, dj) == (0, 0) or not (0 <= ii < ni and 0 <= jj < nj):
                        continue
                    if inside[ii, jj]:
                        if di == 0 or dj == 0:
                            edge = True
                        else:
                            diag = True
            if edge:
                kinds[i, j] = EDGE_GHOST
            elif diag:
                kinds[i, j] = CORNER_GHOST
    return kinds


def test_starfish_classification_against_brute_force():
    g = UniformGrid2D(-1.0, 1.0, -1.0, 1.0, 100, 100)
    cls = classify_cells(ImplicitDomain(starfish, g))
    counts = cls.counts()
    assert counts["edge_ghost"] > 0 and counts["corner_ghost"] > 0

    x, y = g.xy_nodes(with_ghosts=True)
    expect = brute_force_kinds(starfish(x, y))
    assert np.array_equal(np.asarray(cls.kinds, dtype=int), expect)

    # corner ghosts: nearest interior neighbor is diagonal; stencils well-formed
    for cg in cls.corner_ghosts:
        ai, aj = cg.anchor
        i, j = cg.index
        assert abs(ai - i) == 1 and abs(aj - j) == 1
        assert cls.kinds[ai, aj] == INTERIOR
        for (pi, pj), _ in cg.stencil:
            assert cls.kinds[pi, pj] in (INTERIOR, EDGE_GHOST)
    for eg in cls.edge_ghosts:
        assert len(eg.interp_indices) == 3
        for idx in eg.interp_indices:
            assert cls.kinds[idx] == INTERIOR


def test_classification_deterministic():
    g = UniformGrid2D(-1.0, 1.0, -1.0, 1.0, 60, 60)
    a = classify_cells(ImplicitDomain(starfish, g))
    b = classify_cells(ImplicitDomain(starfish, g))
    assert np.array_equal(a.kinds, b.kinds)
    assert [e.index for e in a.edge_ghosts] == [e.index for e in b.edge_ghosts]


def test_refinement_keeps_shared_interior_nodes():
    coarse = UniformGrid2D(-1.0, 1.0, -1.0, 1.0, 51, 51)
    fine = UniformGrid2D(-1.0, 1.0, -1.0, 1.0, 101, 101)
    ck = classify_cells(ImplicitDomain(circle(0.67), coarse)).kinds
    fk = classify_cells(ImplicitDomain(circle(0.67), fine)).kinds
    g = coarse.ghost_width
    for i in range(coarse.nx):
        for j in range(coarse.ny):
            if ck[g + i, g + j] == INTERIOR:
                assert fk[fine.ghost_width + 2 * i, fine.ghost_width + 2 * j] == INTERIOR


def test_degenerate_domain():
    g = UniformGrid2D(-1.0, 1.0, -1.0, 1.0, 11, 11)
    with pytest.raises(DegenerateDomainError):
        classify_cells(ImplicitDomain(lambda x, y: 1.0 + 0.0 * x, g))


def test_thin_domain_lacks_interp_chain():
    g = UniformGrid2D(-1.0, 1.0, -1.0, 1.0, 11, 11)
    with pytest.raises(NotEnoughInteriorPointsError):
        classify_cells(ImplicitDomain(lambda x, y: np.abs(y) - 0.01, g))


def test_boundary_point_linear_phi():
    phi = lambda x, y: x - 0.5
    pt = boundary_point((0.6, 0.0), (0.4, 0.0), phi)
    assert pt[0] == pytest.approx(0.5, abs=1e-14)

    phi2 = lambda x, y: 2 * x - 1.0
    pt2 = boundary_point((0.6, 0.0), (0.4, 0.0), phi2)
    assert pt2[0] == pytest.approx(0.5, abs=1e-14)


def test_boundary_point_quadratic_phi():
    # samples are +0.11 at 0.6 and -0.09 at 0.4; interpolant root at 0.49
    phi = lambda x, y: x**2 - 0.25
    pt = boundary_point((0.6, 0.0), (0.4, 0.0), phi)
    assert pt[0] == pytest.approx(0.49, abs=1e-14)


def test_boundary_point_no_sign_change():
    with pytest.raises(NoSignChangeError):
        boundary_point((0.6, 0.0), (0.4, 0.0), lambda x, y: x + 1.0)


def test_boundary_point_second_order_in_dx():
    # against a bisection oracle on phi along the edge
    from scipy.optimize import brentq

    phi = lambda x, y: x**2 + y**2 - 0.36
    errs = []
    for dx in (0.1, 0.05, 0.025):
        ghost = (0.6 + dx * 0.7, 0.0)
        inner = (0.6 - dx * 0.3, 0.0)
        pt = boundary_point(ghost, inner, phi)
        root = brentq(lambda s: phi(ghost[0] + s * (inner[0] - ghost[0]), 0.0), 0, 1)
        true_x = ghost[0] + root * (inner[0] - ghost[0])
        errs.append(abs(pt[0] - true_x))
    errs = np.array(errs)
    slopes = np.log(errs[:-1] / errs[1:]) / np.log(2.0)
    assert np.all(slopes > 1.6)


def test_corner_stencil_weight_algebra():
    # anchor at origin, corner at (1,1), unit spacing: exact for these monomials
    monomials = [
        lambda x, y: np.ones_like(x),
        lambda x, y: x,
        lambda x, y: y,
        lambda x, y: x * y,
        lambda x, y: x**2,
        lambda x, y: y**2,
        lambda x, y: x**2 * y,
        lambda x, y: x * y**2,
    ]
    assert sum(w for _, w in _CORNER_STENCIL) == pytest.approx(1.0)
    for u in monomials:
        est = sum(w * u(float(a), float(b)) for (a, b), w in _CORNER_STENCIL)
        assert est == pytest.approx(float(u(1.0, 1.0)), abs=1e-13)


def test_edge_ghost_shift_rule():
    # boundary point close to the first interior node forces the inward shift
    g = UniformGrid2D(-1.0, 1.0, -1.0, 1.0, 41, 41)
    cls = classify_cells(ImplicitDomain(circle(0.67), g))
    assert any(eg.shifted for eg in cls.edge_ghosts)
    for eg in cls.edge_ghosts:
        offsets = [eg.interp_indices[0][eg.axis] - eg.index[eg.axis],
                   eg.interp_indices[1][eg.axis] - eg.index[eg.axis]]
        start = abs(offsets[0])
        assert start == (2 if eg.shifted else 1)
        # weights reproduce a linear function along the fill axis
        h = g.dx if eg.axis == 0 else g.dy
        coords = [eg.boundary[eg.axis]] + [
            (g.xy_nodes(with_ghosts=True)[eg.axis])[idx] for idx in eg.interp_indices
        ]
        vals = np.array(coords)
        ghost_coord = (g.xy_nodes(with_ghosts=True)[eg.axis])[eg.index]
        assert float(eg.weights @ vals) == pytest.approx(ghost_coord, abs=1e-10)

"""Experiment registry: every convergence/timing study the package reproduces.

The registry is a data table; each entry names a scheme, its optimal-step
formula, default resolutions and final time, the default suboptimal policy,
and the per-variant acceptance band used by `reproduce-all`.
"""

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError
from .grid import ImplicitDomain, UniformGrid1D, UniformGrid2D, classify_cells
from .harness import (
    ConvergenceReport,
    linf_error,
    run_rows,
    tail_slope,
    write_csv,
)
from .ots import (
    OPTIMAL,
    LeadingError,
    SchemeDescriptor,
    StabilityBound,
    TimeStepPolicy,
    policy_dt,
    predicted_order,
)
from .solvers_1d import (
    SchemeVariant,
    advection_upwind_fe_step,
    burgers_fe_step,
    crank_nicolson_diffusion_step,
    crank_nicolson_parabolic4_step,
    diffusion_fe_step,
    dufort_frankel_step,
    integrate_one_level,
    integrate_two_level,
    kpy_first_step,
    parabolic4_fe_step,
    wave_kpy_step,
)
from .solvers_2d import (
    advection2d_step,
    crank_nicolson_2d_5pt_step,
    diffusion2d_9pt_step,
    integrate_irregular,
    integrate_one_level_2d,
)
from .sources import get_fixture
from .stencil import ScalarField1D

_TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# scheme descriptors

def advection_descriptor(A: float) -> SchemeDescriptor:
    a = abs(A)
    return SchemeDescriptor(
        name="advection-upwind-fe",
        leading_error=LeadingError(alpha=a / 2.0, beta=a**2 / 2.0, r=1, s=1,
                                   p=math.inf, q=math.inf),
        stability=StabilityBound(coefficient=1.0 / a, exponent=1.0),
        dt_formula="dx/|A|",
    )


def wave_descriptor(c: float) -> SchemeDescriptor:
    return SchemeDescriptor(
        name="wave-kpy",
        leading_error=LeadingError(alpha=c**2 / 12.0, beta=c**4 / 12.0,
                                   r=2, s=2, p=4, q=4),
        stability=StabilityBound(coefficient=1.0 / c, exponent=1.0),
        dt_formula="dx/c",
        two_level_history=True,
    )


def diffusion_fe_descriptor(D: float) -> SchemeDescriptor:
    return SchemeDescriptor(
        name="diffusion-fe",
        leading_error=LeadingError(alpha=1.0 / 12.0, beta=D / 2.0,
                                   r=2, s=1, p=4, q=2),
        stability=StabilityBound(coefficient=1.0 / (2.0 * D), exponent=2.0),
        dt_formula="dx^2/(6 D)",
    )


def dufort_frankel_descriptor(D: float) -> SchemeDescriptor:
    return SchemeDescriptor(
        name="dufort-frankel",
        leading_error=LeadingError(alpha=1.0 / 12.0, beta=D**2,
                                   r=4, s=2, p=6, q=2),
        stability=StabilityBound(coefficient=None),
        dt_formula="dx^2/(sqrt(12) D)",
        two_level_history=True,
    )


def burgers_descriptor(nu: float) -> SchemeDescriptor:
    return SchemeDescriptor(
        name="burgers-fe",
        leading_error=LeadingError(alpha=1.0 / 12.0, beta=nu / 2.0,
                                   r=2, s=1, p=4, q=2),
        stability=StabilityBound(coefficient=1.0 / (2.0 * nu), exponent=2.0),
        dt_formula="dx^2/(6 nu)",
    )


def parabolic4_descriptor(kappa: float) -> SchemeDescriptor:
    return SchemeDescriptor(
        name="parabolic4-fe",
        leading_error=LeadingError(alpha=7.0 / 240.0, beta=kappa / 2.0,
                                   r=4, s=1, p=6, q=2),
        stability=StabilityBound(coefficient=3.0 / (40.0 * kappa), exponent=4.0),
        dt_formula="7 dx^4/(120 kappa)",
    )


def diffusion_9pt_descriptor(D: float) -> SchemeDescriptor:
    return SchemeDescriptor(
        name="diffusion-2d-9pt-fe",
        leading_error=LeadingError(alpha=1.0 / 12.0, beta=D / 2.0,
                                   r=2, s=1, p=4, q=2),
        stability=StabilityBound(coefficient=3.0 / (8.0 * D), exponent=2.0),
        dt_formula="dx^2/(6 D)",
    )


# ---------------------------------------------------------------------------
# single-resolution runners (n -> (dx, dt, error))

def _run_advection_1d(exp, n, T, pol, nidc, fixture_name):
    fx = get_fixture(fixture_name or exp.default_fixture)
    A = fx.params["A"]
    grid = UniformGrid1D(0.0, 1.0, n, ghost_width=1)
    dt = policy_dt(pol, advection_descriptor(A), grid.dx)
    step = lambda f, h: advection_upwind_fe_step(f, A, h)
    final, t_end = integrate_one_level(grid, fx.exact.u, step, dt, T)
    return grid.dx, dt, linf_error(final.core, fx.exact.u(grid.nodes(), t_end))


def _run_wave(exp, n, T, pol, nidc, fixture_name, start=None):
    fx = get_fixture(fixture_name or exp.default_fixture)
    c = fx.params["c"]
    grid = UniformGrid1D(0.0, _TWO_PI, n, ghost_width=1)
    dt = policy_dt(pol, wave_descriptor(c), grid.dx)
    variant = SchemeVariant(ots=pol.variant == "optimal", nidc=nidc)
    if start is None:
        start = 5 if nidc else 3
    if start == "exact":
        first = lambda h: ScalarField1D.from_function(grid, fx.exact.u, t=h)
    else:
        first = lambda h: kpy_first_step(grid, fx.exact, fx.source, c, h, order=start)
    step = lambda prev, curr, h: wave_kpy_step(prev, curr, c, h, fx.source, variant)
    final, t_end = integrate_two_level(grid, fx.exact.u, first, step, dt, T)
    return grid.dx, dt, linf_error(final.core, fx.exact.u(grid.nodes(), t_end))


def _run_diffusion_fe(exp, n, T, pol, nidc, fixture_name):
    fx = get_fixture(fixture_name or exp.default_fixture)
    D = fx.params["D"]
    grid = UniformGrid1D(0.0, _TWO_PI, n, ghost_width=1)
    dt = policy_dt(pol, diffusion_fe_descriptor(D), grid.dx)
    variant = SchemeVariant(ots=pol.variant == "optimal", nidc=nidc)
    step = lambda f, h: diffusion_fe_step(f, D, h, fx.source, variant)
    final, t_end = integrate_one_level(grid, fx.exact.u, step, dt, T)
    return grid.dx, dt, linf_error(final.core, fx.exact.u(grid.nodes(), t_end))


def _run_dufort_frankel(exp, n, T, pol, nidc, fixture_name):
    fx = get_fixture(fixture_name or exp.default_fixture)
    D = fx.params["D"]
    grid = UniformGrid1D(0.0, _TWO_PI, n, ghost_width=1)
    dt = policy_dt(pol, dufort_frankel_descriptor(D), grid.dx)
    variant = SchemeVariant(ots=pol.variant == "optimal", nidc=nidc)
    first = lambda h: ScalarField1D.from_function(grid, fx.exact.u, t=h)
    step = lambda prev, curr, h: dufort_frankel_step(prev, curr, D, h, fx.source, variant)
    final, t_end = integrate_two_level(grid, fx.exact.u, first, step, dt, T)
    return grid.dx, dt, linf_error(final.core, fx.exact.u(grid.nodes(), t_end))


def _run_diffusion_cn(exp, n, T, pol, nidc, fixture_name):
    fx = get_fixture(fixture_name or exp.default_fixture)
    D = fx.params["D"]
    grid = UniformGrid1D(0.0, _TWO_PI, n, ghost_width=1)
    dt = policy_dt(pol, diffusion_fe_descriptor(D), grid.dx)
    x_pad = grid.nodes(with_ghosts=True)

    def step(f, h):
        t_new = f.time + h
        return crank_nicolson_diffusion_step(
            f, D, h, fx.source, fx.exact.u(x_pad, t_new), t_new
        )

    final, t_end = integrate_one_level(grid, fx.exact.u, step, dt, T)
    return grid.dx, dt, linf_error(final.core, fx.exact.u(grid.nodes(), t_end))


def _run_burgers(exp, n, T, pol, nidc, fixture_name):
    fx = get_fixture(fixture_name or exp.default_fixture)
    nu = fx.params["nu"]
    grid = UniformGrid1D(-1.0, 4.0, n, ghost_width=1)
    dt = policy_dt(pol, burgers_descriptor(nu), grid.dx)
    variant = SchemeVariant(ots=pol.variant == "optimal", nidc=nidc)
    step = lambda f, h: burgers_fe_step(f, nu, h, variant)
    guard = 10.0 * float(np.max(np.abs(fx.exact.u(grid.nodes(), 0.0))))
    final, t_end = integrate_one_level(grid, fx.exact.u, step, dt, T, norm_guard=guard)
    return grid.dx, dt, linf_error(final.core, fx.exact.u(grid.nodes(), t_end))


def _run_parabolic4(exp, n, T, pol, nidc, fixture_name):
    fx = get_fixture(fixture_name or exp.default_fixture)
    kappa = fx.params["kappa"]
    grid = UniformGrid1D(0.0, _TWO_PI, n, ghost_width=3)
    dt = policy_dt(pol, parabolic4_descriptor(kappa), grid.dx)
    variant = SchemeVariant(ots=pol.variant == "optimal", nidc=nidc)
    step = lambda f, h: parabolic4_fe_step(f, kappa, h, fx.source, variant)
    final, t_end = integrate_one_level(grid, fx.exact.u, step, dt, T)
    return grid.dx, dt, linf_error(final.core, fx.exact.u(grid.nodes(), t_end))


def _run_parabolic4_cn(exp, n, T, pol, nidc, fixture_name):
    fx = get_fixture(fixture_name or exp.default_fixture)
    kappa = fx.params["kappa"]
    grid = UniformGrid1D(0.0, _TWO_PI, n, ghost_width=3)
    dt = policy_dt(pol, parabolic4_descriptor(kappa), grid.dx)
    x_pad = grid.nodes(with_ghosts=True)

    def step(f, h):
        t_new = f.time + h
        return crank_nicolson_parabolic4_step(
            f, kappa, h, fx.source, fx.exact.u(x_pad, t_new), t_new, stencil_order=2
        )

    final, t_end = integrate_one_level(grid, fx.exact.u, step, dt, T)
    return grid.dx, dt, linf_error(final.core, fx.exact.u(grid.nodes(), t_end))


def _run_diffusion_2d(exp, n, T, pol, nidc, fixture_name):
    fx = get_fixture(fixture_name or exp.default_fixture)
    D = fx.params["D"]
    grid = UniformGrid2D(0.0, 1.0, 0.0, 1.0, n, n, ghost_width=1)
    dt = policy_dt(pol, diffusion_9pt_descriptor(D), grid.dx)
    variant = SchemeVariant(ots=pol.variant == "optimal", nidc=nidc)
    step = lambda f, h: diffusion2d_9pt_step(f, D, h, fx.source, variant)
    final, t_end = integrate_one_level_2d(grid, fx.exact.u, step, dt, T)
    x, y = grid.xy_nodes()
    return grid.dx, dt, linf_error(final.core, fx.exact.u(x, y, t_end))


def _run_diffusion_2d_cn(exp, n, T, pol, nidc, fixture_name):
    fx = get_fixture(fixture_name or exp.default_fixture)
    D = fx.params["D"]
    grid = UniformGrid2D(0.0, 1.0, 0.0, 1.0, n, n, ghost_width=1)
    dt = policy_dt(pol, diffusion_9pt_descriptor(D), grid.dx)

    def step(f, h):
        return crank_nicolson_2d_5pt_step(f, D, h, fx.source, fx.exact.u, f.time + h)

    final, t_end = integrate_one_level_2d(grid, fx.exact.u, step, dt, T)
    x, y = grid.xy_nodes()
    return grid.dx, dt, linf_error(final.core, fx.exact.u(x, y, t_end))


def starfish_phi(x, y):
    """Level set of a five-lobed star: r = 0.5 + 0.15 cos(5 theta)."""
    r = np.hypot(x, y)
    theta = np.arctan2(y, x)
    return r - (0.5 + 0.15 * np.cos(5.0 * theta))


def _starfish_solve(n, T, pol, nidc, fixture_name):
    fx = get_fixture(fixture_name or "diffusion2d-sine")
    D = fx.params["D"]
    grid = UniformGrid2D(-1.0, 1.0, -1.0, 1.0, n, n, ghost_width=1)
    cls = classify_cells(ImplicitDomain(starfish_phi, grid))
    dt = policy_dt(pol, diffusion_9pt_descriptor(D), grid.dx)
    variant = SchemeVariant(ots=pol.variant == "optimal", nidc=nidc)
    final, t_end = integrate_irregular(cls, fx.exact.u, fx.source, D, dt, T, variant)
    x, y = grid.xy_nodes(with_ghosts=True)
    exact = np.asarray(fx.exact.u(x, y, t_end), dtype=float)
    exact[~cls.interior_mask] = np.nan
    return grid, cls, final, exact, dt


def _run_starfish(exp, n, T, pol, nidc, fixture_name):
    grid, _, final, exact, dt = _starfish_solve(n, T, pol, nidc, fixture_name)
    return grid.dx, dt, linf_error(final.values, exact)


def starfish_error_locality(n=100, T=0.001, threshold=0.25, band=3.0):
    """Fraction of large-error interior nodes lying within band*dx of the
    boundary (errors above threshold * Linf count as large).

    Probed at an early time: boundary-sourced error diffuses a physical
    distance ~sqrt(D T) into the interior, so a late probe smears the very
    localization being measured."""
    grid, cls, final, exact, _ = _starfish_solve(n, T, OPTIMAL, True, None)
    err = np.abs(final.values - exact)
    mask = cls.interior_mask & np.isfinite(err)
    emax = float(np.max(err[mask]))
    large = mask & (err > threshold * emax)

    x, y = grid.xy_nodes(with_ghosts=True)
    h = 1e-6
    gx = (starfish_phi(x + h, y) - starfish_phi(x - h, y)) / (2 * h)
    gy = (starfish_phi(x, y + h) - starfish_phi(x, y - h)) / (2 * h)
    dist = np.abs(starfish_phi(x, y)) / np.hypot(gx, gy)
    near = dist <= band * grid.dx
    return float(np.count_nonzero(large & near) / max(1, np.count_nonzero(large)))


def _advection2d_exact(Ax, Ay, pulse):
    def u(x, y, t):
        return pulse(x - Ax * t, y - Ay * t)

    return u


def _run_advection_2d(exp, n, T, pol, nidc, fixture_name):
    from .sources import square_pulse_2d

    Ax, Ay = exp.params["A"]
    # dx an exact binary fraction (0.125) so the unit-CFL shift is bitwise exact
    hx = (n - 1) * 0.0625
    hy = (n - 1) * 0.0625 * abs(Ay / Ax)
    grid = UniformGrid2D(-hx, hx, -hy, hy, n, n, ghost_width=1)
    dt = policy_dt(pol, advection_descriptor(Ax), grid.dx)
    variant = SchemeVariant(ots=pol.variant == "optimal", nidc=nidc)
    u_exact = _advection2d_exact(Ax, Ay, square_pulse_2d())
    step = lambda f, h: advection2d_step(f, (Ax, Ay), h, variant)
    final, t_end = integrate_one_level_2d(grid, u_exact, step, dt, T)
    x, y = grid.xy_nodes()
    return grid.dx, dt, linf_error(final.core, u_exact(x, y, t_end))


# ---------------------------------------------------------------------------
# registry

@dataclass
class Experiment:
    name: str
    scheme: str
    runner: Callable
    default_ns: tuple
    default_T: float
    default_fixture: Optional[str]
    subopt_policy: TimeStepPolicy
    descriptor: Optional[Callable] = None      # () -> SchemeDescriptor
    kind: str = "convergence"                  # or "exactness"
    dt_formula: str = "-"
    ratio_rule: str = ""
    params: dict = dc_field(default_factory=dict)
    # reproduce-all runs: (label, policy, correction, check) where check is
    # ("order", lo, hi), ("error<=", tol), or ("error>=", floor)
    figure_runs: list = dc_field(default_factory=list)


REGISTRY = {}


def _register(exp: Experiment):
    REGISTRY[exp.name] = exp


_register(Experiment(
    name="advection-1d",
    scheme="advection-upwind-fe",
    runner=_run_advection_1d,
    default_ns=(50, 100, 200, 400),
    default_T=1.0,
    default_fixture="advection-sine",
    subopt_policy=TimeStepPolicy("fraction", fraction=0.5),
    descriptor=lambda: advection_descriptor(1.0),
    kind="exactness",
    dt_formula="dx/|A|",
    figure_runs=[
        ("ots", "ots", False, ("error<=", 1e-12)),
        ("subopt", "subopt", False, ("error>=", 1e-6)),
    ],
))

_register(Experiment(
    name="advection-1d-step",
    scheme="advection-upwind-fe",
    runner=_run_advection_1d,
    default_ns=(50, 100, 200, 400),
    default_T=1.0,
    default_fixture="advection-step",
    subopt_policy=TimeStepPolicy("fraction", fraction=0.5),
    descriptor=lambda: advection_descriptor(1.0),
    kind="exactness",
    dt_formula="dx/|A|",
    figure_runs=[("ots", "ots", False, ("error<=", 1e-12))],
))

_register(Experiment(
    name="wave-kpy",
    scheme="wave-kpy",
    runner=_run_wave,
    default_ns=(25, 50, 100, 200),
    default_T=1.0,
    default_fixture="wave-sine",
    subopt_policy=TimeStepPolicy("ratio", coefficient=0.5, exponent=1.0),
    descriptor=lambda: wave_descriptor(1.0),
    dt_formula="dx/c",
    figure_runs=[
        ("ots+nidc", "ots", True, ("order", 3.7, None)),
        ("subopt", "subopt", False, ("order", None, 2.3)),
    ],
))

_register(Experiment(
    name="diffusion-1d-fe",
    scheme="diffusion-fe",
    runner=_run_diffusion_fe,
    default_ns=(25, 50, 100, 200),
    default_T=0.1,
    default_fixture="diffusion-sine",
    subopt_policy=TimeStepPolicy("fraction", fraction=0.5),
    descriptor=lambda: diffusion_fe_descriptor(1.0),
    dt_formula="dx^2/(6 D)",
    figure_runs=[
        ("ots+nidc", "ots", True, ("order", 3.7, None)),
        ("ots", "ots", False, ("order", None, 2.3)),
        ("subopt", "subopt", False, ("order", None, 2.3)),
    ],
))

_register(Experiment(
    name="diffusion-1d-df",
    scheme="dufort-frankel",
    runner=_run_dufort_frankel,
    default_ns=(25, 50, 100, 200),
    default_T=0.1,
    default_fixture="diffusion-sine",
    subopt_policy=TimeStepPolicy("ratio", coefficient=0.25, exponent=2.0),
    descriptor=lambda: dufort_frankel_descriptor(1.0),
    dt_formula="dx^2/(sqrt(12) D)",
    figure_runs=[
        ("ots+nidc", "ots", True, ("order", 3.7, None)),
        ("subopt", "subopt", False, ("order", None, 2.3)),
    ],
))

_register(Experiment(
    name="diffusion-1d-cn",
    scheme="diffusion-cn",
    runner=_run_diffusion_cn,
    default_ns=(25, 50, 100, 200),
    default_T=0.1,
    default_fixture="diffusion-sine",
    subopt_policy=TimeStepPolicy("ratio", coefficient=1.0, exponent=1.0),
    figure_runs=[("cn", "subopt", False, ("order", 1.6, 2.4))],
))

_register(Experiment(
    name="burgers-1d",
    scheme="burgers-fe",
    runner=_run_burgers,
    default_ns=(50, 100, 200, 400),
    default_T=1.0,
    default_fixture="burgers-re10",
    subopt_policy=TimeStepPolicy("ratio", coefficient=2.5, exponent=2.0),  # dx^2/(4 nu)
    descriptor=lambda: burgers_descriptor(0.1),
    dt_formula="dx^2/(6 nu)",
    figure_runs=[
        ("ots+nidc", "ots", True, ("order", 3.6, None)),
        ("subopt", "subopt", False, ("order", None, 2.3)),
    ],
))

_register(Experiment(
    name="parabolic4-1d",
    scheme="parabolic4-fe",
    runner=_run_parabolic4,
    default_ns=(15, 30, 60, 120),
    default_T=0.02,
    default_fixture="parabolic4-sine",
    subopt_policy=TimeStepPolicy("fraction", fraction=0.5),
    descriptor=lambda: parabolic4_descriptor(1.0),
    dt_formula="7 dx^4/(120 kappa)",
    figure_runs=[
        ("ots+nidc", "ots", True, ("order", 5.5, None)),
        ("subopt", "subopt", False, ("order", 3.6, 4.4)),
    ],
))

_register(Experiment(
    name="parabolic4-1d-cn",
    scheme="parabolic4-cn2",
    runner=_run_parabolic4_cn,
    default_ns=(15, 30, 60, 120),
    default_T=0.02,
    default_fixture="parabolic4-sine",
    subopt_policy=TimeStepPolicy("ratio", coefficient=0.5, exponent=2.0),
    figure_runs=[("cn2", "subopt", False, ("order", None, 2.4))],
))

_register(Experiment(
    name="diffusion-2d",
    scheme="diffusion-2d-9pt-fe",
    runner=_run_diffusion_2d,
    default_ns=(20, 40, 80, 160),
    default_T=0.02,
    default_fixture="diffusion2d-sine",
    subopt_policy=TimeStepPolicy("fraction", fraction=0.5),
    descriptor=lambda: diffusion_9pt_descriptor(1.0),
    dt_formula="dx^2/(6 D)",
    figure_runs=[
        ("ots+nidc", "ots", True, ("order", 3.7, None)),
        ("subopt", "subopt", False, ("order", None, 2.3)),
    ],
))

_register(Experiment(
    name="diffusion-2d-cn",
    scheme="diffusion-2d-cn5",
    runner=_run_diffusion_2d_cn,
    default_ns=(20, 40, 80, 160),
    default_T=0.02,
    default_fixture="diffusion2d-sine",
    subopt_policy=TimeStepPolicy("ratio", coefficient=0.25, exponent=1.0),
    figure_runs=[("cn", "subopt", False, ("order", None, 2.3))],
))

_register(Experiment(
    name="diffusion-2d-starfish",
    scheme="diffusion-2d-9pt-fe-irregular",
    runner=_run_starfish,
    default_ns=(50, 100, 200, 400),
    default_T=0.005,
    default_fixture="diffusion2d-sine",
    subopt_policy=TimeStepPolicy("fraction", fraction=0.5),
    descriptor=lambda: diffusion_9pt_descriptor(1.0),
    dt_formula="dx^2/(6 D)",
    figure_runs=[
        ("ots+nidc", "ots", True, ("order", 3.5, None)),
        ("subopt", "subopt", False, ("order", None, 2.4)),
    ],
))

_register(Experiment(
    name="advection-2d",
    scheme="advection-2d-upwind-fe",
    runner=_run_advection_2d,
    default_ns=(100,),
    default_T=3.0,
    default_fixture=None,
    subopt_policy=TimeStepPolicy("ratio", coefficient=1.0 / 6.0, exponent=1.0),
    descriptor=lambda: advection_descriptor(1.0),
    kind="exactness",
    dt_formula="dx/|Ax|",
    ratio_rule="dy = (Ay/Ax) dx",
    params={"A": (-1.0, -2.0)},
    figure_runs=[
        ("ots+nidc", "ots", True, ("error<=", 1e-12)),
        ("subopt", "subopt", False, ("error>=", 0.3)),
    ],
))


def get_experiment(name: str) -> Experiment:
    try:
        return REGISTRY[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown experiment {name!r}; known: {', '.join(sorted(REGISTRY))}"
        )


def parse_policy(policy, exp: Experiment):
    """Resolve a policy spec ('ots', 'subopt', 'ratio=<c>:<p>') to a policy."""
    if isinstance(policy, TimeStepPolicy):
        return policy, policy.variant
    if policy == "ots":
        return OPTIMAL, "ots"
    if policy == "subopt":
        return exp.subopt_policy, "subopt"
    if isinstance(policy, str) and policy.startswith("ratio="):
        try:
            c, p = policy[len("ratio="):].split(":")
            return TimeStepPolicy("ratio", coefficient=float(c),
                                  exponent=float(p)), policy
        except ValueError:
            pass
    raise ConfigurationError(f"bad policy spec {policy!r}")


def run_experiment(name, ns=None, final_time=None, policy="ots",
                   correction=True, fixture=None, out_path=None, repeats=1):
    exp = get_experiment(name)
    ns = tuple(ns) if ns else exp.default_ns
    T = final_time if final_time is not None else exp.default_T
    pol, plabel = parse_policy(policy, exp)
    variant = plabel + ("+nidc" if correction else "")

    single = lambda n: exp.runner(exp, n, T, pol, correction, fixture)
    rows = run_rows(single, ns, repeats=repeats)
    report = ConvergenceReport(name, exp.scheme, variant, rows)
    if exp.kind != "exactness" and len(rows) >= 3:
        report.finalize()
    if pol.variant == "optimal":
        report.dt_over_dt_opt = 1.0
    if out_path:
        write_csv(out_path, name, [(exp.scheme, variant, r) for r in rows])
    return report


def run_wave_start_study(ns, start):
    """Wave convergence with optimal step + correction and a chosen start-up."""
    exp = get_experiment("wave-kpy")
    single = lambda n: _run_wave(exp, n, exp.default_T, OPTIMAL, True,
                                 None, start=start)
    rows = run_rows(single, ns)
    report = ConvergenceReport("wave-first-step", exp.scheme,
                               f"ots+nidc(start={start})", rows)
    return report.finalize()


# ---------------------------------------------------------------------------
# timing studies

@dataclass
class TimingSeries:
    scheme: str
    variant: str
    rows: list
    tail_slope: float
    expected_slope: float


@dataclass
class TimingReport:
    experiment: str
    series: list


# (scheme label, experiment, policy, correction, ns, expected runtime-vs-error
# tail slope); slopes are informative, ordering is what is asserted
TIMING = {
    "timing-diffusion-1d": [
        ("fe", "diffusion-1d-fe", "subopt", False, (50, 100, 200, 400, 800), -1.5),
        ("cn", "diffusion-1d-cn", "subopt", False,
         (100, 200, 400, 800, 1600, 3200), -1.0),
        ("fe-ots", "diffusion-1d-fe", "ots", True, (50, 100, 200, 400, 800), -0.75),
    ],
    "timing-parabolic4": [
        ("fe-ots", "parabolic4-1d", "ots", True, (15, 30, 60, 120), -5.0 / 6.0),
    ],
    "timing-diffusion-2d": [
        ("fe-ots", "diffusion-2d", "ots", True, (20, 40, 80), -1.0),
        ("cn", "diffusion-2d-cn", "subopt", False, (20, 40, 80, 160), -1.5),
    ],
}


def run_timing_experiment(name, repeats=3, out_path=None):
    if name not in TIMING:
        raise ConfigurationError(f"unknown timing experiment {name!r}")
    series = []
    entries = []
    for label, exp_name, policy, correction, ns, expected in TIMING[name]:
        rep = run_experiment(exp_name, ns=ns, policy=policy,
                             correction=correction, repeats=repeats)
        errs = [r.error_linf for r in rep.rows]
        times = [r.runtime_seconds for r in rep.rows]
        series.append(TimingSeries(
            scheme=label, variant=rep.variant, rows=rep.rows,
            tail_slope=tail_slope(errs, times), expected_slope=expected,
        ))
        entries.extend((label, rep.variant, r) for r in rep.rows)
    if out_path:
        write_csv(out_path, name, entries)
    return TimingReport(experiment=name, series=series)


def timing_dominates(report: TimingReport, fast="fe-ots", slow="cn"):
    """True if the `fast` series beats `slow` at the smallest common error.

    Both runtime-vs-error trends are fitted in log-log space and compared at
    the smallest error either series reached.
    """
    by = {s.scheme: s for s in report.series}
    fits = {}
    for key in (fast, slow):
        e = np.log([r.error_linf for r in by[key].rows])
        t = np.log([r.runtime_seconds for r in by[key].rows])
        fits[key] = np.polyfit(e, t, 1)
    e_star = min(
        min(math.log(r.error_linf) for r in by[fast].rows),
        min(math.log(r.error_linf) for r in by[slow].rows),
    )
    t_fast = np.polyval(fits[fast], e_star)
    t_slow = np.polyval(fits[slow], e_star)
    return bool(t_fast < t_slow)

"""Exact solutions, source terms, and the analytic derivative bundles that the
defect-correction terms consume.

Fixtures are built symbolically (sympy) from a closed-form solution, so every
derivative handed to a correction term is exact; nothing is approximated by
finite differences here.  A missing derivative is a configuration error and is
never silently treated as zero.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import sympy as sp

from .errors import MissingDerivativeError

_X, _Y, _T = sp.symbols("x y t")


def _lambdify(expr, args):
    fn = sp.lambdify(args, expr, modules=["scipy", "numpy"])

    def wrapped(*vals):
        out = fn(*vals)
        return np.broadcast_to(np.asarray(out, dtype=float), np.broadcast_shapes(
            *(np.shape(v) for v in vals)
        )).copy() if np.ndim(out) == 0 else np.asarray(out, dtype=float)

    return wrapped


@dataclass
class SourceModel:
    """Source term f with the analytic derivatives corrections may read."""

    f: Optional[Callable] = None
    f_t: Optional[Callable] = None
    f_xx: Optional[Callable] = None
    f_tt: Optional[Callable] = None
    f_xxxx: Optional[Callable] = None
    lap_f: Optional[Callable] = None

    def require(self, *names):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise MissingDerivativeError(
                f"source bundle lacks required derivative(s): {', '.join(missing)}"
            )


#: source model for a homogeneous PDE (f identically zero, all derivatives too)
def zero_source_1d() -> SourceModel:
    z = lambda x, t: np.zeros_like(np.asarray(x, dtype=float))
    return SourceModel(f=z, f_t=z, f_xx=z, f_tt=z, f_xxxx=z)


def zero_source_2d() -> SourceModel:
    z = lambda x, y, t: np.zeros_like(np.asarray(x, dtype=float))
    return SourceModel(f=z, f_t=z, lap_f=z)


@dataclass
class ExactSolution:
    """Closed-form solution with the derivatives needed for boundary seeding
    and high-order first steps."""

    u: Callable
    u_t: Optional[Callable] = None
    u_x: Optional[Callable] = None
    u_xx: Optional[Callable] = None
    u_xxxx: Optional[Callable] = None
    u_txx: Optional[Callable] = None
    u_tt: Optional[Callable] = None
    u_ttt: Optional[Callable] = None

    def require(self, *names):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise MissingDerivativeError(
                f"exact-solution bundle lacks: {', '.join(missing)}"
            )


@dataclass
class ExactSolution2D:
    u: Callable


@dataclass
class Fixture:
    """A matched (exact solution, source) pair for one experiment."""

    name: str
    exact: object
    source: SourceModel
    pde: str
    params: dict = field(default_factory=dict)


def manufactured(target_u, pde_tag: str, params: dict) -> Fixture:
    """Build (ExactSolution, SourceModel) with f = u_t - rhs(u) symbolically.

    pde_tag selects the right-hand side the source is manufactured against:
      "diffusion":    u_t = D u_xx + f
      "wave":         u_tt = c^2 u_xx + f
      "parabolic4":   u_t = -kappa u_xxxx + f
      "diffusion2d":  u_t = D (u_xx + u_yy) + f
    """
    u = sp.sympify(target_u)
    if pde_tag == "diffusion":
        f = sp.diff(u, _T) - params["D"] * sp.diff(u, _X, 2)
        return _fixture_1d(u, f, pde_tag, params)
    if pde_tag == "wave":
        f = sp.diff(u, _T, 2) - params["c"] ** 2 * sp.diff(u, _X, 2)
        return _fixture_1d(u, f, pde_tag, params)
    if pde_tag == "parabolic4":
        f = sp.diff(u, _T) + params["kappa"] * sp.diff(u, _X, 4)
        return _fixture_1d(u, f, pde_tag, params)
    if pde_tag == "diffusion2d":
        f = sp.diff(u, _T) - params["D"] * (sp.diff(u, _X, 2) + sp.diff(u, _Y, 2))
        return _fixture_2d(u, f, pde_tag, params)
    raise ValueError(f"unknown pde_tag {pde_tag!r}")


def _fixture_1d(u, f, pde_tag, params, name="manufactured"):
    args = (_X, _T)
    exact = ExactSolution(
        u=_lambdify(u, args),
        u_t=_lambdify(sp.diff(u, _T), args),
        u_x=_lambdify(sp.diff(u, _X), args),
        u_xx=_lambdify(sp.diff(u, _X, 2), args),
        u_xxxx=_lambdify(sp.diff(u, _X, 4), args),
        u_txx=_lambdify(sp.diff(u, _T, 1, _X, 2), args),
        u_tt=_lambdify(sp.diff(u, _T, 2), args),
        u_ttt=_lambdify(sp.diff(u, _T, 3), args),
    )
    source = SourceModel(
        f=_lambdify(f, args),
        f_t=_lambdify(sp.diff(f, _T), args),
        f_xx=_lambdify(sp.diff(f, _X, 2), args),
        f_tt=_lambdify(sp.diff(f, _T, 2), args),
        f_xxxx=_lambdify(sp.diff(f, _X, 4), args),
    )
    return Fixture(name=name, exact=exact, source=source, pde=pde_tag, params=params)


def _fixture_2d(u, f, pde_tag, params, name="manufactured-2d"):
    args = (_X, _Y, _T)
    exact = ExactSolution2D(u=_lambdify(u, args))
    source = SourceModel(
        f=_lambdify(f, args),
        f_t=_lambdify(sp.diff(f, _T), args),
        lap_f=_lambdify(sp.diff(f, _X, 2) + sp.diff(f, _Y, 2), args),
    )
    return Fixture(name=name, exact=exact, source=source, pde=pde_tag, params=params)


def burgers_exact(nu: float, gamma: float) -> Fixture:
    """Travelling viscous-shock solution of u_t + u u_x = nu u_xx.

    u(x,t) = 1 + gamma sqrt(nu / (pi T)) exp(-(x-T)^2 / 4 nu T)
                 / [1 + (gamma/2) erfc((x-T) / sqrt(4 nu T))],  T = t + 1,
    with wave speed 1; ln(1 + gamma) is the effective Reynolds number.
    """
    T = _T + 1
    z = (_X - T) / sp.sqrt(4 * nu * T)
    u = 1 + gamma * sp.sqrt(nu / (sp.pi * T)) * sp.exp(-((_X - T) ** 2) / (4 * nu * T)) / (
        1 + (gamma / 2) * sp.erfc(z)
    )
    args = (_X, _T)
    exact = ExactSolution(
        u=_lambdify(u, args),
        u_t=_lambdify(sp.diff(u, _T), args),
        u_x=_lambdify(sp.diff(u, _X), args),
        u_xx=_lambdify(sp.diff(u, _X, 2), args),
    )
    return Fixture(
        name="burgers-exact",
        exact=exact,
        source=zero_source_1d(),
        pde="burgers",
        params={"nu": nu, "gamma": gamma},
    )


def square_pulse_2d():
    """Indicator of the diamond |x| + |y| <= 2 (boundary included)."""

    def pulse(x, y):
        return np.where(np.abs(x) + np.abs(y) <= 2.0, 1.0, 0.0)

    return pulse


def pde_residual(fixture: Fixture, points, tol=None):
    """Max PDE residual |u_t - rhs(u)| of the exact solution at sample points.

    `points` is (x, t) arrays for 1D fixtures or (x, y, t) for 2D ones.
    """
    e, s, p = fixture.exact, fixture.source, fixture.params
    if fixture.pde == "diffusion":
        x, t = points
        r = e.u_t(x, t) - p["D"] * e.u_xx(x, t) - s.f(x, t)
    elif fixture.pde == "wave":
        x, t = points
        r = e.u_tt(x, t) - p["c"] ** 2 * e.u_xx(x, t) - s.f(x, t)
    elif fixture.pde == "parabolic4":
        x, t = points
        r = e.u_t(x, t) + p["kappa"] * e.u_xxxx(x, t) - s.f(x, t)
    elif fixture.pde == "burgers":
        x, t = points
        r = e.u_t(x, t) + e.u(x, t) * e.u_x(x, t) - p["nu"] * e.u_xx(x, t)
    elif fixture.pde == "diffusion2d":
        raise NotImplementedError("use sympy residual check in tests for 2D")
    else:
        raise ValueError(f"unknown pde {fixture.pde!r}")
    return float(np.max(np.abs(r)))


# ---------------------------------------------------------------------------
# named fixture registry (referenced from CLI experiment configs)

def _wave_sine(c=1.0):
    return manufactured(sp.sin(_X) * sp.cos(2 * _T), "wave", {"c": c})


def _diffusion_sine(D=1.0):
    return manufactured(sp.exp(-_T) * sp.sin(2 * _X), "diffusion", {"D": D})


def _parabolic4_sine(kappa=1.0):
    return manufactured(sp.exp(-_T) * sp.sin(2 * _X), "parabolic4", {"kappa": kappa})


def _burgers_re10(nu=0.1):
    return burgers_exact(nu=nu, gamma=float(np.expm1(10.0)))


def _diffusion2d_sine(D=1.0):
    return manufactured(
        sp.exp(-_T) * sp.sin(2 * _X) * sp.sin(_Y + sp.Rational(1, 2)),
        "diffusion2d",
        {"D": D},
    )


def _advection_sine():
    # pure advection: exact solution is the translated profile, no source
    def u(x, t):
        return np.sin(2 * np.pi * (x - t))

    return Fixture(
        name="advection-sine",
        exact=ExactSolution(u=u),
        source=zero_source_1d(),
        pde="advection",
        params={"A": 1.0},
    )


def _advection_step():
    def u(x, t):
        return np.where((x - t) % 1.0 < 0.5, 1.0, 0.0)

    return Fixture(
        name="advection-step",
        exact=ExactSolution(u=u),
        source=zero_source_1d(),
        pde="advection",
        params={"A": 1.0},
    )


FIXTURES = {
    "wave-sine": _wave_sine,
    "diffusion-sine": _diffusion_sine,
    "parabolic4-sine": _parabolic4_sine,
    "burgers-re10": _burgers_re10,
    "diffusion2d-sine": _diffusion2d_sine,
    "advection-sine": _advection_sine,
    "advection-step": _advection_step,
}


def get_fixture(name: str, **overrides) -> Fixture:
    try:
        builder = FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}")
    return builder(**overrides)

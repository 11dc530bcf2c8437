"""Leading-error polynomials, optimal time steps, and time-step policies.

The local error of a method-of-lines scheme carries a scalar factor
(alpha * dx^r - beta * dt^s) * dt multiplying a derivative of the solution.
Zeroing the bracket gives the optimal time step; the dt = 0 root is always
discarded.  alpha and beta are stored with shared factors divided out, so the
bracket's zero does not depend on them.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigurationError, NoPositiveRootError


@dataclass(frozen=True)
class LeadingError:
    """Coefficients and orders of the leading-error bracket.

    r is the leading spatial order and s the temporal exponent (local temporal
    error is order s+1); p > r and q >= s are the orders left once the leading
    bracket has been cancelled (q can equal s when a sub-leading term shares
    the temporal exponent, as for DuFort-Frankel's dt^2/dx^2 term).
    """

    alpha: float
    beta: float
    r: int
    s: int
    p: float
    q: float

    def __post_init__(self):
        if self.r <= 0 or self.s <= 0:
            raise ValueError("orders r, s must be positive")
        if self.p <= self.r or self.q < self.s:
            raise ValueError("post-elimination orders must not fall below r, s")

    def bracket(self, dx: float, dt: float) -> float:
        """Value of the leading-error polynomial (alpha dx^r - beta dt^s) dt."""
        return (self.alpha * dx**self.r - self.beta * dt**self.s) * dt


@dataclass(frozen=True)
class TimeStepPolicy:
    """How dt is derived from dx.

    variant "optimal": dt zeroes the leading-error bracket.
    variant "fraction": dt = fraction * (stability bound at dx).
    variant "ratio":    dt = coefficient * dx^exponent.
    """

    variant: str
    fraction: float = 0.5
    coefficient: float = 1.0
    exponent: float = 1.0

    def __post_init__(self):
        if self.variant not in ("optimal", "fraction", "ratio"):
            raise ValueError(f"unknown policy variant {self.variant!r}")
        if self.variant == "fraction" and not 0.0 < self.fraction <= 1.0:
            raise ValueError("fraction must lie in (0, 1]")
        if self.variant == "ratio" and self.coefficient <= 0.0:
            raise ValueError("ratio coefficient must be positive")


OPTIMAL = TimeStepPolicy("optimal")


@dataclass(frozen=True)
class StabilityBound:
    """dt_max = coefficient * dx^exponent (None coefficient: unconditional)."""

    coefficient: Optional[float]
    exponent: float = 0.0

    @property
    def unconditional(self) -> bool:
        return self.coefficient is None

    def dt_max(self, dx: float) -> float:
        if self.unconditional:
            return math.inf
        return self.coefficient * dx**self.exponent


@dataclass(frozen=True)
class SchemeDescriptor:
    """A scheme's leading error, stability bound, and dt_opt formula text."""

    name: str
    leading_error: LeadingError
    stability: StabilityBound
    dt_formula: str                 # human-readable dt_opt formula
    two_level_history: bool = False  # global error ~ local / dt^2 instead of / dt


def optimal_dt(le: LeadingError, dx: float) -> float:
    """Positive root of the leading-error bracket: (alpha/beta)^(1/s) dx^(r/s)."""
    if dx <= 0.0:
        raise ValueError("dx must be positive")
    ratio = le.alpha / le.beta
    if ratio <= 0.0:
        raise NoPositiveRootError(
            "alpha/beta <= 0: no positive optimal step; use a related scheme"
        )
    return ratio ** (1.0 / le.s) * dx ** (le.r / le.s)


def policy_dt(policy: TimeStepPolicy, descriptor: SchemeDescriptor, dx: float) -> float:
    """Time step implied by a policy for a given scheme at spacing dx."""
    if policy.variant == "optimal":
        return optimal_dt(descriptor.leading_error, dx)
    if policy.variant == "fraction":
        if descriptor.stability.unconditional:
            raise ConfigurationError(
                f"{descriptor.name}: fraction-of-stability policy needs a stability bound"
            )
        return policy.fraction * descriptor.stability.dt_max(dx)
    return policy.coefficient * dx**policy.exponent


def _policy_exponent(policy: TimeStepPolicy, descriptor: SchemeDescriptor) -> float:
    if policy.variant == "optimal":
        le = descriptor.leading_error
        return le.r / le.s
    if policy.variant == "fraction":
        return descriptor.stability.exponent
    return policy.exponent


def predicted_order(
    sd: SchemeDescriptor, with_ots: bool, policy: Optional[TimeStepPolicy] = None
) -> float:
    """Predicted global order of accuracy in dx.

    With the optimal step the global error is O(dx^min(p, r q / s)); otherwise
    the policy's dt(dx) relation is substituted into O(dx^r) + O(dt^s).
    """
    le = sd.leading_error
    if with_ots:
        return min(le.p, le.r * le.q / le.s)
    if policy is None:
        policy = TimeStepPolicy("fraction")
    m = _policy_exponent(policy, sd)
    return min(le.r, m * le.s)

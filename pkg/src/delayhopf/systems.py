"""The three benchmark oscillators with delayed self-feedback.

All systems have the form

    x'' + x = epsilon * f(x, x', x_d),    x_d = x(t - T),

with a different perturbation f per system:

    Duffing:          f = -alpha*x' - gamma*x^3 + k*x_d
    van der Pol:      f = x'*(1 - x^2) + k*x_d
    Erneux-Grasman:   f = x'*(1 - x^2) + k*x_d - k*x

This module provides the full nonlinear right-hand sides and the exact
characteristic function of the origin equilibrium of the unaveraged DDE,
whose imaginary-axis roots are the ground-truth Hopf points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple


class SystemKind(str, Enum):
    DUFFING = "duffing"
    VAN_DER_POL = "vdp"
    ERNEUX_GRASMAN = "erneux"


@dataclass(frozen=True)
class SystemSpec:
    """Oscillator choice plus its parameters.

    alpha (linear damping) and gamma (cubic stiffness) only act on the
    Duffing system; they are carried for all kinds so that one spec type
    serves the whole pipeline, and ignored elsewhere.
    """

    kind: SystemKind
    epsilon: float
    k: float
    alpha: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        for name in ("epsilon", "k", "alpha", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.kind == SystemKind.DUFFING and self.alpha < 0:
            raise ValueError("Duffing damping alpha must be nonnegative")


@dataclass(frozen=True)
class FullState:
    """Displacement, velocity and fast time of the unaveraged oscillator."""

    x: float
    v: float
    t: float = 0.0


class ResidualPair(NamedTuple):
    """Real and imaginary part of a characteristic function at lambda = i*omega."""

    re: float
    im: float

    def norm(self) -> float:
        return math.hypot(self.re, self.im)


def full_rhs(spec: SystemSpec, state: FullState, x_delayed: float) -> tuple[float, float]:
    """Right-hand side (dx/dt, dv/dt) of the full second-order system.

    The caller supplies the delayed displacement x_delayed = x(t - T); with
    no delay intended, pass state.x itself.
    """
    x, v = state.x, state.v
    if spec.kind == SystemKind.DUFFING:
        f = -spec.alpha * v - spec.gamma * x * x * x + spec.k * x_delayed
    elif spec.kind == SystemKind.VAN_DER_POL:
        f = v * (1.0 - x * x) + spec.k * x_delayed
    else:
        f = v * (1.0 - x * x) + spec.k * x_delayed - spec.k * x
    return v, -x + spec.epsilon * f


def linear_char_coeffs(spec: SystemSpec) -> tuple[float, float]:
    """Coefficients (c1, c0) of the linearized characteristic function.

    Linearizing the full system about the origin gives

        G(lambda) = lambda^2 + c1*lambda + c0 - epsilon*k*exp(-lambda*T)

    with c1 = epsilon*alpha (Duffing) or -epsilon (the self-excited kinds),
    and c0 = 1 except for Erneux-Grasman where the -k*x term stiffens the
    origin to c0 = 1 + epsilon*k.
    """
    if spec.kind == SystemKind.DUFFING:
        return spec.epsilon * spec.alpha, 1.0
    if spec.kind == SystemKind.VAN_DER_POL:
        return -spec.epsilon, 1.0
    return -spec.epsilon, 1.0 + spec.epsilon * spec.k


def exact_char_residual(spec: SystemSpec, omega: float, T: float) -> ResidualPair:
    """Exact characteristic function of the origin at lambda = i*omega.

    A zero of this residual is a Hopf bifurcation of the origin equilibrium
    of the original (unaveraged) DDE; these are the ground-truth curves the
    approximate methods are measured against.
    """
    c1, c0 = linear_char_coeffs(spec)
    ek = spec.epsilon * spec.k
    wt = omega * T
    re = c0 - omega * omega - ek * math.cos(wt)
    im = c1 * omega + ek * math.sin(wt)
    return ResidualPair(re, im)


def exact_char_jacobian(spec: SystemSpec, omega: float, T: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """Analytic Jacobian of exact_char_residual with respect to (omega, T)."""
    c1, _ = linear_char_coeffs(spec)
    ek = spec.epsilon * spec.k
    wt = omega * T
    s, c = math.sin(wt), math.cos(wt)
    return (
        (-2.0 * omega + ek * T * s, ek * omega * s),
        (c1 + ek * T * c, ek * omega * c),
    )

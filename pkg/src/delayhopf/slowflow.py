"""Slow-flow right-hand sides in Cartesian and polar coordinates.

Averaging the fast oscillation of x'' + x = epsilon*f over one period turns
each system into a slow flow for the envelope, either as (A, B) with
x ~ A(eta)*cos(t) + B(eta)*sin(t), or as (R, theta) with
x ~ R(eta)*cos(t - theta), where eta = epsilon*t is slow time.  The feedback
term carries the delayed envelope (A_d, B_d) = (A, B)(eta - epsilon*T), so
the slow flow is itself a DDE.

Cartesian forms, with s = sin(T), c = cos(T):

    Duffing:   dA = -alpha*A/2 + (3*gamma/8)*B*(A^2+B^2) - (k/2)*(A_d*s + B_d*c)
               dB = -alpha*B/2 - (3*gamma/8)*A*(A^2+B^2) - (k/2)*(B_d*s - A_d*c)
    vdP:       dA =  A/2 - A*(A^2+B^2)/8 - (k/2)*(A_d*s + B_d*c)
               dB =  B/2 - B*(A^2+B^2)/8 - (k/2)*(B_d*s - A_d*c)
    Erneux:    van der Pol plus the rotation +(k/2)*B in dA and -(k/2)*A in dB,
               the average of the extra -k*x forcing (a pure phase drift).

Every cubic Duffing coefficient is 3*gamma/8: this is what direct averaging
of the exact variation-of-parameters equations yields (see the averaging
oracle in the test suite), and it is the only choice for which the Cartesian
and polar forms are images of each other under (A, B) = (R cos theta,
R sin theta).  Tabulated versions of these flows sometimes carry a smaller
mixed-term coefficient and a 3*gamma/2 polar drift; both fail the oracle.

Substituting the undelayed state for the delayed one (pass ``now`` as
``delayed``) yields the reduced ODE slow flow used by the cruder of the two
analytic Hopf approaches; no separate formula is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PolarSingularityError
from .systems import SystemKind, SystemSpec

# Amplitudes below this are treated as the polar coordinate singularity.
TOLERANCE_R = 1e-8


@dataclass(frozen=True)
class PlaneState:
    """Cartesian envelope (A, B) at slow time eta."""

    A: float
    B: float
    eta: float = 0.0


@dataclass(frozen=True)
class PolarState:
    """Polar envelope (R, theta) at slow time eta; R must be nonnegative."""

    R: float
    theta: float
    eta: float = 0.0

    def __post_init__(self):
        if self.R < 0:
            raise ValueError("polar amplitude R must be nonnegative")

    def to_plane(self) -> PlaneState:
        return PlaneState(self.R * math.cos(self.theta), self.R * math.sin(self.theta), self.eta)


def cartesian_rhs(spec: SystemSpec, T: float, now: PlaneState, delayed: PlaneState) -> tuple[float, float]:
    """Slow-flow derivatives (dA/deta, dB/deta).

    ``delayed`` must be the envelope at eta - epsilon*T; passing ``now``
    itself gives the undelayed (ODE) variant.
    """
    A, B = now.A, now.B
    Ad, Bd = delayed.A, delayed.B
    s, c = math.sin(T), math.cos(T)
    half_k = 0.5 * spec.k
    feed_A = -half_k * (Ad * s + Bd * c)
    feed_B = -half_k * (Bd * s - Ad * c)
    if spec.kind == SystemKind.DUFFING:
        r2 = A * A + B * B
        cubic = 0.375 * spec.gamma * r2
        dA = -0.5 * spec.alpha * A + cubic * B + feed_A
        dB = -0.5 * spec.alpha * B - cubic * A + feed_B
        return dA, dB
    r2 = A * A + B * B
    dA = 0.5 * A - 0.125 * A * r2 + feed_A
    dB = 0.5 * B - 0.125 * B * r2 + feed_B
    if spec.kind == SystemKind.ERNEUX_GRASMAN:
        dA += half_k * B
        dB -= half_k * A
    return dA, dB


def linearized_cartesian_rhs(spec: SystemSpec, T: float, now: PlaneState, delayed: PlaneState) -> tuple[float, float]:
    """cartesian_rhs with the cubic terms dropped; exact for the origin analysis.

    gamma never appears here, so every Hopf condition downstream is
    gamma-independent.
    """
    A, B = now.A, now.B
    Ad, Bd = delayed.A, delayed.B
    s, c = math.sin(T), math.cos(T)
    half_k = 0.5 * spec.k
    feed_A = -half_k * (Ad * s + Bd * c)
    feed_B = -half_k * (Bd * s - Ad * c)
    if spec.kind == SystemKind.DUFFING:
        return -0.5 * spec.alpha * A + feed_A, -0.5 * spec.alpha * B + feed_B
    dA = 0.5 * A + feed_A
    dB = 0.5 * B + feed_B
    if spec.kind == SystemKind.ERNEUX_GRASMAN:
        dA += half_k * B
        dB -= half_k * A
    return dA, dB


def polar_rhs(spec: SystemSpec, T: float, now: PolarState, delayed: PolarState) -> tuple[float, float]:
    """Slow-flow derivatives (dR/deta, dtheta/deta).

    The Duffing form is evaluated directly:

        dR     = -alpha*R/2 - (k/2)*R_d*sin(theta_d - theta + T)
        dtheta = -(3*gamma/8)*R^2 + (k/2)*(R_d/R)*cos(theta_d - theta + T)

    The van der Pol and Erneux forms are obtained by the exact coordinate
    transform of cartesian_rhs rather than re-derived, which removes any
    independent transcription risk; the Duffing pair doubles as the
    consistency check between the two coordinate systems.
    """
    if now.R <= TOLERANCE_R:
        raise PolarSingularityError(f"polar slow flow undefined at R = {now.R!r} <= {TOLERANCE_R}")
    if spec.kind == SystemKind.DUFFING:
        phase = delayed.theta - now.theta + T
        dR = -0.5 * spec.alpha * now.R - 0.5 * spec.k * delayed.R * math.sin(phase)
        dtheta = -0.375 * spec.gamma * now.R * now.R + 0.5 * spec.k * (delayed.R / now.R) * math.cos(phase)
        return dR, dtheta
    plane_now = now.to_plane()
    plane_delayed = delayed.to_plane()
    dA, dB = cartesian_rhs(spec, T, plane_now, plane_delayed)
    A, B = plane_now.A, plane_now.B
    dR = (A * dA + B * dB) / now.R
    dtheta = (A * dB - B * dA) / (now.R * now.R)
    return dR, dtheta

"""Closed-form Hopf conditions for the slow flows.

Two analytic routes to the critical (k, T) pairs:

* Approach I replaces the delayed envelope by the undelayed one, reducing the
  slow flow to an ODE.  The trace condition of its origin linearization gives
  ``k*sin(T0) = -alpha`` (Duffing) or ``k*sin(T0) = 1`` (van der Pol and
  Erneux-Grasman), with two principal solutions T0 per system.

* Approach II keeps the delayed envelope.  Expanding the critical pair in
  powers of epsilon produces a geometric series in epsilon*omega0 which sums
  in closed form, giving critical delays T0 / (1 -+ epsilon*omega_cr) with

      omega_cr = sqrt(k^2 - alpha^2)/2          (Duffing)
      omega_cr = sqrt(k^2 - 1)/2                (van der Pol)
      omega_cr{1,2} = sqrt(k^2/2 - 1/4 -+ (k/2)*sqrt(k^2 - 1))   (Erneux)

  These summed forms are exact roots of the delayed slow-flow characteristic
  system (verified numerically in charsolve, not proved here).

Only the principal T0 branches are returned; the repeating +2*pi*n families
are reachable through the optional branch-index argument ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import NoHopfError, SeriesDivergenceError
from .systems import SystemKind, SystemSpec


class Branch(str, Enum):
    LOWER = "lower"
    UPPER = "upper"


class Method(str, Enum):
    APPROACH_I = "approach1"
    APPROACH_II = "approach2"
    EXACT_CHAR = "exact"
    SIMULATED = "simulated"


@dataclass(frozen=True)
class HopfPoint:
    """A critical pair (k, T) with its frequency, branch and provenance."""

    k: float
    T: float
    omega: float
    branch: Branch
    method: Method

    def __post_init__(self):
        if self.T < 0:
            raise ValueError("critical delay T must be nonnegative")
        if self.omega < 0:
            raise ValueError("critical frequency omega must be nonnegative")


@dataclass(frozen=True)
class ClosedFormBranch:
    """One summed-series branch: numerator T0, slow frequency, critical delay.

    ``denominator`` is T0/T, i.e. 1 -+ epsilon*omega; it equals the full
    oscillation frequency of the corresponding root of the exact
    characteristic function to leading order, which is what continuation
    uses as its frequency seed.
    """

    branch: Branch
    T0: float
    omega: float
    T: float
    denominator: float


# For Erneux-Grasman there are two closed-form frequencies and two delay
# numerators.  "aligned" pairs the smaller frequency with the smaller
# numerator, "crossed" pairs it with the larger one.  Exactly one pairing
# solves the slow-flow characteristic system; charsolve.erneux_pairing_report
# computes the evidence, and the default here is the crossed pairing so the
# discrepancy is surfaced by validation rather than edited away up front.
ERNEUX_PAIRING_CROSSED = "crossed"
ERNEUX_PAIRING_ALIGNED = "aligned"


def feedback_threshold(spec: SystemSpec) -> float:
    """Feedback magnitude below which no Hopf of the slow flow exists."""
    return spec.alpha if spec.kind == SystemKind.DUFFING else 1.0


def _require_hopf_region(spec: SystemSpec) -> None:
    """Reject k at or below threshold.

    At equality the critical frequency omega_cr vanishes for Duffing and
    van der Pol, making the Hopf non-generic, so equality is an error rather
    than a degenerate success.  The Erneux frequencies stay at 1/2 when
    k = 1 (only the branches coincide), so equality is allowed there.
    """
    thr = feedback_threshold(spec)
    if spec.kind == SystemKind.ERNEUX_GRASMAN:
        if spec.k < thr:
            raise NoHopfError(f"no Hopf for erneux with k = {spec.k} < 1")
        return
    if spec.k <= thr:
        raise NoHopfError(
            f"no Hopf for {spec.kind.value} with k = {spec.k} <= threshold {thr}"
        )


def approach1_delays(spec: SystemSpec, n: int = 0) -> tuple[float, float]:
    """Principal critical delays (T0_lower, T0_upper) of the undelayed reduction.

    Duffing: (pi - arcsin(-alpha/k), 2*pi + arcsin(-alpha/k)).
    van der Pol / Erneux: (arcsin(1/k), pi - arcsin(1/k)).
    ``n`` shifts both by 2*pi*n for the repeating branch families.
    """
    _require_hopf_region(spec)
    shift = 2.0 * math.pi * n
    if spec.kind == SystemKind.DUFFING:
        a = math.asin(-spec.alpha / spec.k)
        return math.pi - a + shift, 2.0 * math.pi + a + shift
    a = math.asin(1.0 / spec.k)
    return a + shift, math.pi - a + shift


def approach1_frequencies(spec: SystemSpec) -> tuple[float, float]:
    """Hopf frequencies of the undelayed reduction, (lower, upper) branch.

    Equal on both branches except for Erneux-Grasman, where the rotation
    terms split them into (k -+ sqrt(k^2 - 1))/2.
    """
    _require_hopf_region(spec)
    k = spec.k
    if spec.kind == SystemKind.DUFFING:
        w = math.sqrt(k * k - spec.alpha * spec.alpha) / 2.0
        return w, w
    if spec.kind == SystemKind.VAN_DER_POL:
        w = math.sqrt(k * k - 1.0) / 2.0
        return w, w
    root = math.sqrt(k * k - 1.0)
    return (k - root) / 2.0, (k + root) / 2.0


def approach1_points(spec: SystemSpec, n: int = 0) -> tuple[HopfPoint, HopfPoint]:
    """approach1_delays packaged as HopfPoints with per-branch frequencies."""
    lo, up = approach1_delays(spec, n)
    w_lo, w_up = approach1_frequencies(spec)
    return (
        HopfPoint(spec.k, lo, w_lo, Branch.LOWER, Method.APPROACH_I),
        HopfPoint(spec.k, up, w_up, Branch.UPPER, Method.APPROACH_I),
    )


def approach1_determinant(spec: SystemSpec, T: float) -> float:
    """Determinant of the undelayed origin linearization at delay T.

    The trace condition locates a Hopf only where this is positive; it is
    asserted for every returned T0 in the test suite.
    """
    k = spec.k
    s, c = math.sin(T), math.cos(T)
    if spec.kind == SystemKind.DUFFING:
        return (spec.alpha / 2.0 + (k / 2.0) * s) ** 2 + (k * k / 4.0) * c * c
    if spec.kind == SystemKind.VAN_DER_POL:
        return (0.5 - (k / 2.0) * s) ** 2 + (k * k / 4.0) * c * c
    return (0.5 - (k / 2.0) * s) ** 2 + (k / 2.0 - (k / 2.0) * c) ** 2


def approach2_omega(spec: SystemSpec):
    """Critical slow-flow frequency; a single float, or a pair for Erneux.

    Duffing sqrt(k^2 - alpha^2)/2, van der Pol sqrt(k^2 - 1)/2, Erneux the
    pair sqrt(k^2/2 - 1/4 -+ (k/2)*sqrt(k^2 - 1)).
    """
    _require_hopf_region(spec)
    k = spec.k
    if spec.kind == SystemKind.DUFFING:
        return math.sqrt(k * k - spec.alpha * spec.alpha) / 2.0
    if spec.kind == SystemKind.VAN_DER_POL:
        return math.sqrt(k * k - 1.0) / 2.0
    half_term = (k / 2.0) * math.sqrt(k * k - 1.0)
    base = k * k / 2.0 - 0.25
    return math.sqrt(base - half_term), math.sqrt(base + half_term)


def closed_form_branches(
    spec: SystemSpec,
    n: int = 0,
    erneux_pairing: str = ERNEUX_PAIRING_CROSSED,
    skip_divergent: bool = False,
) -> tuple[ClosedFormBranch, ...]:
    """Summed-series critical delays, labeled lower/upper by delay ordering.

    Branches whose geometric sum diverges (denominator 1 - epsilon*omega
    nonpositive) raise SeriesDivergenceError, or are silently omitted when
    ``skip_divergent`` is set (the sweep front ends count the omissions).
    """
    _require_hopf_region(spec)
    shift = 2.0 * math.pi * n
    eps = spec.epsilon
    forms: list[tuple[float, float, float]] = []  # (T0, omega, denominator)
    if spec.kind == SystemKind.DUFFING:
        w0 = approach2_omega(spec)
        a = math.asin(-spec.alpha / spec.k)
        forms.append((math.pi - a + shift, w0, 1.0 + eps * w0))
        forms.append((2.0 * math.pi + a + shift, w0, 1.0 - eps * w0))
    elif spec.kind == SystemKind.VAN_DER_POL:
        w0 = approach2_omega(spec)
        a = math.asin(1.0 / spec.k)
        forms.append((a + shift, w0, 1.0 - eps * w0))
        forms.append((math.pi - a + shift, w0, 1.0 + eps * w0))
    else:
        w1, w2 = approach2_omega(spec)
        a = math.asin(1.0 / spec.k)
        if erneux_pairing == ERNEUX_PAIRING_ALIGNED:
            forms.append((a + shift, w1, 1.0 + eps * w1))
            forms.append((math.pi - a + shift, w2, 1.0 + eps * w2))
        elif erneux_pairing == ERNEUX_PAIRING_CROSSED:
            forms.append((a + shift, w2, 1.0 + eps * w2))
            forms.append((math.pi - a + shift, w1, 1.0 + eps * w1))
        else:
            raise ValueError(f"unknown erneux_pairing {erneux_pairing!r}")
    kept: list[tuple[float, float, float]] = []
    for T0, w, denom in forms:
        if denom <= 0.0:
            if skip_divergent:
                continue
            raise SeriesDivergenceError(
                f"geometric delay series diverges: epsilon*omega = {eps * w} >= 1"
            )
        kept.append((T0, w, denom))
    kept.sort(key=lambda f: f[0] / f[2])
    labels = (Branch.LOWER, Branch.UPPER) if len(kept) == 2 else (Branch.LOWER,)
    return tuple(
        ClosedFormBranch(label, T0, w, T0 / denom, denom)
        for label, (T0, w, denom) in zip(labels, kept)
    )


def approach2_delays(
    spec: SystemSpec,
    n: int = 0,
    erneux_pairing: str = ERNEUX_PAIRING_CROSSED,
) -> tuple[HopfPoint, HopfPoint]:
    """Summed-series critical delays as HopfPoints, lower.T < upper.T."""
    branches = closed_form_branches(spec, n, erneux_pairing)
    return tuple(
        HopfPoint(spec.k, b.T, b.omega, b.branch, Method.APPROACH_II) for b in branches
    )


def series_partial_sum(T0: float, eps_omega: float, sign: int, N: int) -> float:
    """Partial sum T0 * sum_{j=0..N} (sign*eps_omega)^j of the delay series.

    Converges to T0 / (1 - sign*eps_omega) when |eps_omega| < 1, with
    remainder bounded by T0*|eps_omega|^(N+1)/(1-|eps_omega|).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if N < 0:
        raise ValueError("N must be nonnegative")
    q = sign * eps_omega
    total = 0.0
    power = 1.0
    for _ in range(N + 1):
        total += power
        power *= q
    return T0 * total

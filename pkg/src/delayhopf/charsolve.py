"""Characteristic residual systems and their continuation in one parameter.

The delayed slow flow, linearized about the origin with envelope modes
proportional to exp(lambda*eta), has a transcendental characteristic
determinant.  Setting lambda = i*omega and separating real and imaginary
parts yields two real equations in (omega, T); their zeros are the Hopf
points of the slow flow treated as a DDE.  The same recipe applied to the
original unaveraged DDE gives the exact ground-truth system.

Both systems are solved by damped Newton with an analytic Jacobian, and
curves in k or epsilon are traced by natural-parameter continuation with a
secant predictor, seeded from the closed forms of hopf_analytic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, NamedTuple

from .errors import (
    ContinuationSeedError,
    NewtonDivergenceError,
    NoHopfError,
    SeriesDivergenceError,
    SingularJacobianError,
)
from .hopf_analytic import (
    ERNEUX_PAIRING_ALIGNED,
    ERNEUX_PAIRING_CROSSED,
    Branch,
    ClosedFormBranch,
    HopfPoint,
    Method,
    closed_form_branches,
)
from .systems import ResidualPair, SystemKind, SystemSpec, exact_char_jacobian, exact_char_residual

NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 50
NEWTON_MAX_HALVINGS = 8
JACOBIAN_SINGULAR_DET = 1e-14


def _duffing_residual(alpha: float, k: float, eps: float, omega: float, T: float) -> ResidualPair:
    # Expanded determinant of the delayed slow-flow linearization, scaled by 16.
    st = math.sin(T)
    ewt = eps * omega * T
    s, c = math.sin(ewt), math.cos(ewt)
    s2, c2 = math.sin(2.0 * ewt), math.cos(2.0 * ewt)
    re = (
        4.0 * k * k * c2
        + 16.0 * k * omega * st * s
        + 8.0 * alpha * k * st * c
        - 16.0 * omega * omega
        + 4.0 * alpha * alpha
    )
    im = (
        -4.0 * k * k * s2
        - 8.0 * alpha * k * st * s
        + 16.0 * k * omega * st * c
        + 16.0 * alpha * omega
    )
    return ResidualPair(re, im)


def _vdp_residual(k: float, eps: float, omega: float, T: float) -> ResidualPair:
    # The k*omega*sin(eps*omega*T)*sin(T) term enters the real part with a
    # plus sign: that is what the determinant expansion gives, and the summed
    # series delays satisfy the system exactly only with this sign.
    st = math.sin(T)
    ewt = eps * omega * T
    s, c = math.sin(ewt), math.cos(ewt)
    re = (
        -(k / 2.0) * c * st
        + k * omega * s * st
        + (k * k / 4.0) * math.cos(2.0 * ewt)
        + 0.25
        - omega * omega
    )
    im = (
        k * omega * c * st
        + (k / 2.0) * s * st
        - (k * k / 4.0) * math.sin(2.0 * ewt)
        - omega
    )
    return ResidualPair(re, im)


def _erneux_residual(k: float, eps: float, omega: float, T: float) -> ResidualPair:
    # Determinant of the derived Erneux linearization (van der Pol terms plus
    # the +-k/2 rotation), expanded to real and imaginary parts.
    st, ct = math.sin(T), math.cos(T)
    ewt = eps * omega * T
    s, c = math.sin(ewt), math.cos(ewt)
    re1 = 0.5 - (k / 2.0) * c * st
    im1 = -omega + (k / 2.0) * s * st
    re2 = (k / 2.0) - (k / 2.0) * c * ct
    im2 = (k / 2.0) * s * ct
    return ResidualPair(
        re1 * re1 - im1 * im1 + re2 * re2 - im2 * im2,
        2.0 * (re1 * im1 + re2 * im2),
    )


def slowflow_char_residual(spec: SystemSpec, omega: float, T: float) -> ResidualPair:
    """Residual of the delayed slow-flow characteristic system at (omega, T).

    Zero residual means a Hopf bifurcation of the slow flow treated as a
    DDE.  The Duffing system carries its conventional factor-16 scaling.
    """
    if spec.kind == SystemKind.DUFFING:
        return _duffing_residual(spec.alpha, spec.k, spec.epsilon, omega, T)
    if spec.kind == SystemKind.VAN_DER_POL:
        return _vdp_residual(spec.k, spec.epsilon, omega, T)
    return _erneux_residual(spec.k, spec.epsilon, omega, T)


ResidualFn = Callable[[float, float], ResidualPair]
JacobianFn = Callable[[float, float], tuple[tuple[float, float], tuple[float, float]]]


@dataclass(frozen=True)
class CharSystem:
    """A 2x2 residual system with its analytic Jacobian."""

    residual: ResidualFn
    jacobian: JacobianFn


def _slowflow_complex(spec: SystemSpec, omega: float, T: float) -> tuple[complex, complex, complex]:
    """Determinant value and partials (F, dF/domega, dF/dT) in complex form.

    Algebraically identical to slowflow_char_residual (the tests pin the two
    paths together); the complex form is the convenient route to the exact
    Jacobian.
    """
    eps, k = spec.epsilon, spec.k
    st, ct = math.sin(T), math.cos(T)
    E = cmath.exp(-1j * eps * omega * T)
    E_w = -1j * eps * T * E
    E_T = -1j * eps * omega * E
    if spec.kind == SystemKind.ERNEUX_GRASMAN:
        z1 = -1j * omega + 0.5 - (k / 2.0) * E * st
        z2 = (k / 2.0) - (k / 2.0) * E * ct
        z1_w = -1j - (k / 2.0) * st * E_w
        z2_w = -(k / 2.0) * ct * E_w
        z1_T = -(k / 2.0) * (E_T * st + E * ct)
        z2_T = -(k / 2.0) * (E_T * ct - E * st)
        return (
            z1 * z1 + z2 * z2,
            2.0 * (z1 * z1_w + z2 * z2_w),
            2.0 * (z1 * z1_T + z2 * z2_T),
        )
    if spec.kind == SystemKind.DUFFING:
        base = -spec.alpha / 2.0
        scale = 16.0
    else:
        base = 0.5
        scale = 1.0
    z = -1j * omega + base - (k / 2.0) * E * st
    z_w = -1j - (k / 2.0) * st * E_w
    z_T = -(k / 2.0) * (E_T * st + E * ct)
    quarter = k * k / 4.0
    F = scale * (z * z + quarter * E * E * ct * ct)
    F_w = scale * (2.0 * z * z_w + quarter * ct * ct * 2.0 * E * E_w)
    F_T = scale * (2.0 * z * z_T + quarter * (2.0 * E * E_T * ct * ct - 2.0 * E * E * ct * st))
    return F, F_w, F_T


def slowflow_char_system(spec: SystemSpec) -> CharSystem:
    """Slow-flow characteristic system packaged for newton_solve."""

    def residual(omega: float, T: float) -> ResidualPair:
        return slowflow_char_residual(spec, omega, T)

    def jacobian(omega: float, T: float):
        _, F_w, F_T = _slowflow_complex(spec, omega, T)
        return ((F_w.real, F_T.real), (F_w.imag, F_T.imag))

    return CharSystem(residual, jacobian)


def exact_char_system(spec: SystemSpec) -> CharSystem:
    """Exact (unaveraged) characteristic system packaged for newton_solve."""

    def residual(omega: float, T: float) -> ResidualPair:
        return exact_char_residual(spec, omega, T)

    def jacobian(omega: float, T: float):
        return exact_char_jacobian(spec, omega, T)

    return CharSystem(residual, jacobian)


class NewtonResult(NamedTuple):
    omega: float
    T: float
    residual_norm: float
    iterations: int


def newton_solve(
    residual_fn: ResidualFn,
    jacobian_fn: JacobianFn,
    initial: tuple[float, float],
    max_iter: int = NEWTON_MAX_ITER,
    tol: float = NEWTON_TOL,
) -> NewtonResult:
    """Damped Newton on a 2x2 system.

    The full step is halved up to eight times until the residual norm
    decreases; nearby spurious roots of the trigonometric systems make an
    undamped step jump branches.  Raises SingularJacobianError when
    |det J| < 1e-14 and NewtonDivergenceError (carrying the last iterate)
    when no converging step exists or max_iter is exhausted.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    omega, T = initial
    if not (math.isfinite(omega) and math.isfinite(T)):
        raise ValueError("initial iterate must be finite")
    res = residual_fn(omega, T)
    rnorm = res.norm()
    iterations = 0
    while rnorm >= tol:
        if iterations >= max_iter:
            raise NewtonDivergenceError(
                f"no convergence after {max_iter} iterations (residual {rnorm:.3e})",
                omega, T, rnorm, iterations,
            )
        (j00, j01), (j10, j11) = jacobian_fn(omega, T)
        det = j00 * j11 - j01 * j10
        if not math.isfinite(det) or abs(det) < JACOBIAN_SINGULAR_DET:
            raise SingularJacobianError(
                f"Jacobian singular at (omega={omega}, T={T}): det = {det}"
            )
        step_w = (-res.re * j11 + res.im * j01) / det
        step_T = (-res.im * j00 + res.re * j10) / det
        scale = 1.0
        accepted = False
        for _ in range(NEWTON_MAX_HALVINGS + 1):
            trial_w = omega + scale * step_w
            trial_T = T + scale * step_T
            trial_res = residual_fn(trial_w, trial_T)
            trial_norm = trial_res.norm()
            if math.isfinite(trial_norm) and trial_norm < rnorm:
                accepted = True
                break
            scale *= 0.5
        if not accepted:
            raise NewtonDivergenceError(
                f"damped step stalled at (omega={omega}, T={T}) with residual {rnorm:.3e}",
                omega, T, rnorm, iterations,
            )
        omega, T = trial_w, trial_T
        res, rnorm = trial_res, trial_norm
        iterations += 1
    # polish: one or two undamped steps ride quadratic convergence from
    # just-converged down to the rounding floor, which matters where a small
    # Jacobian makes the tol-level residual translate into a sloppy root;
    # steps are kept only while they strictly reduce the residual
    for _ in range(2):
        (j00, j01), (j10, j11) = jacobian_fn(omega, T)
        det = j00 * j11 - j01 * j10
        if not math.isfinite(det) or abs(det) < JACOBIAN_SINGULAR_DET:
            break
        trial_w = omega + (-res.re * j11 + res.im * j01) / det
        trial_T = T + (-res.im * j00 + res.re * j10) / det
        trial_res = residual_fn(trial_w, trial_T)
        trial_norm = trial_res.norm()
        if not (math.isfinite(trial_norm) and trial_norm < rnorm):
            break
        omega, T = trial_w, trial_T
        res, rnorm = trial_res, trial_norm
        iterations += 1
    return NewtonResult(omega, T, rnorm, iterations)


class CurveTarget(str, Enum):
    SLOW_FLOW = "slowflow"
    EXACT_CHAR = "exact"


@dataclass(frozen=True)
class SweepPlan:
    """One-parameter grid for continuation: parameter name, range, point count."""

    parameter: str  # "k" or "epsilon"
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.parameter not in ("k", "epsilon"):
            raise ValueError("sweep parameter must be 'k' or 'epsilon'")
        if self.steps < 1:
            raise ValueError("steps must be at least 1")

    def values(self) -> list[float]:
        if self.steps == 1:
            return [self.start]
        h = (self.stop - self.start) / (self.steps - 1)
        return [self.start + i * h for i in range(self.steps)]


@dataclass(frozen=True)
class CurvePoint:
    """One accepted continuation root with its convergence certificate."""

    sweep_value: float
    point: HopfPoint
    residual_norm: float
    iterations: int


@dataclass(frozen=True)
class SweepResult:
    """Continuation output; ``truncated`` flags a mid-sweep divergence.

    Points stop at the first failure rather than skipping over it, so a
    truncated curve never hides an interior gap.
    """

    points: tuple[CurvePoint, ...]
    truncated: bool
    reason: str | None = None


def _seed_from_closed_form(form: ClosedFormBranch, target: CurveTarget) -> tuple[float, float]:
    # For the exact system the relevant frequency is the full oscillation
    # frequency, which to leading order is the series denominator 1 -+
    # epsilon*omega rather than the slow frequency itself.
    if target == CurveTarget.SLOW_FLOW:
        return form.omega, form.T
    return form.denominator, form.T


def continuation_sweep(
    template: SystemSpec,
    plan: SweepPlan,
    branch: Branch,
    target: CurveTarget,
    tol: float = NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
) -> SweepResult:
    """Trace one Hopf branch across the parameter grid.

    Natural-parameter continuation: each grid value is solved by damped
    Newton seeded from the previous root (secant prediction once two points
    exist); the first value is seeded from the closed forms.  Branch
    identity is therefore carried by seed continuity, not by classifying
    roots.  Erneux seeds use the aligned frequency pairing, whose values lie
    next to the true roots; what the sweep emits is whatever the residual
    system certifies.
    """
    method = Method.APPROACH_II if target == CurveTarget.SLOW_FLOW else Method.EXACT_CHAR
    values = plan.values()

    first_spec = replace(template, **{plan.parameter: values[0]})
    try:
        forms = {
            f.branch: f
            for f in closed_form_branches(first_spec, erneux_pairing=ERNEUX_PAIRING_ALIGNED)
        }
        seed = _seed_from_closed_form(forms[branch], target)
    except (NoHopfError, SeriesDivergenceError, KeyError) as exc:
        raise ContinuationSeedError(
            f"no closed-form seed at {plan.parameter} = {values[0]}: {exc}"
        ) from exc

    points: list[CurvePoint] = []
    prev: tuple[float, float, float] | None = None  # (value, omega, T)
    prev2: tuple[float, float, float] | None = None
    for value in values:
        spec = replace(template, **{plan.parameter: value})
        system = (
            slowflow_char_system(spec)
            if target == CurveTarget.SLOW_FLOW
            else exact_char_system(spec)
        )
        if prev is not None and prev2 is not None and prev[0] != prev2[0]:
            ratio = (value - prev[0]) / (prev[0] - prev2[0])
            seed = (
                prev[1] + ratio * (prev[1] - prev2[1]),
                prev[2] + ratio * (prev[2] - prev2[2]),
            )
        elif prev is not None:
            seed = (prev[1], prev[2])
        try:
            sol = newton_solve(system.residual, system.jacobian, seed, max_iter, tol)
        except (NewtonDivergenceError, SingularJacobianError) as exc:
            if not points:
                raise ContinuationSeedError(
                    f"first sweep point failed at {plan.parameter} = {value}: {exc}"
                ) from exc
            return SweepResult(
                tuple(points), True,
                f"diverged at {plan.parameter} = {value}: {exc}",
            )
        if sol.omega <= 0.0 or sol.T < 0.0:
            msg = (
                f"root left the physical sheet at {plan.parameter} = {value}: "
                f"omega = {sol.omega}, T = {sol.T}"
            )
            if not points:
                raise ContinuationSeedError(msg)
            return SweepResult(tuple(points), True, msg)
        hopf = HopfPoint(spec.k, sol.T, sol.omega, branch, method)
        points.append(CurvePoint(value, hopf, sol.residual_norm, sol.iterations))
        prev2, prev = prev, (value, sol.omega, sol.T)
    return SweepResult(tuple(points), False)


@dataclass(frozen=True)
class PairingEvidence:
    """Residual evidence for one delay branch under both Erneux pairings."""

    branch: Branch
    T0: float
    omega_crossed: float
    T_crossed: float
    residual_crossed: float
    omega_aligned: float
    T_aligned: float
    residual_aligned: float

    def exact_pairing(self, tol: float = 1e-6) -> str:
        crossed_ok = self.residual_crossed < tol
        aligned_ok = self.residual_aligned < tol
        if crossed_ok and aligned_ok:
            return "both"
        if crossed_ok:
            return ERNEUX_PAIRING_CROSSED
        if aligned_ok:
            return ERNEUX_PAIRING_ALIGNED
        return "neither"


@dataclass(frozen=True)
class ErneuxPairingReport:
    """Which association of Erneux frequencies with delay numerators is exact.

    The two closed-form frequencies can be attached to the two delay
    numerators in two ways; only one association can solve the slow-flow
    characteristic system.  This report carries the residuals of both so a
    discrepancy is surfaced as structured evidence instead of being patched
    away quietly.
    """

    epsilon: float
    k: float
    entries: tuple[PairingEvidence, ...]

    def discrepant_branches(self, tol: float = 1e-6) -> list[Branch]:
        return [e.branch for e in self.entries if e.residual_crossed >= tol]

    def lines(self, tol: float = 1e-6) -> list[str]:
        out = []
        for e in self.entries:
            out.append(
                f"erneux pairing branch={e.branch.value} k={self.k:.17g} "
                f"epsilon={self.epsilon:.17g} "
                f"crossed: omega={e.omega_crossed:.17g} T={e.T_crossed:.17g} "
                f"residual={e.residual_crossed:.3e} "
                f"aligned: omega={e.omega_aligned:.17g} T={e.T_aligned:.17g} "
                f"residual={e.residual_aligned:.3e} exact={e.exact_pairing(tol)}"
            )
        return out


def erneux_pairing_report(epsilon: float, k: float) -> ErneuxPairingReport:
    """Evaluate both Erneux frequency/delay pairings against the residual system."""
    spec = SystemSpec(SystemKind.ERNEUX_GRASMAN, epsilon=epsilon, k=k)
    crossed = {f.branch: f for f in closed_form_branches(spec, erneux_pairing=ERNEUX_PAIRING_CROSSED)}
    aligned = {f.branch: f for f in closed_form_branches(spec, erneux_pairing=ERNEUX_PAIRING_ALIGNED)}
    entries = []
    for branch in (Branch.LOWER, Branch.UPPER):
        fc, fa = crossed[branch], aligned[branch]
        entries.append(
            PairingEvidence(
                branch=branch,
                T0=fa.T0,
                omega_crossed=fc.omega,
                T_crossed=fc.T,
                residual_crossed=slowflow_char_residual(spec, fc.omega, fc.T).norm(),
                omega_aligned=fa.omega,
                T_aligned=fa.T,
                residual_aligned=slowflow_char_residual(spec, fa.omega, fa.T).norm(),
            )
        )
    return ErneuxPairingReport(epsilon, k, tuple(entries))

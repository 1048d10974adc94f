"""Direct integration of the delayed oscillators and of their slow flows.

Method of steps with classic fourth-order Runge-Kutta: the delayed value at
each stage time is read from the stored solution history through cubic
Hermite interpolation (values and derivatives at the step endpoints).  The
effective step is capped at T/4 so stage lookups never touch the current,
incomplete step.  T = 0 degenerates to plain ODE stepping with the delayed
value replaced by the current one.

On top of the integrator: long-run classification of trajectories into
decay / limit cycle / growth, and bisection in T for the simulated Hopf
boundary (detected as the origin-stability boundary, which stays robust
near subcritical scenarios and near the singular region where the origin
stops being a center-like equilibrium).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np
from scipy.signal import argrelextrema

from .errors import (
    AmbiguousClassificationError,
    InsufficientDataError,
    NoCrossingError,
    NoHopfError,
    SeriesDivergenceError,
)
from .hopf_analytic import (
    ERNEUX_PAIRING_ALIGNED,
    Branch,
    HopfPoint,
    Method,
    approach2_delays,
)
from .slowflow import PlaneState, cartesian_rhs
from .systems import SystemKind, SystemSpec

# State magnitudes beyond this are treated like non-finite values: the run is
# truncated with the overflow flag before inf/nan can pollute the samples.
OVERFLOW_LIMIT = 1e12

DEFAULT_X0 = 0.1
DEFAULT_DT = 0.05


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled (t, x, v) with the run's metadata.

    Sample count is floor(t_end/dt) + 1 unless the run overflowed, in which
    case the samples stop at the last finite state and ``overflow`` is set.
    """

    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    spec: SystemSpec
    delay: float
    dt: float
    history_description: str
    overflow: bool = False

    def write_csv(self, path) -> None:
        """Serialize as CSV with header t,x,v at full double precision."""
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("t,x,v\n")
            for t, x, v in zip(self.t, self.x, self.v):
                fh.write(f"{t:.17g},{x:.17g},{v:.17g}\n")


@dataclass(frozen=True)
class SlowFlowTrajectory:
    """Envelope trajectory (eta, A, B) of the slow flow."""

    eta: np.ndarray
    A: np.ndarray
    B: np.ndarray
    spec: SystemSpec
    delay: float
    dt_eta: float
    undelayed: bool = False
    overflow: bool = False

    def amplitude(self) -> np.ndarray:
        return np.hypot(self.A, self.B)


class LongRunKind(str, Enum):
    DECAY = "decay"
    LIMIT_CYCLE = "limit_cycle"
    GROWTH = "growth"


@dataclass(frozen=True)
class LongRunClass:
    kind: LongRunKind
    amplitude: float | None = None

    def __post_init__(self):
        if self.kind == LongRunKind.LIMIT_CYCLE:
            if self.amplitude is None or self.amplitude <= 0:
                raise ValueError("limit cycle classification requires a positive amplitude")


@dataclass(frozen=True)
class ClassifyTolerances:
    """Thresholds for long-run classification.

    decay_floor: tail amplitudes below this count as settled at the origin.
    plateau_rtol: relative envelope spread accepted as a steady limit cycle.
    trend_band: minimum |log envelope change| across the tail to call a
        direction; smaller changes are a plateau or ambiguous.
    min_extrema: least number of tail oscillation extrema for a verdict.
    """

    decay_floor: float = 0.02
    plateau_rtol: float = 0.02
    trend_band: float = 0.1
    min_extrema: int = 10


def _substeps(dt: float, delay: float) -> tuple[int, float]:
    """Substep count and size honoring the min(dt, T/4) cap."""
    if delay <= 0.0:
        return 1, dt
    cap = delay / 4.0
    if dt <= cap:
        return 1, dt
    nsub = int(math.ceil(dt / cap - 1e-12))
    return nsub, dt / nsub


class HistoryBuffer:
    """Stored (t, state, derivative) samples with cubic Hermite interpolation.

    Samples are appended in strictly increasing time; queries are answered
    from the two bracketing samples using the stored derivatives, so the
    interpolant reproduces stored values exactly at the nodes.  Times at or
    before the start fall through to the prescribed history function.
    Queries must lie in [t_start - max_delay, t_now]; a moving cursor makes
    the (monotone) stage lookups O(1) amortized.
    """

    def __init__(self, history_fn: Callable[[float], tuple[float, float]], t_start: float = 0.0):
        self._history_fn = history_fn
        self.t_start = t_start
        self.times: list[float] = []
        self.states: list[tuple[float, float]] = []
        self.derivs: list[tuple[float, float]] = []
        self._cursor = 0

    def append(self, t: float, state: tuple[float, float], deriv: tuple[float, float]) -> None:
        if self.times and t <= self.times[-1]:
            raise ValueError("history samples must be strictly increasing in t")
        self.times.append(t)
        self.states.append(state)
        self.derivs.append(deriv)

    def value(self, t: float) -> tuple[float, float]:
        if t < self.t_start:
            return self._history_fn(t)
        times = self.times
        if t > times[-1]:
            raise ValueError(f"history queried at {t} beyond current time {times[-1]}")
        i = self._cursor
        last = len(times) - 1
        while i < last - 1 and times[i + 1] < t:
            i += 1
        while i > 0 and times[i] > t:
            i -= 1
        self._cursor = i
        t0, t1 = times[i], times[i + 1]
        h = t1 - t0
        s = (t - t0) / h
        one_m = 1.0 - s
        h00 = (1.0 + 2.0 * s) * one_m * one_m
        h10 = s * one_m * one_m
        h01 = s * s * (3.0 - 2.0 * s)
        h11 = s * s * (s - 1.0)
        y0, y1 = self.states[i], self.states[i + 1]
        d0, d1 = self.derivs[i], self.derivs[i + 1]
        return (
            h00 * y0[0] + h10 * h * d0[0] + h01 * y1[0] + h11 * h * d1[0],
            h00 * y0[1] + h10 * h * d0[1] + h01 * y1[1] + h11 * h * d1[1],
        )


def _as_history_fn(history, fallback_state: tuple[float, float]):
    """Normalize the history argument to a state-valued callable plus a label.

    A bare number is the constant displacement history; the velocity history
    only matters through the stored-derivative interpolation, never through
    the delayed term (only x_d enters the dynamics), so it is pinned to the
    fallback velocity.
    """
    if callable(history):
        return (lambda t: (float(history(t)), fallback_state[1])), "callable"
    value = float(history)
    return (lambda t: (value, fallback_state[1])), f"const:{value:.17g}"


def _run_dde(rhs, history_fn, delay: float, dt: float, t_end: float, y_init: tuple[float, float]):
    """Fixed-step RK4 with method-of-steps history; returns recorded samples.

    rhs(a, b, ad, bd) -> (da, db); the pair (ad, bd) is the state at t - T
    (the current state when T = 0).  Records every dt; integrates on the
    capped substep.
    """
    if dt <= 0 or t_end <= 0:
        raise ValueError("dt and t_end must be positive")
    nsub, h = _substeps(dt, delay)
    n_out = int(math.floor(t_end / dt + 1e-9))
    buf = HistoryBuffer(history_fn)
    a, b = y_init
    ad, bd = history_fn(-delay) if delay > 0 else (a, b)
    d = rhs(a, b, ad, bd)
    buf.append(0.0, (a, b), d)
    out_t, out_a, out_b = [0.0], [a], [b]
    overflow = False
    half = h / 2.0
    sixth = h / 6.0
    lookup = buf.value
    for i_out in range(1, n_out + 1):
        t_base = (i_out - 1) * dt
        for j in range(1, nsub + 1):
            t = t_base + (j - 1) * h
            # exact grid time at step boundaries keeps stored times drift-free
            t_next = i_out * dt if j == nsub else t_base + j * h
            if delay > 0.0:
                del1 = lookup(t - delay)
                del2 = lookup(t + half - delay)
                del4 = lookup(t_next - delay)
                k1 = rhs(a, b, del1[0], del1[1])
                a2, b2 = a + half * k1[0], b + half * k1[1]
                k2 = rhs(a2, b2, del2[0], del2[1])
                a3, b3 = a + half * k2[0], b + half * k2[1]
                k3 = rhs(a3, b3, del2[0], del2[1])
                a4, b4 = a + h * k3[0], b + h * k3[1]
                k4 = rhs(a4, b4, del4[0], del4[1])
            else:
                k1 = rhs(a, b, a, b)
                a2, b2 = a + half * k1[0], b + half * k1[1]
                k2 = rhs(a2, b2, a2, b2)
                a3, b3 = a + half * k2[0], b + half * k2[1]
                k3 = rhs(a3, b3, a3, b3)
                a4, b4 = a + h * k3[0], b + h * k3[1]
                k4 = rhs(a4, b4, a4, b4)
            a += sixth * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0])
            b += sixth * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1])
            if not (abs(a) < OVERFLOW_LIMIT and abs(b) < OVERFLOW_LIMIT):
                overflow = True
                break
            if delay > 0.0:
                dl = lookup(t_next - delay)
                d = rhs(a, b, dl[0], dl[1])
            else:
                d = rhs(a, b, a, b)
            buf.append(t_next, (a, b), d)
        if overflow:
            break
        out_t.append(i_out * dt)
        out_a.append(a)
        out_b.append(b)
    return (
        np.asarray(out_t), np.asarray(out_a), np.asarray(out_b), overflow,
    )


def _full_rhs_fn(spec: SystemSpec):
    eps, k = spec.epsilon, spec.k
    if spec.kind == SystemKind.DUFFING:
        alpha, gamma = spec.alpha, spec.gamma

        def rhs(x, v, xd, vd):
            return v, -x + eps * (-alpha * v - gamma * x * x * x + k * xd)

    elif spec.kind == SystemKind.VAN_DER_POL:

        def rhs(x, v, xd, vd):
            return v, -x + eps * (v * (1.0 - x * x) + k * xd)

    else:

        def rhs(x, v, xd, vd):
            return v, -x + eps * (v * (1.0 - x * x) + k * (xd - x))

    return rhs


def integrate(
    spec: SystemSpec,
    T: float,
    history,
    dt: float,
    t_end: float,
    x0: float | None = None,
    v0: float = 0.0,
) -> Trajectory:
    """Integrate the full oscillator with delay T from constant or callable history.

    ``history`` prescribes x(t) for t < 0, either as a constant or a
    function of t; the initial displacement defaults to the history value at
    zero.  On non-finite or absurdly large states the trajectory is
    truncated at the last finite sample and flagged as overflowed.
    """
    if T < 0:
        raise ValueError("delay T must be nonnegative")
    hist_fn, label = _as_history_fn(history, (0.0, v0))
    if x0 is None:
        x0 = hist_fn(0.0)[0]
    t, x, v, overflow = _run_dde(_full_rhs_fn(spec), hist_fn, T, dt, t_end, (x0, v0))
    return Trajectory(t, x, v, spec, T, dt, label, overflow)


def integrate_slowflow(
    spec: SystemSpec,
    T: float,
    initial: PlaneState,
    dt_eta: float,
    eta_end: float,
    undelayed: bool = False,
) -> SlowFlowTrajectory:
    """Integrate the envelope slow flow; the delay in slow time is epsilon*T.

    With ``undelayed`` the delayed envelope is replaced by the current one,
    which is exactly the reduced-ODE dynamics of the cruder analytic
    approach; comparison runs use it side by side with the delayed flow.
    """
    if T < 0:
        raise ValueError("delay T must be nonnegative")
    delay_eta = 0.0 if undelayed else spec.epsilon * T

    def rhs(A, B, Ad, Bd):
        return cartesian_rhs(spec, T, PlaneState(A, B), PlaneState(Ad, Bd))

    hist_fn = lambda t: (initial.A, initial.B)
    eta, A, B, overflow = _run_dde(
        rhs, hist_fn, delay_eta, dt_eta, eta_end, (initial.A, initial.B)
    )
    return SlowFlowTrajectory(eta, A, B, spec, T, dt_eta, undelayed, overflow)


def _tail_envelope(t: np.ndarray, x: np.ndarray, settle_fraction: float):
    """Times and |x| magnitudes of the oscillation extrema in the tail window."""
    n0 = int(len(x) * (1.0 - settle_fraction))
    seg = x[n0:]
    seg_t = t[n0:]
    hi = argrelextrema(seg, np.greater)[0]
    lo = argrelextrema(seg, np.less)[0]
    idx = np.sort(np.concatenate([hi, lo]))
    return seg_t[idx], np.abs(seg[idx])


def classify_long_run(
    traj: Trajectory,
    settle_fraction: float = 0.25,
    tolerances: ClassifyTolerances = ClassifyTolerances(),
) -> LongRunClass:
    """Classify the tail of a run as decay, steady limit cycle, or growth.

    Overflowed runs are growth outright.  Otherwise the envelope of the
    trailing window decides: everything under the decay floor is decay; a
    flat envelope (relative spread under plateau_rtol) is a limit cycle at
    the mean peak; a log-envelope trend beyond trend_band in either
    direction is growth or decay-in-progress.  Anything weaker is refused as
    ambiguous rather than guessed.
    """
    if traj.overflow:
        return LongRunClass(LongRunKind.GROWTH)
    if not 0.0 < settle_fraction <= 1.0:
        raise ValueError("settle_fraction must be in (0, 1]")
    tol = tolerances
    n0 = int(len(traj.x) * (1.0 - settle_fraction))
    tail_max = float(np.max(np.abs(traj.x[n0:]))) if len(traj.x) > n0 else 0.0
    if tail_max < tol.decay_floor:
        return LongRunClass(LongRunKind.DECAY)
    env_t, env = _tail_envelope(traj.t, traj.x, settle_fraction)
    if len(env) < tol.min_extrema:
        # no tail oscillation at all: a monotone segment well above the
        # floor that is not shrinking is an escape from the origin (the only
        # equilibrium these systems have)
        seg = np.abs(traj.x[n0:])
        if seg[-1] >= seg[0] and seg[-1] > 5.0 * tol.decay_floor:
            return LongRunClass(LongRunKind.GROWTH)
        raise InsufficientDataError(
            f"only {len(env)} tail extrema (need {tol.min_extrema}); run longer"
        )
    mean = float(np.mean(env))
    spread = float((np.max(env) - np.min(env)) / mean)
    if spread < tol.plateau_rtol:
        return LongRunClass(LongRunKind.LIMIT_CYCLE, mean)
    safe = np.maximum(env, 1e-300)
    span = env_t[-1] - env_t[0]
    slope = float(np.polyfit((env_t - env_t[0]) / span, np.log(safe), 1)[0])
    if slope >= tol.trend_band:
        return LongRunClass(LongRunKind.GROWTH)
    if slope <= -tol.trend_band:
        return LongRunClass(LongRunKind.DECAY)
    raise AmbiguousClassificationError(
        f"tail neither settles nor trends (spread {spread:.3g}, log-slope {slope:.3g})",
        T=traj.delay,
    )


def _origin_unstable(
    spec: SystemSpec,
    T: float,
    dt: float,
    t_end: float,
    x0: float,
    v0: float,
    tolerances: ClassifyTolerances,
) -> tuple[bool, Trajectory]:
    """Probe origin stability at delay T, lengthening the run when ambiguous.

    Deterministic: the retry ladder is a fixed function of (spec, T, dt).
    """
    horizon = t_end
    last_exc = None
    for _ in range(3):
        traj = integrate(spec, T, x0, dt, horizon, x0=x0, v0=v0)
        try:
            verdict = classify_long_run(traj, tolerances=tolerances)
        except (AmbiguousClassificationError, InsufficientDataError) as exc:
            last_exc = exc
            horizon *= 2.0
            continue
        return verdict.kind != LongRunKind.DECAY, traj
    raise AmbiguousClassificationError(
        f"origin stability at T = {T} unresolved after extended runs: {last_exc}",
        T=T,
    )


def _tail_frequency(traj: Trajectory, settle_fraction: float = 0.25) -> float:
    """Oscillation frequency from mean zero-crossing spacing in the tail."""
    n0 = int(len(traj.x) * (1.0 - settle_fraction))
    x = traj.x[n0:]
    t = traj.t[n0:]
    sign_change = np.where(np.diff(np.signbit(x)))[0]
    if len(sign_change) < 4:
        raise InsufficientDataError("too few tail zero crossings for a frequency estimate")
    # linear interpolation of each crossing time
    i = sign_change
    tc = t[i] - x[i] * (t[i + 1] - t[i]) / (x[i + 1] - x[i])
    period = 2.0 * float(np.mean(np.diff(tc)))
    return 2.0 * math.pi / period


def _infer_branch(spec: SystemSpec, T: float) -> Branch:
    """Label a detected Hopf delay by the nearer closed-form branch."""
    try:
        lower, upper = approach2_delays(spec, erneux_pairing=ERNEUX_PAIRING_ALIGNED)
    except (NoHopfError, SeriesDivergenceError):
        return Branch.LOWER
    return Branch.LOWER if abs(T - lower.T) <= abs(T - upper.T) else Branch.UPPER


def detect_hopf_bisection(
    spec: SystemSpec,
    T_lo: float,
    T_hi: float,
    tol_T: float = 1e-3,
    dt: float = DEFAULT_DT,
    t_end: float | None = None,
    x0: float = DEFAULT_X0,
    v0: float = 0.0,
    tolerances: ClassifyTolerances | None = None,
) -> HopfPoint:
    """Locate the Hopf delay between T_lo and T_hi by stability bisection.

    The bracket endpoints must classify to different origin stability; the
    bracket is then halved until narrower than tol_T.  The run horizon
    defaults to 400/epsilon so the slow dynamics get about 40 slow-time
    units to settle; the initial state (0.1, 0) is small enough to probe the
    origin, large enough to clear rounding noise.  The returned frequency is
    estimated from the tail oscillation period on the unstable side.

    The probe uses a tighter trend band than the general classifier:
    midpoints land arbitrarily close to the critical delay, where the
    deterministic envelope still drifts cleanly but slowly, so a 2% log
    change across the tail is already a trustworthy direction.
    """
    if T_lo >= T_hi:
        raise ValueError("bracket must satisfy T_lo < T_hi")
    if t_end is None:
        t_end = 400.0 / spec.epsilon
    if tolerances is None:
        tolerances = ClassifyTolerances(trend_band=0.02)
    lo_unstable, lo_traj = _origin_unstable(spec, T_lo, dt, t_end, x0, v0, tolerances)
    hi_unstable, hi_traj = _origin_unstable(spec, T_hi, dt, t_end, x0, v0, tolerances)
    if lo_unstable == hi_unstable:
        raise NoCrossingError(
            f"origin is {'unstable' if lo_unstable else 'stable'} at both bracket ends "
            f"({T_lo}, {T_hi}): no Hopf inside"
        )
    unstable_traj = lo_traj if lo_unstable else hi_traj
    lo, hi = T_lo, T_hi
    while hi - lo > tol_T:
        mid = 0.5 * (lo + hi)
        mid_unstable, mid_traj = _origin_unstable(spec, mid, dt, t_end, x0, v0, tolerances)
        if mid_unstable:
            unstable_traj = mid_traj
        if mid_unstable == lo_unstable:
            lo = mid
        else:
            hi = mid
    T_star = 0.5 * (lo + hi)
    omega = _tail_frequency(unstable_traj)
    return HopfPoint(spec.k, T_star, omega, _infer_branch(spec, T_star), Method.SIMULATED)

"""Independent oracles used by the tests.

Nothing here may import solver code from the package beyond plain system
parameters: each oracle recomputes expected values by a route unrelated to
the implementation it checks (fixed-point iteration, direct quadrature,
finite differences), so a shared bug cannot cancel out.
"""

import numpy as np


def vdp_exact_hopf_fixed_point(eps: float, k: float, branch: str, iters: int = 200):
    """Ground-truth van der Pol Hopf pair (omega, T) by fixed-point iteration.

    Solves sin(omega*T) = omega/k together with 1 - omega^2 =
    eps*k*cos(omega*T) by alternating the two relations, starting from
    omega = 1.  The lower branch takes the principal arcsine, the upper its
    supplement.
    """
    omega = 1.0
    for _ in range(iters):
        phi = np.arcsin(omega / k)
        if branch == "upper":
            phi = np.pi - phi
        omega = np.sqrt(1.0 - eps * k * np.cos(phi))
    phi = np.arcsin(omega / k)
    if branch == "upper":
        phi = np.pi - phi
    return float(omega), float(phi / omega)


def averaged_polar_rhs(kind: str, alpha, gamma, k, T, R, theta, R_d, theta_d, n: int = 4096):
    """Slow flow by direct averaging of the variation-of-parameters equations.

    With x = R*cos(u), x' = -R*sin(u) and the delayed displacement
    x_d = R_d*cos(u - (theta_d - theta + T)), the exact amplitude/phase
    equations are dR/dt = -eps*sin(u)*f and dtheta/dt = (eps/R)*cos(u)*f.
    Averaging over u in [0, 2*pi) with the slow variables frozen and
    dividing out eps gives the slow flow in slow time.  The integrand is a
    trigonometric polynomial, so the trapezoid rule on n points is exact to
    rounding.
    """
    u = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    x = R * np.cos(u)
    xdot = -R * np.sin(u)
    x_del = R_d * np.cos(u - (theta_d - theta + T))
    if kind == "duffing":
        f = -alpha * xdot - gamma * x**3 + k * x_del
    elif kind == "vdp":
        f = xdot * (1.0 - x * x) + k * x_del
    elif kind == "erneux":
        f = xdot * (1.0 - x * x) + k * x_del - k * x
    else:
        raise ValueError(kind)
    dR = float(np.mean(-np.sin(u) * f))
    dtheta = float(np.mean(np.cos(u) * f) / R)
    return dR, dtheta


def central_difference_jacobian(fn, omega: float, T: float, h: float = 1e-6):
    """2x2 Jacobian of fn(omega, T) -> (re, im) by central differences."""
    rp, ip = fn(omega + h, T)
    rm, im_ = fn(omega - h, T)
    d_om = ((rp - rm) / (2 * h), (ip - im_) / (2 * h))
    rp, ip = fn(omega, T + h)
    rm, im_ = fn(omega, T - h)
    d_T = ((rp - rm) / (2 * h), (ip - im_) / (2 * h))
    return ((d_om[0], d_T[0]), (d_om[1], d_T[1]))

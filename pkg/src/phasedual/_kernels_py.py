"""Pure-Python versions of the hot kernels.

Every routine here mirrors ``_kernels.pyx`` operation for operation, so both
backends return bit-identical floats.
"""
import math

import numpy as np

MAX_ITER = 200
MAX_NEWTON = 50
MAX_GROW = 1100
CLAMP_REL = 1e-12
EPS = 2.220446049250313e-16


def ordered_sum(values):
    """Left-to-right sum over a 1-D float array."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    if values.size == 0:
        return 0.0
    # add.accumulate is strictly sequential, unlike add.reduce (pairwise)
    return float(np.add.accumulate(values)[-1])


def cumulative_sum(values):
    values = np.ascontiguousarray(values, dtype=np.float64)
    return np.add.accumulate(values) if values.size else values.copy()


def _g(s, mu, nu, na2):
    d = mu + s
    return (2.0 * s + na2) * d * d / nu


def _gp(s, mu, nu, rho):
    return 6.0 * (s + mu) * (s - rho) / nu


def solve_one(tau2, branch, mu, nu, na2, eta, rho):
    """Root of g(s) = tau2 on one monotone branch; NaN when there is none."""
    if not (tau2 >= 0.0) or math.isinf(tau2):
        return math.nan
    if branch == 1:
        if tau2 == 0.0:
            return -mu
        lo = -mu
        step = 1.0
        hi = lo + step
        k = 0
        while _g(hi, mu, nu, na2) < tau2:
            step *= 2.0
            hi = lo + step
            k += 1
            if k > MAX_GROW:
                return math.nan
    elif branch == 2 or branch == 3:
        if tau2 > eta * (1.0 + CLAMP_REL):
            return math.nan
        if tau2 >= eta:
            return rho
        if branch == 2:
            if tau2 == 0.0:
                return -mu
            lo = rho
            hi = -mu
        else:
            if tau2 == 0.0:
                return -0.5 * na2
            lo = -0.5 * na2
            hi = rho
    else:
        return math.nan

    flo = _g(lo, mu, nu, na2) - tau2
    fhi = _g(hi, mu, nu, na2) - tau2
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    # a: f < 0 side, b: f > 0 side
    if flo < 0.0:
        a = lo
        b = hi
    else:
        a = hi
        b = lo
    x = 0.5 * (lo + hi)
    dx_old = abs(hi - lo)
    dx = dx_old
    fx = _g(x, mu, nu, na2) - tau2
    dfx = _gp(x, mu, nu, rho)
    n_newton = 0
    for _ in range(MAX_ITER):
        if fx == 0.0:
            return x
        if fx < 0.0:
            a = x
        else:
            b = x
        use_newton = False
        if n_newton < MAX_NEWTON and dfx != 0.0:
            xn = x - fx / dfx
            if (xn - a) * (xn - b) < 0.0 and abs(2.0 * fx) <= abs(dx_old * dfx):
                use_newton = True
        dx_old = dx
        if use_newton:
            n_newton += 1
            dx = fx / dfx
            x_new = xn
        else:
            x_new = 0.5 * (a + b)
            dx = x - x_new
        if x_new == x or abs(b - a) <= 4.0 * EPS * max(abs(a), abs(b)):
            return x_new
        x = x_new
        fx = _g(x, mu, nu, na2) - tau2
        dfx = _gp(x, mu, nu, rho)
    return x


def solve_many(tau2, branch, mu, nu, na2, eta, rho):
    tau2 = np.ascontiguousarray(tau2, dtype=np.float64)
    out = np.empty_like(tau2)
    for i in range(tau2.shape[0]):
        out[i] = solve_one(float(tau2[i]), branch, mu, nu, na2, eta, rho)
    return out

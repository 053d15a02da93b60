# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: ordered reductions and the per-cell DAE root solve.

Keep in lockstep with ``_kernels_py.py``; the test suite compares both
backends bit for bit.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport NAN, fabs, isinf

cnp.import_array()

cdef int MAX_ITER = 200
cdef int MAX_NEWTON = 50
cdef int MAX_GROW = 1100
cdef double CLAMP_REL = 1e-12
cdef double EPS = 2.220446049250313e-16


def ordered_sum(values):
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t i
    cdef double s = 0.0
    if v.shape[0] == 0:
        return 0.0
    s = v[0]
    for i in range(1, v.shape[0]):
        s = s + v[i]
    return s


def cumulative_sum(values):
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t i, n = v.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double s
    if n == 0:
        return out
    s = v[0]
    o[0] = s
    for i in range(1, n):
        s = s + v[i]
        o[i] = s
    return out


cdef inline double _g(double s, double mu, double nu, double na2) noexcept nogil:
    cdef double d = mu + s
    return (2.0 * s + na2) * d * d / nu


cdef inline double _gp(double s, double mu, double nu, double rho) noexcept nogil:
    return 6.0 * (s + mu) * (s - rho) / nu


cdef double _solve(double tau2, int branch, double mu, double nu, double na2,
                   double eta, double rho) noexcept nogil:
    cdef double lo, hi, step, flo, fhi, a, b, x, dx_old, dx, fx, dfx, xn, x_new
    cdef int k, it, n_newton
    cdef bint use_newton
    if not (tau2 >= 0.0) or isinf(tau2):
        return NAN
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
                return NAN
    elif branch == 2 or branch == 3:
        if tau2 > eta * (1.0 + CLAMP_REL):
            return NAN
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
        return NAN

    flo = _g(lo, mu, nu, na2) - tau2
    fhi = _g(hi, mu, nu, na2) - tau2
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo < 0.0:
        a = lo
        b = hi
    else:
        a = hi
        b = lo
    x = 0.5 * (lo + hi)
    dx_old = fabs(hi - lo)
    dx = dx_old
    fx = _g(x, mu, nu, na2) - tau2
    dfx = _gp(x, mu, nu, rho)
    n_newton = 0
    for it in range(MAX_ITER):
        if fx == 0.0:
            return x
        if fx < 0.0:
            a = x
        else:
            b = x
        use_newton = False
        if n_newton < MAX_NEWTON and dfx != 0.0:
            xn = x - fx / dfx
            if (xn - a) * (xn - b) < 0.0 and fabs(2.0 * fx) <= fabs(dx_old * dfx):
                use_newton = True
        dx_old = dx
        if use_newton:
            n_newton += 1
            dx = fx / dfx
            x_new = xn
        else:
            x_new = 0.5 * (a + b)
            dx = x - x_new
        if x_new == x or fabs(b - a) <= 4.0 * EPS * max(fabs(a), fabs(b)):
            return x_new
        x = x_new
        fx = _g(x, mu, nu, na2) - tau2
        dfx = _gp(x, mu, nu, rho)
    return x


def solve_one(double tau2, int branch, double mu, double nu, double na2,
              double eta, double rho):
    return _solve(tau2, branch, mu, nu, na2, eta, rho)


def solve_many(tau2, int branch, double mu, double nu, double na2,
               double eta, double rho):
    cdef const double[::1] t = np.ascontiguousarray(tau2, dtype=np.float64)
    cdef Py_ssize_t i, n = t.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _solve(t[i], branch, mu, nu, na2, eta, rho)
    return out

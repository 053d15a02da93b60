"""The dual algebraic equation g(s) = tau^2 and the dual integrand h_tau.

    g(s) = (2 s / nu + alpha^2) (mu + s)^2

g increases on (-inf, rho], decreases on [rho, -mu] and increases again on
[-mu, inf), with g(-nu alpha^2 / 2) = g(-mu) = 0 and g(rho) = eta. Each
monotone piece carries one root branch:

    B1 on [-mu, inf)             exists for every tau^2 >= 0
    B2 on [rho, -mu]             exists iff tau^2 <= eta
    B3 on [-nu alpha^2 / 2, rho] exists iff tau^2 <= eta

Roots are found by bracketed Newton with bisection fallback (see
``_kernels``) rather than Cardano's formulas, which lose digits at the
double roots tau^2 in {0, eta}.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .model import Field, Grid, MaterialParams

CLAMP_REL = 1e-12


class NoRealRootError(ValueError):
    """Requested branch has no real root (tau^2 > eta for B2/B3)."""

    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell


class PoleError(ValueError):
    """h_tau evaluated at its pole s = -mu with tau != 0."""


class BranchId(enum.IntEnum):
    B1 = 1
    B2 = 2
    B3 = 3

    @classmethod
    def parse(cls, value) -> "BranchId":
        if isinstance(value, BranchId):
            return value
        if isinstance(value, str):
            key = value.strip().upper()
            if not key.startswith("B"):
                key = "B" + key
            return cls[key]
        return cls(int(value))


def g_eval(s, params: MaterialParams):
    s = np.asarray(s, dtype=np.float64)
    d = params.mu + s
    out = (2.0 * s + params.nu_alpha2) * d * d / params.nu
    return float(out) if out.ndim == 0 else out


def g_prime(s, params: MaterialParams):
    s = np.asarray(s, dtype=np.float64)
    out = 6.0 * (s + params.mu) * (s - params.rho) / params.nu
    return float(out) if out.ndim == 0 else out


def h_hat0(s, params: MaterialParams):
    """Continuous extension of h_0 across the pole."""
    s = np.asarray(s, dtype=np.float64)
    out = -0.5 * (params.alpha**2 * (s + params.mu) + s * s / params.nu)
    return float(out) if out.ndim == 0 else out


def h_tau_eval(s: float, tau: float, params: MaterialParams) -> float:
    """h_tau(s) = -1/2 [tau^2/(s+mu) + 2 alpha tau + alpha^2 (s+mu) + s^2/nu]."""
    s = float(s)
    tau = float(tau)
    d = s + params.mu
    if d == 0.0:
        if tau == 0.0:
            return h_hat0(s, params)
        raise PoleError(f"h_tau has a pole at s = -mu = {-params.mu!r} for tau = {tau!r}")
    a = params.alpha
    return -0.5 * (tau * tau / d + 2.0 * a * tau + a * a * d + s * s / params.nu)


def h_tau_array(s, tau, params: MaterialParams, singular=None) -> np.ndarray:
    """Vectorised h_tau; cells flagged ``singular`` take the value h_hat0(-mu)."""
    s = np.asarray(s, dtype=np.float64)
    tau = np.broadcast_to(np.asarray(tau, dtype=np.float64), s.shape)
    d = s + params.mu
    if singular is None:
        singular = d == 0.0
    a = params.alpha
    safe = np.where(singular, 1.0, d)
    vals = -0.5 * (tau * tau / safe + 2.0 * a * tau + a * a * d + s * s / params.nu)
    return np.where(singular, -0.5 * params.mu**2 / params.nu, vals)


def h_tau_prime(s: float, tau: float, params: MaterialParams) -> float:
    d = float(s) + params.mu
    return -0.5 * (g_eval(s, params) - tau * tau) / (d * d)


def _kernel_args(params: MaterialParams):
    return params.mu, params.nu, params.nu_alpha2, params.eta, params.rho


def branch_interval(branch, params: MaterialParams) -> tuple[float, float]:
    branch = BranchId.parse(branch)
    if branch is BranchId.B1:
        return -params.mu, np.inf
    if branch is BranchId.B2:
        return params.rho, -params.mu
    return params.zeta_floor, params.rho


def solve_dae(tau2: float, branch, params: MaterialParams) -> float:
    """Root of g(s) = tau2 on the given branch.

    Raises
    ------
    NoRealRootError
        B2/B3 requested with tau2 > eta (beyond the clamp tolerance).
    """
    branch = BranchId.parse(branch)
    tau2 = float(tau2)
    if not tau2 >= 0.0:
        raise ValueError(f"tau^2 must be nonnegative, got {tau2!r}")
    root = kernels.solve_one(tau2, int(branch), *_kernel_args(params))
    if np.isnan(root):
        raise NoRealRootError(
            f"no real root on {branch.name}: tau^2 = {tau2!r} exceeds eta = {params.eta!r}"
        )
    return float(root)


def solve_dae_array(tau2, branch, params: MaterialParams) -> np.ndarray:
    """Vectorised :func:`solve_dae`; NaN marks cells without a real root."""
    branch = BranchId.parse(branch)
    tau2 = np.ascontiguousarray(tau2, dtype=np.float64)
    if np.any(tau2 < 0.0):
        raise ValueError("tau^2 must be nonnegative")
    return kernels.solve_many(tau2, int(branch), *_kernel_args(params))


def all_roots(tau2: float, params: MaterialParams) -> dict:
    """Every real root keyed by branch; B2/B3 are absent when tau2 > eta."""
    out = {}
    for b in BranchId:
        try:
            out[b] = solve_dae(tau2, b, params)
        except NoRealRootError:
            pass
    return out


def branch_field(beta: Field, branch, params: MaterialParams) -> Field:
    branch = BranchId.parse(branch)
    b = beta.values
    roots = solve_dae_array(b * b, branch, params)
    bad = np.flatnonzero(np.isnan(roots))
    if bad.size:
        i = int(bad[0])
        raise NoRealRootError(
            f"no real root on {branch.name} at cell {i}: beta^2 = {b[i] * b[i]!r} > eta = {params.eta!r}",
            cell=i,
        )
    return Field(beta.grid, roots, "zeta")


def dae_residual(zeta: Field, beta: Field, params: MaterialParams) -> np.ndarray:
    b = beta.values
    return g_eval(zeta.values, params) - b * b


@dataclass(frozen=True)
class BranchAssignment:
    """Per-cell choice of DAE branch (values 1, 2, 3)."""

    grid: Grid
    branches: np.ndarray

    def __post_init__(self):
        arr = np.array(self.branches, dtype=np.int8, copy=True).reshape(-1)
        if arr.shape[0] != self.grid.n_cells:
            raise ValueError(f"assignment has {arr.shape[0]} cells, grid has {self.grid.n_cells}")
        if np.any((arr < 1) | (arr > 3)):
            raise ValueError("branch ids must be 1, 2 or 3")
        arr.setflags(write=False)
        object.__setattr__(self, "branches", arr)

    @classmethod
    def uniform(cls, grid: Grid, branch) -> "BranchAssignment":
        return cls(grid, np.full(grid.n_cells, int(BranchId.parse(branch))))

    @classmethod
    def from_runs(cls, grid: Grid, runs, default="B1") -> "BranchAssignment":
        """Build from run-length records ``{"branch": "B2", "start": i, "stop": j}``.

        ``start``/``stop`` are cell indices (half-open). Cells not covered
        by any run get ``default``.
        """
        arr = np.full(grid.n_cells, int(BranchId.parse(default)), dtype=np.int8)
        for run in runs:
            start = int(run.get("start", 0))
            stop = int(run.get("stop", grid.n_cells))
            if not 0 <= start <= stop <= grid.n_cells:
                raise ValueError(f"run [{start}, {stop}) outside 0..{grid.n_cells}")
            arr[start:stop] = int(BranchId.parse(run["branch"]))
        return cls(grid, arr)

    def to_runs(self) -> list:
        runs = []
        b = self.branches
        start = 0
        for i in range(1, len(b) + 1):
            if i == len(b) or b[i] != b[start]:
                runs.append({"branch": BranchId(int(b[start])).name, "start": start, "stop": i})
                start = i
        return runs

    def invalid_cells(self, beta: Field, params: MaterialParams) -> np.ndarray:
        b = beta.values
        over = b * b > params.eta * (1.0 + CLAMP_REL)
        return np.flatnonzero(over & (self.branches != 1))


def assemble_assignment_solution(
    beta: Field, assignment: BranchAssignment, params: MaterialParams
) -> Field:
    """Measurable DAE solution taking the assigned branch root in each cell."""
    if assignment.grid.n_cells != beta.grid.n_cells:
        raise ValueError("assignment and beta live on different grids")
    bad = assignment.invalid_cells(beta, params)
    if bad.size:
        raise NoRealRootError(
            f"assignment picks B2/B3 where beta^2 > eta at cells {bad[:10].tolist()}"
            + (" ..." if bad.size > 10 else ""),
            cell=int(bad[0]),
        )
    tau2 = beta.values * beta.values
    out = np.empty(beta.grid.n_cells)
    for b in BranchId:
        sel = assignment.branches == int(b)
        if np.any(sel):
            out[sel] = solve_dae_array(tau2[sel], b, params)
    return Field(beta.grid, out, "zeta")


def _sample_open(rng, lo, hi, n):
    u = rng.uniform(0.0, 1.0, n)
    u = u[(u > 0.0) & (u < 1.0)]
    return lo + (hi - lo) * u


def verify_branch_optimality(
    beta: Field,
    params: MaterialParams,
    n_samples: int = 1000,
    n_cells: int = 16,
    seed: int = 0,
    rel_tol: float = 1e-12,
) -> dict:
    """Sample h_beta(x) on each monotone interval and check the extremal roots.

    For each sampled cell:

    * h(s) <= h(s1) for s > -mu (B1 root is the maximum there);
    * h(s) >= h(s2) for s in (s3, -mu) (B2 root is the minimum);
    * h(s) <= h(s3) for s in (-nu alpha^2 / 2, s2) (B3 root is the maximum).

    The last two are checked only where B2/B3 exist. Returns a dict with the
    checked cell indices, sample count and a list of violations.
    """
    rng = np.random.default_rng(seed)
    grid = beta.grid
    cells = np.unique(np.linspace(0, grid.n_cells - 1, min(n_cells, grid.n_cells)).astype(int))
    violations = []
    n_checked = 0
    for i in cells:
        tau = float(beta.values[i])
        roots = all_roots(tau * tau, params)
        s1 = roots[BranchId.B1]
        h1 = h_tau_eval(s1, tau, params)
        # (-mu, inf): map (0, 1) onto it
        t = _sample_open(rng, 0.0, 1.0, n_samples)
        span = 4.0 * (abs(s1 + params.mu) + params.mu + 1.0)
        s = -params.mu + span * t / (1.0 - t)
        s = s[s + params.mu > 0.0]
        h = h_tau_array(s, tau, params)
        tol = rel_tol * (1.0 + abs(h1))
        n_checked += s.size
        for k in np.flatnonzero(h > h1 + tol)[:5]:
            violations.append({"cell": int(i), "check": "max_at_B1", "s": float(s[k]), "excess": float(h[k] - h1)})
        if BranchId.B2 in roots:
            s2, s3 = roots[BranchId.B2], roots[BranchId.B3]
            h2 = h_tau_eval(s2, tau, params) if (s2 + params.mu != 0.0 or tau == 0.0) else None
            h3 = h_tau_eval(s3, tau, params)
            if h2 is not None:
                s = _sample_open(rng, s3, -params.mu, n_samples)
                s = s[s + params.mu < 0.0]
                h = h_tau_array(s, tau, params)
                tol = rel_tol * (1.0 + abs(h2))
                n_checked += s.size
                for k in np.flatnonzero(h < h2 - tol)[:5]:
                    violations.append({"cell": int(i), "check": "min_at_B2", "s": float(s[k]), "excess": float(h2 - h[k])})
            s = _sample_open(rng, params.zeta_floor, s2, n_samples)
            s = s[s + params.mu < 0.0]
            h = h_tau_array(s, tau, params)
            tol = rel_tol * (1.0 + abs(h3))
            n_checked += s.size
            for k in np.flatnonzero(h > h3 + tol)[:5]:
                violations.append({"cell": int(i), "check": "max_at_B3", "s": float(s[k]), "excess": float(h[k] - h3)})
    return {"cells": cells.tolist(), "n_samples": int(n_checked), "violations": violations}

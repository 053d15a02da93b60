"""Primal, total-complementary and pure-complementary energies.

Everything is written in terms of the strain field v = u_x, so the primal
problem is an unconstrained minimisation over L^4:

    P(v)      = int [ mu v^2/2 + nu (v^2/2 - alpha v)^2 / 2 - sigma v ]
    Xi(v, z)  = int [ v^2 (z + mu)/2 - alpha v z - z^2/(2 nu) - sigma v ]
    Pd(z)     = int h_{beta(x)}(z(x)) dx

with the 0/0 := 0 convention on the singular set E_z = {z = -mu}, where a
cell contributes -mu^2/(2 nu) if beta vanishes there and makes Pd undefined
otherwise.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import dae
from .model import Field, MaterialParams, integrate, lp_norm, same_grid

DEFAULT_TOL_CRIT = 1e-8
DIVERGENT = "divergent"


def tol_dual(primal: float, scale: float = 1e-8) -> float:
    return scale * (1.0 + abs(primal))


class IllPosedError(ValueError):
    """zeta = -mu on a cell where beta != 0: zeta lies outside A0."""

    def __init__(self, message, cells=()):
        super().__init__(message)
        self.cells = list(cells)


class Divergent:
    """Marker for a pure complementary energy that is not a real number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDEFINED_DIVERGENT"

    def __bool__(self):
        return False

    def to_json(self):
        return DIVERGENT


UNDEFINED_DIVERGENT = Divergent()


def is_divergent(value) -> bool:
    return value is UNDEFINED_DIVERGENT


def eps_sing(params: MaterialParams) -> float:
    return 1e-9 * (1.0 + params.mu)


def eps_beta(beta: Field) -> float:
    return 1e-9 * (1.0 + float(np.max(np.abs(beta.values))))


@dataclass(frozen=True)
class SingularSet:
    mask: np.ndarray
    ill_posed: np.ndarray
    h: float

    @property
    def measure(self) -> float:
        return self.h * int(np.count_nonzero(self.mask))

    @property
    def is_well_posed(self) -> bool:
        return not bool(np.any(self.ill_posed))

    @property
    def ill_posed_cells(self) -> np.ndarray:
        return np.flatnonzero(self.ill_posed)


def singular_set(zeta: Field, beta: Field, params: MaterialParams, eps_s=None, eps_b=None) -> SingularSet:
    same_grid(zeta, beta)
    eps_s = eps_sing(params) if eps_s is None else eps_s
    eps_b = eps_beta(beta) if eps_b is None else eps_b
    mask = np.abs(zeta.values + params.mu) <= eps_s
    ill = mask & (np.abs(beta.values) > eps_b)
    mask.setflags(write=False)
    ill.setflags(write=False)
    return SingularSet(mask, ill, zeta.grid.h)


def primal_density(v, sigma, params: MaterialParams):
    w = 0.5 * v * v - params.alpha * v
    return 0.5 * params.mu * v * v + 0.5 * params.nu * w * w - sigma * v


def primal_energy(v: Field, sigma: Field, params: MaterialParams) -> float:
    same_grid(v, sigma)
    return integrate(primal_density(v.values, sigma.values, params))


def xi_density(v, zeta, sigma, params: MaterialParams):
    return 0.5 * v * v * (zeta + params.mu) - params.alpha * v * zeta - 0.5 * zeta * zeta / params.nu - sigma * v


def xi_energy(v: Field, zeta: Field, sigma: Field, params: MaterialParams) -> float:
    same_grid(v, zeta, sigma)
    return integrate(xi_density(v.values, zeta.values, sigma.values, params))


def dual_density(zeta: Field, beta: Field, params: MaterialParams, sing: SingularSet | None = None):
    sing = singular_set(zeta, beta, params) if sing is None else sing
    return dae.h_tau_array(zeta.values, beta.values, params, singular=sing.mask)


def dual_energy(zeta: Field, sigma: Field, beta: Field, params: MaterialParams, sing: SingularSet | None = None):
    """Pure complementary energy, or ``UNDEFINED_DIVERGENT`` off A1 at grid scale.

    ``sigma`` is accepted for symmetry with the other functionals; the
    integrand only needs beta = sigma - mu alpha.
    """
    same_grid(zeta, sigma, beta)
    sing = singular_set(zeta, beta, params) if sing is None else sing
    if not sing.is_well_posed:
        return UNDEFINED_DIVERGENT
    return integrate(dual_density(zeta, beta, params, sing))


def primal_gradient(v: Field, sigma: Field, params: MaterialParams) -> Field:
    same_grid(v, sigma)
    x, a = v.values, params.alpha
    r = params.mu * x + params.nu * (0.5 * x * x - a * x) * (x - a) - sigma.values
    return Field(v.grid, r, "h")


def xi_residuals(v: Field, zeta: Field, sigma: Field, params: MaterialParams) -> tuple[Field, Field]:
    """Gradients of Xi in v and in zeta, as fields."""
    same_grid(v, zeta, sigma)
    x, z, a = v.values, zeta.values, params.alpha
    r_v = x * (z + params.mu) - a * z - sigma.values
    r_z = 0.5 * x * x - a * x - z / params.nu
    return Field(v.grid, r_v, "h"), Field(v.grid, r_z, "h")


def is_critical_pair(v, zeta, sigma, params, tol_crit: float = DEFAULT_TOL_CRIT) -> bool:
    r_v, r_z = xi_residuals(v, zeta, sigma, params)
    return lp_norm(r_v, 2) <= tol_crit and lp_norm(r_z, 2) <= tol_crit


def second_variation_weight(v, params: MaterialParams):
    a = params.alpha
    return params.mu + params.nu * (1.5 * v * v - 3.0 * a * v + a * a)


def second_variation_quadratic(v: Field, h: Field, params: MaterialParams) -> float:
    """d^2 P(v)(h, h) = int [mu + nu (3/2 v^2 - 3 alpha v + alpha^2)] h^2."""
    same_grid(v, h)
    w = second_variation_weight(v.values, params)
    return integrate(w * h.values * h.values)


def second_variation_critical(zeta: Field, h: Field, params: MaterialParams) -> float:
    """3 int (zeta - rho) h^2, the same form rewritten through zeta = zeta_v."""
    same_grid(zeta, h)
    return integrate(3.0 * (zeta.values - params.rho) * h.values * h.values)


def zeta_from_v(v: Field, params: MaterialParams) -> Field:
    x = v.values
    return Field(v.grid, params.nu * (0.5 * x * x - params.alpha * x), "zeta")


def _fill_values(fill, n):
    if isinstance(fill, Field):
        return fill.values
    return np.broadcast_to(np.asarray(fill, dtype=np.float64), (n,))


def v_from_zeta(zeta: Field, sigma: Field, beta: Field, params: MaterialParams, fill=0.0, sing=None) -> Field:
    """alpha + beta/(zeta + mu) off E_zeta, alpha + fill on E_zeta.

    Raises
    ------
    IllPosedError
        Some cell has zeta = -mu but beta != 0.
    """
    same_grid(zeta, sigma, beta)
    sing = singular_set(zeta, beta, params) if sing is None else sing
    if not sing.is_well_posed:
        cells = sing.ill_posed_cells
        raise IllPosedError(f"zeta outside A0/A2 at cell {int(cells[0])}", cells)
    n = zeta.grid.n_cells
    d = np.where(sing.mask, 1.0, zeta.values + params.mu)
    v = params.alpha + beta.values / d
    v = np.where(sing.mask, params.alpha + _fill_values(fill, n), v)
    return Field(zeta.grid, v, "v")


def duality_gap_identity(
    zeta: Field, fill, sigma: Field, beta: Field, params: MaterialParams, tol_dae: float | None = None
) -> tuple[float, float]:
    """Both sides of P(v_zeta + fill 1_E) = Pd(zeta) + nu/8 int_E (fill^2 - alpha^2 + 2 mu/nu)^2.

    ``zeta`` must solve the DAE cellwise.
    """
    same_grid(zeta, sigma, beta)
    res = dae.dae_residual(zeta, beta, params)
    if tol_dae is None:
        tol_dae = 1e-9 * (1.0 + params.eta + float(np.max(beta.values**2)))
    worst = float(np.max(np.abs(res)))
    if worst > tol_dae:
        raise ValueError(f"zeta does not solve the DAE: max |g(zeta) - beta^2| = {worst:.3e} > {tol_dae:.3e}")
    sing = singular_set(zeta, beta, params)
    v = v_from_zeta(zeta, sigma, beta, params, fill, sing)
    lhs = primal_energy(v, sigma, params)
    fv = _fill_values(fill, zeta.grid.n_cells)
    k = fv * fv - params.alpha**2 + 2.0 * params.mu / params.nu
    gap = 0.125 * params.nu * integrate(np.where(sing.mask, k * k, 0.0))
    return lhs, dual_energy(zeta, sigma, beta, params, sing) + gap


@dataclass
class EnergyReport:
    primal: float
    xi: float
    dual: object
    gap: object
    grad_norm: float
    second_variation_coeff_min: float
    critical: bool | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("dual", "gap"):
            if is_divergent(d[key]):
                d[key] = DIVERGENT
        return d


def energy_report(v: Field, zeta: Field, sigma: Field, beta: Field, params: MaterialParams,
                  tol_crit: float = DEFAULT_TOL_CRIT) -> EnergyReport:
    primal = primal_energy(v, sigma, params)
    dual = dual_energy(zeta, sigma, beta, params)
    return EnergyReport(
        primal=primal,
        xi=xi_energy(v, zeta, sigma, params),
        dual=dual,
        gap=UNDEFINED_DIVERGENT if is_divergent(dual) else primal - dual,
        grad_norm=lp_norm(primal_gradient(v, sigma, params), 2),
        second_variation_coeff_min=float(np.min(3.0 * (zeta.values - params.rho))),
        critical=is_critical_pair(v, zeta, sigma, params, tol_crit),
    )

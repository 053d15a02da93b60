"""Material constants, loads, the uniform grid and piecewise-constant fields.

All integrals over [0, 1] are composite midpoint sums taken left to right
over the cells, so the result does not depend on the kernel backend.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from ._backend import kernels

ROLES = frozenset({"v", "zeta", "sigma", "beta", "h", "u"})
DEFAULT_N_CELLS = 1000
MAX_LOAD_DEGREE = 3


class PhysicsError(ValueError):
    """Material constants violate positivity or nu*alpha^2 > 2*mu."""


@dataclass(frozen=True)
class MaterialParams:
    mu: float
    nu: float
    alpha: float

    def __post_init__(self):
        for name in ("mu", "nu", "alpha"):
            val = float(getattr(self, name))
            if not np.isfinite(val) or val <= 0.0:
                raise PhysicsError(f"{name} must be a positive finite number, got {val!r}")
            object.__setattr__(self, name, val)
        if not self.nu_alpha2 > 2.0 * self.mu:
            raise PhysicsError(
                "material constants must satisfy nu*alpha^2 > 2*mu "
                f"(got nu*alpha^2 = {self.nu_alpha2!r}, 2*mu = {2.0 * self.mu!r})"
            )

    @property
    def nu_alpha2(self) -> float:
        return self.nu * self.alpha * self.alpha

    @property
    def rho(self) -> float:
        """Interior stationary point of g, -(mu + nu*alpha^2)/3."""
        return -(self.mu + self.nu_alpha2) / 3.0

    @property
    def eta(self) -> float:
        """Local maximum g(rho) = (nu*alpha^2 - 2*mu)^3 / (27*nu)."""
        return (self.nu_alpha2 - 2.0 * self.mu) ** 3 / (27.0 * self.nu)

    @property
    def zeta_floor(self) -> float:
        """-nu*alpha^2/2, the lower end of the dual feasible range."""
        return -0.5 * self.nu_alpha2

    def to_dict(self):
        return {"mu": self.mu, "nu": self.nu, "alpha": self.alpha, "rho": self.rho, "eta": self.eta}


@dataclass(frozen=True)
class Grid:
    """Uniform partition of [0, 1] into ``n_cells`` cells."""

    n_cells: int = DEFAULT_N_CELLS

    def __post_init__(self):
        n = int(self.n_cells)
        if n != self.n_cells or n < 1:
            raise ValueError(f"n_cells must be a positive integer, got {self.n_cells!r}")
        object.__setattr__(self, "n_cells", n)

    @property
    def h(self) -> float:
        return 1.0 / self.n_cells

    @cached_property
    def midpoints(self) -> np.ndarray:
        x = (np.arange(self.n_cells, dtype=np.float64) + 0.5) / self.n_cells
        x.setflags(write=False)
        return x

    @cached_property
    def edges(self) -> np.ndarray:
        x = np.arange(self.n_cells + 1, dtype=np.float64) / self.n_cells
        x.setflags(write=False)
        return x

    def snap(self, x: float) -> tuple[int, float]:
        """Nearest cell boundary to ``x``: (index, snapped coordinate)."""
        k = int(np.clip(np.rint(x * self.n_cells), 0, self.n_cells))
        return k, k / self.n_cells

    def cell_mask(self, a: float, b: float) -> np.ndarray:
        """Cells lying inside [a, b] after snapping both ends to boundaries."""
        ka, _ = self.snap(a)
        kb, _ = self.snap(b)
        mask = np.zeros(self.n_cells, dtype=bool)
        mask[ka:kb] = True
        return mask


@dataclass(frozen=True)
class Field:
    """Piecewise-constant samples at cell midpoints.

    ``values`` is copied and made read-only; NaN or Inf is rejected.
    """

    grid: Grid
    values: np.ndarray
    role: str = "v"

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown field role {self.role!r}; expected one of {sorted(ROLES)}")
        vals = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if vals.shape[0] != self.grid.n_cells:
            raise ValueError(
                f"field has {vals.shape[0]} values but the grid has {self.grid.n_cells} cells"
            )
        bad = np.flatnonzero(~np.isfinite(vals))
        if bad.size:
            raise ValueError(f"non-finite field value at cell {int(bad[0])}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, grid: Grid, c: float, role: str = "v") -> "Field":
        return cls(grid, np.full(grid.n_cells, float(c)), role)

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable, role: str = "v") -> "Field":
        return cls(grid, np.broadcast_to(fn(grid.midpoints), (grid.n_cells,)), role)

    def with_values(self, values, role: str | None = None) -> "Field":
        return Field(self.grid, values, self.role if role is None else role)

    def __len__(self):
        return self.grid.n_cells


def same_grid(*fields: Field) -> Grid:
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid.n_cells != grid.n_cells:
            raise ValueError(
                f"fields live on different grids ({grid.n_cells} vs {f.grid.n_cells} cells)"
            )
    return grid
    return grid


@dataclass(frozen=True)
class LoadSpec:
    """Body force f on [0, 1] plus the dead load ``sigma1`` at x = 1.

    ``kind`` is ``"poly"`` (ascending coefficients), ``"piecewise"``
    (breakpoints and one coefficient list per piece) or ``"samples"``
    (tabulated values, linearly interpolated).
    """

    kind: str = "poly"
    coeffs: tuple = (0.0,)
    sigma1: float = 0.0
    breaks: tuple = ()
    pieces: tuple = ()
    x: tuple = ()
    f: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "sigma1", float(self.sigma1))
        if self.kind == "poly":
            c = tuple(float(v) for v in self.coeffs) or (0.0,)
            if len(c) - 1 > MAX_LOAD_DEGREE:
                raise ValueError(f"load polynomial degree must be <= {MAX_LOAD_DEGREE}")
            object.__setattr__(self, "coeffs", c)
            object.__setattr__(self, "breaks", (0.0, 1.0))
            object.__setattr__(self, "pieces", (c,))
        elif self.kind == "piecewise":
            br = tuple(float(b) for b in self.breaks)
            pcs = tuple(tuple(float(v) for v in p) or (0.0,) for p in self.pieces)
            if len(br) != len(pcs) + 1 or br[0] != 0.0 or br[-1] != 1.0:
                raise ValueError("piecewise load needs breaks 0 = b0 < ... < bk = 1 and k pieces")
            if any(b1 >= b2 for b1, b2 in zip(br, br[1:])):
                raise ValueError("piecewise load breaks must be strictly increasing")
            if any(len(p) - 1 > MAX_LOAD_DEGREE for p in pcs):
                raise ValueError(f"load polynomial degree must be <= {MAX_LOAD_DEGREE}")
            object.__setattr__(self, "breaks", br)
            object.__setattr__(self, "pieces", pcs)
        elif self.kind == "samples":
            xs = tuple(float(v) for v in self.x)
            fs = tuple(float(v) for v in self.f)
            if len(xs) != len(fs) or len(xs) < 2:
                raise ValueError("sampled load needs matching x and f arrays of length >= 2")
            if xs[0] > 0.0 or xs[-1] < 1.0 or any(a >= b for a, b in zip(xs, xs[1:])):
                raise ValueError("sampled load x must be increasing and cover [0, 1]")
            object.__setattr__(self, "x", xs)
            object.__setattr__(self, "f", fs)
        else:
            raise ValueError(f"unknown load kind {self.kind!r}")

    @classmethod
    def poly(cls, coeffs: Sequence[float], sigma1: float = 0.0) -> "LoadSpec":
        return cls("poly", tuple(coeffs), sigma1)

    @classmethod
    def piecewise(cls, breaks, pieces, sigma1: float = 0.0) -> "LoadSpec":
        return cls("piecewise", sigma1=sigma1, breaks=tuple(breaks), pieces=tuple(map(tuple, pieces)))

    @classmethod
    def sampled(cls, x, f, sigma1: float = 0.0) -> "LoadSpec":
        return cls("samples", sigma1=sigma1, x=tuple(x), f=tuple(f))

    @classmethod
    def from_dict(cls, d: dict) -> "LoadSpec":
        kind = d.get("kind", "poly")
        sigma1 = d.get("sigma1", 0.0)
        if kind == "poly":
            return cls.poly(d.get("coeffs", [0.0]), sigma1)
        if kind == "piecewise":
            return cls.piecewise(d["breaks"], d["pieces"], sigma1)
        if kind == "samples":
            return cls.sampled(d["x"], d["f"], sigma1)
        raise ValueError(f"unknown load kind {kind!r}")

    def to_dict(self) -> dict:
        if self.kind == "poly":
            return {"kind": "poly", "coeffs": list(self.coeffs), "sigma1": self.sigma1}
        if self.kind == "piecewise":
            return {
                "kind": "piecewise",
                "breaks": list(self.breaks),
                "pieces": [list(p) for p in self.pieces],
                "sigma1": self.sigma1,
            }
        return {"kind": "samples", "x": list(self.x), "f": list(self.f), "sigma1": self.sigma1}

    def __call__(self, s):
        s = np.asarray(s, dtype=np.float64)
        if self.kind == "samples":
            return np.interp(s, self.x, self.f)
        idx = np.clip(np.searchsorted(self.breaks, s, side="right") - 1, 0, len(self.pieces) - 1)
        out = np.empty_like(s)
        for k, c in enumerate(self.pieces):
            sel = idx == k
            out[sel] = npoly.polyval(s[sel], c)
        return out


def _tail_integral_piecewise(load: LoadSpec, x: np.ndarray) -> np.ndarray:
    """Exact int_x^1 f(s) ds for a piecewise polynomial f."""
    br = np.asarray(load.breaks)
    antider = [npoly.polyint(c) for c in load.pieces]
    piece_int = np.array(
        [npoly.polyval(b, P) - npoly.polyval(a, P) for a, b, P in zip(br[:-1], br[1:], antider)]
    )
    # contribution of pieces strictly to the right of piece k
    right = np.concatenate([np.cumsum(piece_int[::-1])[::-1][1:], [0.0]])
    idx = np.clip(np.searchsorted(br, x, side="right") - 1, 0, len(load.pieces) - 1)
    out = np.empty_like(x)
    for k, P in enumerate(antider):
        sel = idx == k
        out[sel] = npoly.polyval(br[k + 1], P) - npoly.polyval(x[sel], P) + right[k]
    return out


def compute_sigma(load: LoadSpec, grid: Grid) -> Field:
    """sigma(x) = int_x^1 f + sigma1 at the cell midpoints."""
    x = grid.midpoints
    if load.kind == "samples":
        # midpoint rule on a 4x refinement; each coarse midpoint is a fine edge
        m = 4 * grid.n_cells
        fine_mid = (np.arange(m, dtype=np.float64) + 0.5) / m
        contrib = load(fine_mid) / m
        tails = kernels.cumulative_sum(contrib[::-1])[::-1]
        tail = tails[4 * np.arange(grid.n_cells) + 2]
    else:
        tail = _tail_integral_piecewise(load, np.array(x))
    return Field(grid, tail + load.sigma1, "sigma")


def compute_beta(sigma: Field, params: MaterialParams) -> Field:
    return Field(sigma.grid, sigma.values - params.mu * params.alpha, "beta")


def beta_field(grid: Grid, beta, params: MaterialParams) -> Field:
    """Convenience: a beta field given directly (constant or array)."""
    vals = np.broadcast_to(np.asarray(beta, dtype=np.float64), (grid.n_cells,))
    return Field(grid, vals, "beta")


def sigma_from_beta(beta: Field, params: MaterialParams) -> Field:
    return Field(beta.grid, beta.values + params.mu * params.alpha, "sigma")


def integrate(field) -> float:
    """Composite midpoint rule: h times the left-to-right cell sum."""
    if isinstance(field, Field):
        vals, h = field.values, field.grid.h
    else:
        vals = np.asarray(field, dtype=np.float64)
        h = 1.0 / vals.shape[0]
    return h * kernels.ordered_sum(vals)


def lp_norm(field, p: float = 2) -> float:
    if p not in (1, 2, 4):
        raise ValueError(f"unsupported p = {p!r}; lp_norm supports p in {{1, 2, 4}}")
    vals = field.values if isinstance(field, Field) else np.asarray(field, dtype=np.float64)
    a = np.abs(vals)
    if p == 1:
        return integrate(a)
    if p == 2:
        return float(np.sqrt(integrate(a * a)))
    a2 = a * a
    return float(integrate(a2 * a2) ** 0.25)


def reconstruct_displacement(v: Field) -> Field:
    """u at the right cell edges, u(x_{i+1/2}) = h * sum_{j<=i} v_j; u(0) = 0 implied."""
    return Field(v.grid, v.grid.h * kernels.cumulative_sum(v.values), "u")


def displacement_gradient(u: Field) -> Field:
    """Inverse of :func:`reconstruct_displacement` (backward differences)."""
    edges = np.concatenate([[0.0], u.values])
    return Field(u.grid, np.diff(edges) / u.grid.h, "v")

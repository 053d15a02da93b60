import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasedual import dae
from phasedual.dae import (
    BranchAssignment,
    BranchId,
    NoRealRootError,
    PoleError,
    all_roots,
    assemble_assignment_solution,
    branch_field,
    g_eval,
    g_prime,
    h_tau_eval,
    h_tau_prime,
    solve_dae,
    verify_branch_optimality,
)
from phasedual.energies import singular_set
from phasedual.model import Field, Grid, MaterialParams, beta_field, integrate

EX = MaterialParams(1.0, 1.0, 3.0)
SQRT5 = math.sqrt(5.0)
SQRT65 = math.sqrt(65.0)


@st.composite
def admissible_params(draw):
    mu = draw(st.floats(0.05, 20.0))
    nu = draw(st.floats(0.05, 20.0))
    u = draw(st.floats(0.05, 10.0))
    alpha = math.sqrt(2.0 * mu * (1.0 + u) / nu)
    return MaterialParams(mu, nu, alpha)


def test_g_special_points():
    assert g_eval(-1.0, EX) == 0.0
    assert g_eval(-4.5, EX) == 0.0
    assert g_eval(EX.rho, EX) == pytest.approx(EX.eta, rel=1e-14)
    assert g_prime(EX.rho, EX) == 0.0 and g_prime(-1.0, EX) == 0.0
    assert g_prime(0.0, EX) == pytest.approx(20.0, rel=1e-15)


def test_g_prime_sign_pattern():
    assert g_prime(EX.rho - 1.0, EX) > 0
    assert g_prime(0.5 * (EX.rho - 1.0), EX) < 0
    assert g_prime(0.0, EX) > 0


def test_h_tau_pole_and_removable_point():
    assert h_tau_eval(-1.0, 0.0, EX) == -0.5
    with pytest.raises(PoleError):
        h_tau_eval(-1.0, SQRT5, EX)
    assert h_tau_eval(-2.0, SQRT5, EX) == pytest.approx(5.0 - 3.0 * SQRT5, abs=1e-14)


def test_h_tau_stationary_at_roots():
    for s in all_roots(5.0, EX).values():
        d = 1e-6
        fd = (h_tau_eval(s + d, SQRT5, EX) - h_tau_eval(s - d, SQRT5, EX)) / (2 * d)
        assert abs(fd) < 1e-7
        assert abs(h_tau_prime(s, SQRT5, EX)) < 1e-12


def test_example_roots():
    r = all_roots(5.0, EX)
    assert abs(r[BranchId.B1] - (SQRT65 - 9) / 4) <= 1e-12
    assert abs(r[BranchId.B2] + 2.0) <= 1e-12
    assert abs(r[BranchId.B3] + (SQRT65 + 9) / 4) <= 1e-12


def test_double_root_limits():
    assert solve_dae(0.0, "B1", EX) == -1.0
    assert solve_dae(0.0, "B2", EX) == -1.0
    assert solve_dae(0.0, "B3", EX) == -4.5
    assert solve_dae(EX.eta, 2, EX) == EX.rho
    assert solve_dae(EX.eta, BranchId.B3, EX) == EX.rho


def test_clamp_rule():
    assert solve_dae(EX.eta * (1 + 5e-13), "B2", EX) == EX.rho
    with pytest.raises(NoRealRootError):
        solve_dae(EX.eta * (1 + 1e-11), "B2", EX)
    with pytest.raises(ValueError):
        solve_dae(-1.0, "B1", EX)


def test_branch_parse():
    assert BranchId.parse("b2") is BranchId.B2
    assert BranchId.parse("3") is BranchId.B3
    assert BranchId.parse(1) is BranchId.B1
    with pytest.raises((KeyError, ValueError)):
        BranchId.parse("B4")


def test_branch_field_examples():
    g = Grid(50)
    z1 = branch_field(beta_field(g, 0.0, EX), "B1", EX)
    z3 = branch_field(beta_field(g, 0.0, EX), "B3", EX)
    assert np.all(z1.values == -1.0) and np.all(z3.values == -4.5)
    r = all_roots(SQRT5 * SQRT5, EX)
    for b in BranchId:
        assert np.all(branch_field(beta_field(g, SQRT5, EX), b, EX).values == r[b])
    beta = Field(g, np.where(np.arange(50) >= 17, 4.0, 1.0), "beta")
    with pytest.raises(NoRealRootError, match="cell 17") as info:
        branch_field(beta, "B2", EX)
    assert info.value.cell == 17


def test_assignment_solutions():
    g = Grid(40)
    beta = Field(g, np.linspace(0.0, 3.0, 40), "beta")
    all1 = assemble_assignment_solution(beta, BranchAssignment.uniform(g, "B1"), EX)
    assert np.array_equal(all1.values, branch_field(beta, "B1", EX).values)
    checker = BranchAssignment(g, np.where(np.arange(40) % 2 == 0, 1, 2))
    z = assemble_assignment_solution(beta, checker, EX)
    res = dae.dae_residual(z, beta, EX)
    assert np.max(np.abs(res)) <= 1e-12 * (1 + EX.eta)
    z1, z2 = branch_field(beta, 1, EX).values, branch_field(beta, 2, EX).values
    assert not np.array_equal(z.values, z1) and not np.array_equal(z.values, z2)
    bad = BranchAssignment.from_runs(g, [{"branch": "B3", "start": 0, "stop": 3}])
    big = Field(g, np.full(40, 4.0), "beta")
    with pytest.raises(NoRealRootError):
        assemble_assignment_solution(big, bad, EX)
    assert np.array_equal(BranchAssignment.from_runs(g, checker.to_runs()).branches, checker.branches)


def test_assignments_differing_on_k_cells_are_close():
    g = Grid(1000)
    beta = beta_field(g, SQRT5, EX)
    base = BranchAssignment.uniform(g, "B1")
    sep = max(abs(a - b) for a in all_roots(5.0, EX).values() for b in all_roots(5.0, EX).values())
    for k in (1, 10, 100):
        other = BranchAssignment.from_runs(g, [{"branch": "B2", "start": 0, "stop": k}])
        d = assemble_assignment_solution(beta, base, EX).values - assemble_assignment_solution(beta, other, EX).values
        assert math.sqrt(integrate(d * d)) <= sep * math.sqrt(k * g.h) * (1 + 1e-12)


def test_branch_optimality_examples():
    g = Grid(16)
    for b in (SQRT5, 0.0, 4.0):
        rep = verify_branch_optimality(beta_field(g, b, EX), EX, n_samples=1000)
        assert rep["violations"] == [] and rep["n_samples"] > 0


@settings(max_examples=200, deadline=None)
@given(admissible_params(), st.floats(0.0, 1.0))
def test_roots_ordered_and_accurate(params, frac):
    tau2 = frac * params.eta
    r = all_roots(tau2, params)
    assert set(r) == set(BranchId)
    s1, s2, s3 = r[BranchId.B1], r[BranchId.B2], r[BranchId.B3]
    slack = 1e-10
    assert params.zeta_floor - slack <= s3 <= params.rho + slack
    assert params.rho - slack <= s2 <= -params.mu + slack
    assert -params.mu - slack <= s1
    scale = max(tau2, params.eta)
    for s in (s1, s2, s3):
        assert abs(g_eval(s, params) - tau2) <= 1e-11 * scale


@settings(max_examples=100, deadline=None)
@given(admissible_params(), st.floats(1e-9, 1e6))
def test_above_eta_only_b1(params, excess):
    tau2 = params.eta * (1.0 + 1e-11) + excess
    s1 = solve_dae(tau2, "B1", params)
    assert abs(g_eval(s1, params) - tau2) <= 1e-11 * tau2
    for b in ("B2", "B3"):
        with pytest.raises(NoRealRootError):
            solve_dae(tau2, b, params)


@settings(max_examples=100, deadline=None)
@given(admissible_params(), st.floats(-30.0, 30.0))
def test_g_prime_matches_finite_differences(params, s):
    d = 1e-5 * (1 + abs(s))
    fd = (g_eval(s + d, params) - g_eval(s - d, params)) / (2 * d)
    gp = g_prime(s, params)
    assert abs(fd - gp) <= 1e-7 * (abs(gp) + g_eval(abs(s) + 1, params) / (1 + abs(s)) + 1)


@settings(max_examples=50, deadline=None)
@given(admissible_params(), st.floats(0.01, 0.99))
def test_h_tau_interior_extrema_solve_dae(params, frac):
    tau = math.sqrt(frac * params.eta)
    gap = 1e-3 * (1 + params.mu)
    sides = (np.linspace(params.zeta_floor, -params.mu - gap, 100001),
             np.linspace(-params.mu + gap, -params.mu + 4 * (1 + params.eta), 100001))
    roots = list(all_roots(tau * tau, params).values())
    found = 0
    for s in sides:
        h = dae.h_tau_array(s, tau, params)
        mid = h[1:-1]
        ext = np.flatnonzero(((mid > h[:-2]) & (mid > h[2:])) | ((mid < h[:-2]) & (mid < h[2:]))) + 1
        for i in ext:
            near = min(roots, key=lambda r: abs(r - s[i]))
            assert abs(near - s[i]) <= 2 * (s[1] - s[0])
            assert abs(g_eval(near, params) - tau * tau) <= 1e-9 * (1 + params.eta)
            found += 1
    assert found >= 1


@settings(max_examples=50, deadline=None)
@given(admissible_params(), st.integers(0, 2**32 - 1))
def test_assignment_output_in_a0(params, seed):
    rng = np.random.default_rng(seed)
    g = Grid(64)
    beta = Field(g, rng.uniform(-1, 1, 64) * math.sqrt(params.eta) * np.where(rng.random(64) < 0.2, 0.0, 1.0),
                 "beta")
    z = assemble_assignment_solution(beta, BranchAssignment(g, rng.integers(1, 4, 64)), params)
    assert np.all(z.values >= params.zeta_floor)
    assert singular_set(z, beta, params).is_well_posed

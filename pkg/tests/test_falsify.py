import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasedual import falsify as F
from phasedual.falsify import Verdict
from phasedual.model import Grid, LoadSpec, MaterialParams, compute_beta, compute_sigma

EX = MaterialParams(1.0, 1.0, 3.0)
SQRT5 = math.sqrt(5.0)


def test_registry_has_nine_named_scenarios():
    assert list(F.SCENARIOS) == [
        "prop1-divergence", "sup-infinite-3.9", "approach-3.10", "approach-3.11", "example-1",
        "global-min-3.9", "gap-obstruction-3.10", "p-classify", "weights-lemma",
    ]
    with pytest.raises(KeyError, match="known"):
        F.run_scenario("nope")


@pytest.mark.parametrize("name", list(F.SCENARIOS))
def test_every_packaged_scenario_matches(name):
    rep = F.run_scenario(name)
    assert rep.claims
    for c in rep.claims:
        assert c.anchor and isinstance(c.evidence, dict)
        assert c.observed in set(Verdict)
    assert rep.all_matched, [c.to_dict() for c in rep.claims if not c.matched]
    d = rep.to_dict()
    assert d["schema"] == "cdl-1"
    json.dumps(d, allow_nan=False)


def test_scenarios_are_deterministic():
    a = json.dumps(F.run_scenario("global-min-3.9", {"seed": 3}).to_dict(), sort_keys=True)
    b = json.dumps(F.run_scenario("global-min-3.9", {"seed": 3}).to_dict(), sort_keys=True)
    assert a == b


def test_kink_load_shape():
    g = Grid(1000)
    beta = compute_beta(compute_sigma(F.kink_load(EX, 0.5, 2.0), g), EX).values
    x = g.midpoints
    np.testing.assert_allclose(beta, 2.0 * np.maximum(x - 0.5, 0.0), atol=1e-14)


def test_prop1_growth_near_gamma_and_zero_beta_inconclusive():
    rep = F.prop1_divergence_demo(EX, F.constant_beta_load(EX, SQRT5))
    fit = rep.tables["fit"]
    assert abs(fit["slope"] / 5.0 - 1.0) <= 0.2 and fit["r2"] >= 0.99
    zero = F.prop1_divergence_demo(EX, F.constant_beta_load(EX, 0.0))
    c = zero.claims[0]
    assert c.observed is Verdict.INCONCLUSIVE and c.evidence["dual_finite_all_levels"]


def test_sup_infinite_rates_and_gamma_range():
    rep = F.sup_infinite_demo(EX, F.constant_beta_load(EX, 4.0), 0.1)
    ev = rep.claim("sup-Pd-over-A1^0-is-infinite").evidence
    assert ev["slope_weighted"] == pytest.approx(160.0, rel=0.01)
    assert ev["slope_dual"] == pytest.approx(80.0, rel=0.01)
    assert ev["all_in_A1_0"] and ev["lower_bounds_hold"]
    rows = rep.tables["sequence"]
    assert all(b["dual"] > a["dual"] for a, b in zip(rows, rows[1:]))
    for bad in (0.0, 3.5, -1.0):
        with pytest.raises(ValueError, match="gamma"):
            F.sup_infinite_demo(EX, F.constant_beta_load(EX, 4.0), bad)


def test_sup_infinite_decade_increase():
    rep = F.sup_infinite_demo(EX, F.constant_beta_load(EX, 4.0), 0.1, n_list=(10, 100, 1000), n_cells=2**17)
    d = [r["minus_int_beta2_over_zeta_mu"] for r in rep.tables["sequence"]]
    for a, b in zip(d, d[1:]):
        assert b - a >= 160.0 * math.log(10.0) * (1 - 1e-3)


def test_approach_drop_value():
    rep = F.approach_sequence_demo(EX, F.kink_load(EX, 0.5, 2.0), eps_list=(0.1,))
    row = rep.tables["sequence"][0]
    assert -row["diff_from_bar"] == pytest.approx(0.1775, abs=1e-12)


def test_approach_without_b0_is_inconclusive():
    rep = F.approach_sequence_demo(EX, F.constant_beta_load(EX, 1.0), eps_list=(0.1,))
    assert all(c.observed is Verdict.INCONCLUSIVE for c in rep.claims)


def test_approach_b2_eps_bound():
    with pytest.raises(ValueError, match="rho"):
        F.approach_sequence_demo(EX, F.kink_load(EX, 0.5, 2.0), eps_list=(3.0,), side="B2")


def test_classify_examples():
    beta = math.sqrt(EX.eta)
    cls = F.classify_p_critical(EX, beta)
    v0 = EX.alpha + beta / (EX.rho + EX.mu)
    c = min(cls, key=lambda c: abs(c.y - v0))
    assert c.verdict == "not-extremum"
    assert c.p3 == pytest.approx(3 * EX.nu * beta / (EX.rho + EX.mu), rel=1e-10)
    c0 = min(F.classify_p_critical(EX, SQRT5), key=lambda c: abs(c.y - (3 - SQRT5)))
    assert c0.verdict == "local-min" and c0.p2 == pytest.approx(4.0, abs=1e-12)
    cls0 = F.classify_p_critical(EX, 0.0)
    ys = sorted(c.y for c in cls0)
    np.testing.assert_allclose(ys, [3 - math.sqrt(7), 3.0, 3 + math.sqrt(7)], atol=1e-12)
    assert [c.verdict for c in sorted(cls0, key=lambda c: c.y)] == ["local-min", "local-max", "local-min"]


@settings(max_examples=100, deadline=None)
@given(st.floats(-8.0, 8.0))
def test_classification_follows_derivative_test(beta):
    for c in F.classify_p_critical(EX, beta):
        assert abs(c.p1) <= 1e-9 * (1 + abs(beta))
        if c.verdict == "local-min":
            assert c.p2 > 0
        elif c.verdict == "local-max":
            assert c.p2 < 0


@settings(max_examples=100, deadline=None)
@given(st.floats(-8.0, 8.0))
def test_classification_agrees_with_companion_roots(beta):
    sigma = beta + EX.mu * EX.alpha
    comp = F._newton_polish(F.p_critical_points_companion(sigma, EX)[0], sigma, EX)
    ours = sorted(c.y for c in F.classify_p_critical(EX, beta))
    for y in comp:
        assert min(abs(y - o) for o in ours) <= 1e-6 * (1 + abs(y))


def test_example1_rejects_subgrid_eps_and_reports_snap():
    with pytest.raises(ValueError, match="grid resolution"):
        F.example1_full(eps_list=(1e-5,), n_cells=1000)
    rep = F.example1_full(eps_list=(0.0123,), n_cells=1000)
    row = rep.tables["spikes"][0]
    assert row["eps_requested"] == 0.0123 and row["eps"] == 0.012
    assert row["delta_P"] == pytest.approx(-0.12, abs=1e-9)


def test_example1_records_printed_constant_discrepancy():
    rep = F.example1_full()
    note = rep.notes[0]
    assert note["oracle"] == pytest.approx(5 - 3 * SQRT5, abs=1e-15)
    assert note["discrepancy"] == pytest.approx(5.0, abs=1e-12)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_global_min_across_seeds(seed):
    rep = F.global_min_check(EX, LoadSpec.poly([2.0], 7.0), n_random=300, seed=seed)
    assert rep.all_matched


def test_gap_obstruction_values():
    rep = F.gap_obstruction_demo(EX, F.kink_load(EX, 0.25, 2.0))
    assert rep.claim("(3.10)-natural-fill").evidence["gap"] == pytest.approx(49 / 32, abs=1e-9)
    assert rep.claim("(3.10)-corrected-fill").observed is Verdict.CONFIRMED


def test_weights_geometric_and_zero():
    n = np.arange(1, 41, dtype=float)
    res = F.construct_diverging_weights(2.0**-n, 2.0**-40)
    assert res.betas[:2].tolist() == [1.0, 1.0]
    assert res.betas[2:].tolist() == (n[2:] - 2).tolist()
    assert res.non_decreasing and res.bounded and res.bound == pytest.approx(3.0)
    zero = F.construct_diverging_weights(np.zeros(50))
    assert zero.partial_sums[-1] == 0.0 and zero.non_decreasing
    assert zero.n_k[0] == 1


def test_weights_flag_non_summable_prefix():
    n = np.arange(1, 10001, dtype=float)
    assert F.construct_diverging_weights(1.0 / n).inconclusive
    assert not F.construct_diverging_weights(1.0 / n**2).inconclusive
    with pytest.raises(ValueError):
        F.construct_diverging_weights([-1.0, 0.5])


@settings(max_examples=50, deadline=None)
@given(st.floats(1.1, 4.0), st.integers(100, 5000))
def test_weights_bounded_for_power_laws(p, n):
    k = np.arange(1, n + 1, dtype=float)
    a = k**-p
    tail = n ** (1 - p) / (p - 1)  # integral bound on the omitted tail
    res = F.construct_diverging_weights(a, tail)
    assert res.non_decreasing and res.bounded


@settings(max_examples=150, deadline=None)
@given(st.floats(0.1, 5.0), st.floats(0.1, 5.0), st.floats(0.05, 5.0), st.floats(-2.0, 2.0))
def test_classified_points_are_roots_of_p_prime(mu, nu, u, frac):
    params = MaterialParams(mu, nu, math.sqrt(2 * mu * (1 + u) / nu))
    beta = frac * math.sqrt(params.eta)
    cls = F.classify_p_critical(params, beta)
    expected = 3 if abs(frac) < 1 - 1e-6 else (1 if abs(frac) > 1 + 1e-6 else None)
    if expected is not None:
        assert len(cls) == expected
    scale = params.mu * params.alpha + params.nu * params.alpha**3 + abs(beta)
    for c in cls:
        assert abs(c.p1) <= 1e-10 * scale

import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from simmabv import criteria as cr
from simmabv import simulate as sim
from simmabv.kernels import Fractional, Indicator, PiecewiseLinear, SmoothBump
from simmabv.noise_models import FiniteAtoms, Stable, TemperedStable
from simmabv.numerics import SeedSpec

ORACLE_DF_BUMP_STABLE15 = 17.4349801012670823760778944159


def single(kernel, **kw):
    return cr.MixedModel.single(kernel, **kw)


def test_bv_levels_of_trivial_paths():
    assert np.all(sim.bv_levels(np.full(2 ** 6 + 1, -2.0)) == 0)
    np.testing.assert_allclose(sim.bv_levels(np.arange(65) / 64), 1.0, atol=1e-15)


def test_indicator_atoms_path_counts_jumps():
    model = single(Indicator(0, 1), rho=FiniteAtoms(((1.0, 2.0),)))
    plan = sim.SimPlan(n_max=12)
    hits = 0
    for r in range(20):
        p = sim.sample_path(model, plan, SeedSpec(3, (r,)))
        hits += p.levels[-1] == sum(p.jump_counts)
    # two events in one grid cell could cancel; that has probability ~1e-3 per path
    assert hits >= 19


def test_drift_path_is_linear():
    # atoms with a negligible rate give a jump-free path carrying the drift
    rho = FiniteAtoms(((1.0, 1e-12),))
    model = single(Fractional(0.0), rho=rho, theta=0.7)
    p = sim.sample_path(model, sim.SimPlan(n_max=8), SeedSpec(1))
    assert sum(p.jump_counts) == 0
    np.testing.assert_allclose(p.values, 0.7 * p.grid, atol=1e-12)
    np.testing.assert_allclose(p.levels, 0.7, atol=1e-12)


def test_same_seed_bit_identical_and_seeds_differ(stable15):
    model = single(SmoothBump(), rho=stable15)
    plan = sim.SimPlan(n_max=8, series_terms=2000)
    a = sim.sample_path(model, plan, SeedSpec(5)).values
    b = sim.sample_path(model, plan, SeedSpec(5)).values
    c = sim.sample_path(model, plan, SeedSpec(6)).values
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, c)


def test_same_mode_paths_start_at_zero(stable15, tempered12):
    for model in (single(SmoothBump(), rho=stable15, sigma2=0.5), single(Fractional(0.25), rho=tempered12)):
        assert sim.sample_path(model, sim.SimPlan(n_max=6, series_terms=2000)).values[0] == pytest.approx(0, abs=1e-12)


def test_sample_path_rejects_undefined_process(stable15):
    with pytest.raises(ValueError, match="does not exist"):
        sim.sample_path(single(Fractional(0.6), rho=stable15), sim.SimPlan(n_max=4))


def test_plan_validation():
    with pytest.raises(ValueError):
        sim.SimPlan(n_max=0)
    with pytest.raises(ValueError):
        sim.SimPlan(window=(1.0, -1.0))


def test_diagnostics_report_truncation(stable15):
    s = sim.Sampler(single(Fractional(0.25), rho=TemperedStable(1, 1, 1.2, 1, 1)), sim.SimPlan(n_max=6))
    (d,) = s.diagnostics["components"]
    assert d["cutoff"] > 0
    assert d["omitted_small_jump_variance"] > 0
    assert math.isfinite(d["small_jump_residual_bv"])
    assert math.isfinite(d["window_residual_bv"])


def test_brownian_increment_small_run():
    model = single(Fractional(0.0), sigma2=1.0)
    est = sim.mc_expected_variation(model, sim.SimPlan(n_max=4), 2, 2000)
    assert abs(est.mean - 2 * math.sqrt(2 / math.pi)) < 4 * est.se


def test_mc_needs_enough_replicas():
    with pytest.raises(ValueError):
        sim.mc_expected_variation(single(Fractional(0.0), sigma2=1.0), sim.SimPlan(n_max=4), 2, 10)


def test_compute_in_examples(stable15):
    model = single(Indicator(0, 1), rho=stable15)
    assert sim.compute_In(model, 0) == pytest.approx(16.0, rel=1e-10)
    assert sim.compute_In(model, 1) == pytest.approx(16 * math.sqrt(2), rel=1e-10)
    flat = PiecewiseLinear(((0.0, 1.0), (1.0, 1.0)))
    assert sim.compute_In(single(flat, rho=stable15), 3) == 0.0


def test_compute_in_indicator_quadrature_route(stable15):
    # a generic kernel equal to the indicator must reproduce the closed form
    model = single(Indicator(0, 1), rho=stable15)
    lin = PiecewiseLinear(((0.0, 0.0), (1e-9, 1.0), (1.0, 1.0), (1.0 + 1e-9, 0.0)))
    assert sim.compute_In(single(lin, rho=stable15), 2) == pytest.approx(sim.compute_In(model, 2), rel=1e-4)


def test_compute_in_converges_to_df(stable15):
    model = single(SmoothBump(), rho=stable15)
    assert sim.compute_In(model, 10) == pytest.approx(ORACLE_DF_BUMP_STABLE15, rel=1e-2)


def test_l1_bounds_example():
    lo, hi = sim.l1_bounds(32.0)
    assert lo == pytest.approx(math.sqrt(32) / 4) and hi == 40.0
    assert sim.l1_bounds(0.0) == (0.0, 0.0)


def test_sandwich_smooth_bump_atoms(pm_atoms):
    (rep,) = sim.verify_L1_sandwich(single(SmoothBump(), rho=pm_atoms), 4, 500)
    assert rep.inside


def test_sandwich_needs_symmetric_jump_noise():
    with pytest.raises(ValueError):
        sim.verify_L1_sandwich(single(SmoothBump(), sigma2=1.0), 2, 200)


def test_zero_one_bv_kernel_always_bounded(pm_atoms):
    e = sim.zero_one_experiment(single(SmoothBump(), rho=pm_atoms), sim.SimPlan(n_max=10), 200)
    assert e.fraction_bounded == 1.0


def test_weierstrass_model_shape():
    model = sim.weierstrass_model()
    (comp, pair), = list(model)
    assert pair.mode == "zero" and comp.theta == 1.0
    assert sim.component_window(pair, sim.SimPlan()) == (-1.0, 1.0)


@pytest.mark.parametrize("model", [
    single(SmoothBump(-0.3, 0.7), rho=Stable(1, 2, 1.5), mode="zero"),
    single(PiecewiseLinear(((0.0, 0.5), (1.0, 2.0), (2.0, 1.0))), rho=FiniteAtoms(((1.0, 3.0), (-2.0, 1.0))),
           theta=0.2, mode="zero"),
], ids=["bump", "piecewise-linear"])
def test_prefix_sum_jump_path_matches_direct_evaluation(model):
    s = sim.Sampler(model, sim.SimPlan(n_max=8, series_terms=2000))
    fast = s.sample(SeedSpec(4)).values
    s.parts = [dataclasses.replace(p, poly=None) for p in s.parts]
    direct = s.sample(SeedSpec(4)).values
    np.testing.assert_allclose(fast, direct, rtol=0, atol=1e-10)


FAMILIES = [
    single(Fractional(0.25), rho=TemperedStable(1, 1, 1.2, 1, 1)),
    single(SmoothBump(), rho=Stable(1, 1, 1.5), sigma2=0.3),
    single(Indicator(0, 1), rho=FiniteAtoms(((1.0, 1.0), (-0.5, 2.0)))),
    single(Fractional(0.0), sigma2=1.0),
]


@settings(max_examples=15)
@given(st.integers(0, 2 ** 32), st.sampled_from(range(len(FAMILIES))))
def test_levels_monotone_property(seed, which):
    p = sim.sample_path(FAMILIES[which], sim.SimPlan(n_max=8, series_terms=1000), SeedSpec(seed))
    assert np.all(np.diff(p.levels) >= 0)

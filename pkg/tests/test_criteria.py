import pytest
from hypothesis import given, strategies as st

from simmabv import criteria as cr
from simmabv.kernels import Fractional, Indicator, KernelPair, PiecewiseLinear, SmoothBump, WeierstrassBump
from simmabv.noise_models import FiniteAtoms, MixedNoise, NoiseComponent, Stable

# mpmath oracles, frozen
ORACLE_SIM_CAL_025 = 0.94494078742115487358  # head integral desingularised by s = v^(1/α)
ORACLE_DF_BUMP_STABLE15 = 17.4349801012670823760778944159
ORACLE_DF_BUMP_TEMPERED12 = 4.77226750714826665129078286911
ORACLE_TS12_ABS_MOMENT_4_3 = 14.0811582428224912090005504857


def single(kernel, **kw):
    return cr.MixedModel.single(kernel, **kw)


def test_cf_examples():
    assert cr.compute_Cf(single(SmoothBump(), rho=Stable(1, 1, 1.5))).value == 0.0
    assert cr.compute_Cf(single(SmoothBump(), sigma2=1.0)).value == pytest.approx(256 / 105, rel=1e-12)
    assert cr.compute_Cf(single(Fractional(0.25), sigma2=1.0)).is_divergent


def test_df_examples(stable15, tempered12):
    assert cr.compute_Df(single(SmoothBump(), rho=stable15)).value == pytest.approx(
        ORACLE_DF_BUMP_STABLE15, rel=1e-10)
    assert cr.compute_Df(single(SmoothBump(), rho=tempered12)).value == pytest.approx(
        ORACLE_DF_BUMP_TEMPERED12, rel=1e-8)
    flat = PiecewiseLinear(((0.0, 1.0), (1.0, 1.0)))
    assert cr.compute_Df(single(flat, rho=stable15)).value == 0.0
    assert cr.compute_Df(single(Indicator(0, 1), rho=stable15)).is_indeterminate


def test_df_fractional_matches_moment(tempered12):
    st = cr.compute_Df(single(Fractional(0.25), rho=tempered12))
    assert st.value == pytest.approx(cr.fractional_xi_factor(0.25) * ORACLE_TS12_ABS_MOMENT_4_3, rel=1e-10)


def test_necessary_integral_examples(tempered12, tempered15):
    (ok,) = cr.necessary_integral(single(Fractional(0.25), rho=tempered12))
    assert ok.weighted.is_finite and ok.fdot_int.is_finite
    (bad,) = cr.necessary_integral(single(Fractional(0.25), rho=tempered15))
    assert bad.fdot_int.is_divergent
    flat = PiecewiseLinear(((0.0, 2.0), (1.0, 2.0)))
    (zero,) = cr.necessary_integral(single(flat, rho=tempered15))
    assert zero.fdot_int.value == 0.0


def test_sim_cal_spot_value():
    assert cr.sim_cal_closed(0.25, 1.0) == pytest.approx(ORACLE_SIM_CAL_025, rel=1e-12)
    assert cr.sim_cal_quadrature(0.25, 1.0) == pytest.approx(ORACLE_SIM_CAL_025, rel=1e-8)


@given(st.floats(0.05, 0.45), st.floats(0.1, 5.0))
def test_sim_cal_quadrature_matches_closed_form(alpha, x):
    assert cr.sim_cal_quadrature(alpha, x) == pytest.approx(cr.sim_cal_closed(alpha, x), rel=1e-6)


def test_fractional_condition_examples(tempered12, stable15):
    rep = cr.fractional_condition(single(Fractional(0.25), rho=tempered12))
    assert rep.sufficient.value == pytest.approx(4 * ORACLE_TS12_ABS_MOMENT_4_3, rel=1e-10)
    assert rep.example_verdict == cr.FINITE_VARIATION
    assert all(abs(c - q) <= 1e-6 * c for _, _, c, q in rep.identity_checks)
    rej = cr.fractional_condition(single(Fractional(0.6), rho=stable15))
    assert rej.example_verdict == cr.INFINITE_VARIATION
    assert any("alpha >= 1/2" in e for e in rej.evidence)


def test_fractional_condition_two_components(tempered12):
    comps = (NoiseComponent(rho=tempered12), NoiseComponent(weight=0.5, rho=tempered12))
    model = cr.MixedModel(MixedNoise(comps), (KernelPair(Fractional(0.2)), KernelPair(Fractional(0.4))))
    rep = cr.fractional_condition(model)
    assert len(rep.necessary) == 2 and rep.sufficient.is_finite


def test_existence_examples(stable15, tempered12, pm_atoms):
    assert cr.existence_check(single(Fractional(0.6), rho=stable15)).status == cr.FAILS_K
    assert cr.existence_check(single(Indicator(0, 1), rho=pm_atoms)).status == cr.EXISTS
    assert cr.existence_check(single(SmoothBump(), rho=tempered12)).status == cr.EXISTS
    assert cr.existence_check(single(Fractional(0.25), rho=stable15)).status == cr.EXISTS
    # an atom at 1 is centred under the truncation x/(|x| ∨ 1); one at 2 is not
    assert cr.existence_check(single(Fractional(0.25), rho=FiniteAtoms(((1.0, 1.0),)))).status == cr.EXISTS
    skew = FiniteAtoms(((2.0, 1.0),))
    assert cr.existence_check(single(Fractional(0.25), rho=skew)).status == cr.FAILS_B


def test_verdict_examples(tempered12, stable15):
    v = cr.verdict(single(Fractional(0.25), rho=tempered12))
    assert (v.status, v.theorem) == (cr.FINITE_VARIATION, "Sufficiency")
    v = cr.verdict(single(Indicator(0, 1), rho=stable15))
    assert (v.status, v.theorem) == (cr.INFINITE_VARIATION, "Necessity")
    v = cr.verdict(single(Fractional(0.25), sigma2=1.0))
    assert (v.status, v.theorem) == (cr.INFINITE_VARIATION, "Necessity")
    assert v.evidence()["C_f"]["status"] == "Divergent"


@pytest.mark.parametrize("case", cr.canonical_models(), ids=lambda c: c.name)
def test_canonical_table(case):
    v = cr.verdict(case.model)
    assert v.status == case.expected
    assert v.theorem == case.theorem
    if case.expected == cr.INDETERMINATE:
        assert any("step function" in n for n in v.notes)


def test_verdict_does_not_conclude_when_process_undefined(stable15):
    v = cr.verdict(single(Fractional(0.6), rho=stable15))
    assert v.status == cr.INDETERMINATE and v.branch == "existence"


def test_corollary_bound_examples():
    assert cr.corollary_bound(0.0, 0.0) == 0.0
    assert cr.corollary_bound(256 / 105, 0.0) == pytest.approx(0.7978845608 * 1.5614401167, rel=1e-9)
    assert cr.corollary_bound(0.0, 4.0) == 5.0
    with pytest.raises(ValueError):
        cr.corollary_bound(-1.0, 0.0)


@given(st.floats(0, 1e3), st.floats(0, 1e3), st.floats(0, 10), st.floats(0, 10))
def test_corollary_bound_monotone(c, d, dc, dd):
    assert cr.corollary_bound(c + dc, d + dd) >= cr.corollary_bound(c, d)


def test_expected_bv_bound_preconditions(tempered12, stable15):
    v = cr.expected_bv_bound(single(SmoothBump(), rho=tempered12))
    assert v == pytest.approx(cr.corollary_bound(0.0, ORACLE_DF_BUMP_TEMPERED12), rel=1e-8)
    with pytest.raises(cr.PreconditionError, match="mean zero"):
        cr.expected_bv_bound(single(SmoothBump(), rho=tempered12, theta=1.0))
    with pytest.raises(cr.PreconditionError):
        cr.expected_bv_bound(single(Indicator(0, 1), rho=stable15))


def test_zero_one_examples(stable15, pm_atoms):
    z = cr.zero_one_classify(single(WeierstrassBump(), rho=pm_atoms))
    assert (z.global_law, z.local_law) == (cr.PROBABILITY_ZERO, cr.NOT_COVERED)
    z = cr.zero_one_classify(single(SmoothBump(), rho=pm_atoms))
    assert (z.local_law, z.via) == ("Holds", "a")
    z = cr.zero_one_classify(single(Indicator(0, 1), rho=stable15))
    assert (z.local_law, z.via) == ("Holds", "a")
    z = cr.zero_one_classify(single(WeierstrassBump(), rho=stable15))
    assert (z.global_law, z.local_law, z.via) == (cr.PROBABILITY_ZERO, "Holds", "b")


def test_mixed_model_needs_one_pair_per_component(stable15):
    with pytest.raises(ValueError):
        cr.MixedModel(MixedNoise((NoiseComponent(rho=stable15),)), ())

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from simmabv.kernels import (Fractional, Indicator, KernelPair, NotAbsolutelyContinuous, PiecewiseLinear,
                             SmoothBump, WeierstrassBump, kernel_from_dict, kstar, section_bv)
from simmabv.numerics import integrate, variation_levels

KERNELS = [Fractional(0.25), Fractional(0.0), Indicator(0.0, 1.0), SmoothBump(-1, 1),
           SmoothBump(-0.4, 0.4), WeierstrassBump(), PiecewiseLinear(((0.0, 0.0), (1.0, 2.0), (2.0, 1.0)))]


def test_eval_examples():
    assert Fractional(0.5)(4.0) == 2.0
    assert Fractional(0.0)(-1.0) == 0.0
    assert Fractional(0.0)(0.0) == 0.0
    assert Fractional(0.0)(3.0) == 1.0
    assert Indicator(0, 1)(0.5) == 1.0
    assert Indicator(0, 1)(1.0) == 1.0 and Indicator(0, 1)(1.5) == 0.0


def test_derivative_examples():
    assert Fractional(0.25).derivative(1.0) == 0.25
    assert SmoothBump(-1, 1).derivative(0.0) == 0.0
    with pytest.raises(NotAbsolutelyContinuous):
        Indicator(0, 1).derivative(0.3)
    with pytest.raises(NotAbsolutelyContinuous):
        WeierstrassBump().derivative(0.3)


def test_is_ac_metadata():
    assert Fractional(0.25).is_ac and SmoothBump().is_ac
    assert not Fractional(0.0).is_ac and not Indicator(0, 1).is_ac and not WeierstrassBump().is_ac


@pytest.mark.parametrize("k", [Fractional(0.25), SmoothBump(-1, 1), SmoothBump(-0.3, 0.7),
                               PiecewiseLinear(((0.0, 0.0), (1.0, 2.0), (2.0, 1.0)))],
                         ids=lambda k: k.family)
def test_derivative_integrates_back(k):
    for a, b in [(0.1, 0.9), (0.3, 1.7)]:
        pts = [p for p in k.breakpoints() if a < p < b]
        edges = [a, *pts, b]
        total = math.fsum(integrate(lambda s: float(k.derivative(s)), x, y).value
                          for x, y in zip(edges, edges[1:]))
        assert total == pytest.approx(float(k(b)) - float(k(a)), abs=1e-10)


# three terms keep the Weierstrass integrand resolvable by quadrature
@pytest.mark.parametrize("k", KERNELS[:5] + [WeierstrassBump(terms=3), KERNELS[6]], ids=lambda k: k.family)
def test_antiderivative_matches_quadrature(k):
    a, b = 0.2, 0.9
    pts = [p for p in k.breakpoints() if a < p < b]
    edges = [a, *pts, b]
    quad = math.fsum(integrate(lambda s: float(k(s)), x, y).value for x, y in zip(edges, edges[1:]))
    diff = float(k.antiderivative(b)) - float(k.antiderivative(a))
    assert diff == pytest.approx(quad, rel=1e-8, abs=1e-12)


def test_weierstrass_validation_and_support():
    w = WeierstrassBump()
    assert w(-0.1) == 0.0 and w(1.2) == 0.0 and w(0.0) == 0.0
    with pytest.raises(ValueError):
        WeierstrassBump(b=12)
    with pytest.raises(ValueError):
        WeierstrassBump(a=0.5, b=7)


def test_section_bv_examples():
    sec = section_bv(Fractional(0.5), 0.0, 1.0)
    assert sec.exact and sec.value == 1.0
    sec = section_bv(Indicator(0, 1), -0.5, 0.5)
    assert sec.exact and sec.value == 1.0


def test_weierstrass_section_diverges():
    sec = section_bv(WeierstrassBump(), 0.25, 0.5)
    assert sec.divergent and not sec.exact
    assert all(b >= a for a, b in zip(sec.levels, sec.levels[1:]))


def test_weierstrass_growth_confirmed_with_more_terms():
    # oracle: the same partial sum with more terms grows at least as fast at fine levels
    t = 0.25 + 0.25 * np.arange(2 ** 12 + 1) / 2 ** 12
    lv20 = variation_levels(WeierstrassBump(terms=20)(t), 12)
    lv30 = variation_levels(WeierstrassBump(terms=30)(t), 12)
    assert lv20[-1] > 10 * lv20[4]
    assert lv30[-1] >= 0.9 * lv20[-1]


def test_kstar_examples():
    assert kstar(Fractional(0.25)).value == pytest.approx(1.0)
    assert kstar(Indicator(0, 1)).value == 1.0
    assert kstar(SmoothBump(-0.4, 0.4)).value == pytest.approx(2.0)
    assert kstar(WeierstrassBump()).divergent


def test_kernel_pair_modes():
    k = Fractional(0.25)
    same, zero = KernelPair(k, "same"), KernelPair(k, "zero")
    assert same.phi(0.0, -0.5) == 0.0
    assert zero.phi(0.0, -0.5) == pytest.approx(0.5 ** 0.25)
    with pytest.raises(ValueError):
        KernelPair(k, "other")


@pytest.mark.parametrize("k", KERNELS, ids=lambda k: k.family)
def test_roundtrip_dict(k):
    assert kernel_from_dict(k.to_dict()) == k


@given(st.floats(0.0, 0.49), st.floats(-3.0, 3.0), st.floats(0.05, 2.0))
def test_fractional_section_variation_is_increment(alpha, s, width):
    # the kernel is monotone, so its variation on [a, b] is f(b) - f(a)
    k = Fractional(alpha)
    sec = section_bv(k, s, s + width)
    assert sec.value == pytest.approx(float(k(s + width)) - float(k(s)), abs=1e-12)


@given(st.floats(-2.0, 2.0), st.floats(0.1, 3.0))
def test_smooth_bump_section_variation_bounded_by_twice_peak(a, width):
    k = SmoothBump(-1, 1)
    sec = section_bv(k, a, a + width)
    assert 0 <= sec.value <= 2.0 + 1e-12
    pts = a + width * np.arange(2 ** 10 + 1) / 2 ** 10
    assert variation_levels(k(pts), 10)[-1] <= sec.value + 1e-12

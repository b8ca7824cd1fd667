"""Finite-variation criteria for mixed moving averages.

Sufficiency and necessity integrals, the existence check, the expected-BV
bound, the decision tree producing a :class:`Verdict`, and the zero-one law
classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import noise_models as nm
from .kernels import (Fractional, Indicator, Kernel, KernelPair, PiecewiseLinear,
                      SmoothBump)
from .noise_models import (FiniteAtoms, MixedNoise, NoiseComponent, Stable,
                           TabulatedTail, TemperedStable)
from .numerics import (Divergent, Finite, Indeterminate, NoConvergence, Status,
                       detect_divergence, integrate, status_sum)

INF = math.inf

FINITE_VARIATION = "FiniteVariation"
INFINITE_VARIATION = "InfiniteVariation"
INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class MixedModel:
    noise: MixedNoise
    kernels: tuple[KernelPair, ...]
    interval: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        kernels = tuple(self.kernels)
        if len(kernels) != len(self.noise):
            raise ValueError("one kernel pair per noise component is required")
        object.__setattr__(self, "kernels", kernels)

    @classmethod
    def single(cls, kernel: Kernel, *, rho=None, sigma2=0.0, theta=0.0, weight=1.0,
               mode="same") -> "MixedModel":
        comp = NoiseComponent(weight, theta, sigma2, rho)
        return cls(MixedNoise((comp,)), (KernelPair(kernel, mode),))

    def __iter__(self):
        return iter(zip(self.noise.components, self.kernels))

    @property
    def weights(self) -> list[float]:
        return [c.weight for c in self.noise]


# --- kernel-side integrals ---------------------------------------------------

def _not_ac(k: Kernel) -> Indeterminate:
    return Indeterminate(f"NotAC: {k.family} kernel has no derivative")


def _support_pieces(k: Kernel) -> list[tuple[float, float]]:
    lo, hi = k.support()
    pts = sorted({p for p in k.breakpoints() if lo < p < hi})
    edges = [lo, *pts, hi]
    return list(zip(edges[:-1], edges[1:]))


def _quad_over_support(k: Kernel, fn) -> Status:
    parts = []
    for lo, hi in _support_pieces(k):
        if math.isinf(lo) or math.isinf(hi):
            parts.append(detect_divergence(fn, lo, hi))
            continue
        try:
            parts.append(Finite(integrate(fn, lo, hi).value))
        except NoConvergence:
            parts.append(detect_divergence(fn, lo, hi))
    return status_sum(parts)


def derivative_power_integral(k: Kernel, p: float) -> Status:
    """∫ |ḟ(s)|^p ds."""
    if not k.is_ac:
        return _not_ac(k)
    if isinstance(k, Fractional):
        # α^p s^{p(α-1)} is never integrable over (0, ∞)
        return Divergent("at s=0" if p * (1 - k.alpha) >= 1 else "at s=+inf")
    if isinstance(k, SmoothBump):
        h = k.half_width
        return Finite(4 ** p * h ** (1 - p) * special.beta((p + 1) / 2, p + 1))
    if isinstance(k, PiecewiseLinear):
        xs, ys = k.xs, k.ys
        slopes = np.diff(ys) / np.diff(xs)
        return Finite(math.fsum((np.abs(slopes) ** p * np.diff(xs)).tolist()))
    return _quad_over_support(k, lambda s: abs(float(k.derivative(s))) ** p)


def fractional_xi_factor(alpha: float) -> float:
    """α^{1/(1-α)} (1/α + 1/(1-2α)) for α ∈ (0, 1/2), else ∞."""
    if not 0 < alpha < 0.5:
        return INF
    return alpha ** (1 / (1 - alpha)) * (1 / alpha + 1 / (1 - 2 * alpha))


def sim_cal_closed(alpha: float, x: float) -> float:
    """∫ (|ḟx|² ∧ |ḟx|) ds for ḟ = α s₊^{α-1}, closed form."""
    return abs(x) ** (1 / (1 - alpha)) * fractional_xi_factor(alpha)


def sim_cal_quadrature(alpha: float, x: float) -> float:
    """The same integral by direct quadrature, split where |ḟx| = 1."""
    if x == 0:
        return 0.0
    ax = abs(x)
    s_star = (alpha * ax) ** (1 / (1 - alpha))

    def big(s):
        return alpha * ax * s ** (alpha - 1)

    def small(s):
        return (alpha * ax) ** 2 * s ** (2 * alpha - 2)

    return integrate(big, 0.0, s_star).value + integrate(small, s_star, INF).value


def xi_integral(k: Kernel, rho, weighted: bool = False) -> Status:
    """∫ ξ(ḟ(s)) ds, or with ``weighted`` the (1 ∧ x^{-2})-weighted version."""
    if not k.is_ac:
        return _not_ac(k)
    if rho is None:
        return Finite(0.0)
    if isinstance(k, Fractional):
        factor = fractional_xi_factor(k.alpha)
        if factor == INF:
            return Divergent("at s=+inf (alpha >= 1/2)")
        am = nm.abs_moment(rho, 1 / (1 - k.alpha), weighted)
        if not am.finite:
            return Divergent(f"moment of order {1 / (1 - k.alpha):.6g} diverges {am.cause}")
        return Finite(factor * am.value)
    if isinstance(rho, Stable) and not weighted:
        base = derivative_power_integral(k, rho.alpha)
        if not base.is_finite:
            return base
        if base.value == 0:
            return Finite(0.0)
        if rho.alpha <= 1:
            return Divergent("xi is infinite for stable index <= 1")
        return Finite(rho.xi_constant * base.value)
    xi_fn = nm.xi_weighted if weighted else nm.xi
    return _quad_over_support(k, lambda s: xi_fn(rho, float(k.derivative(s))))


# --- sufficiency / necessity integrals ---------------------------------------

def component_Cf(comp: NoiseComponent, pair: KernelPair) -> Status:
    if not pair.f.is_ac:
        return _not_ac(pair.f)
    if comp.sigma2 == 0:
        return Finite(0.0)
    st = derivative_power_integral(pair.f, 2.0)
    return Finite(comp.sigma2 * st.value) if st.is_finite else st


def component_Df(comp: NoiseComponent, pair: KernelPair) -> Status:
    return xi_integral(pair.f, comp.rho, weighted=False)


def compute_Cf(model: MixedModel) -> Status:
    """Σ w σ² ∫ |ḟ|² ds."""
    return status_sum([component_Cf(c, p) for c, p in model], model.weights)


def compute_Df(model: MixedModel) -> Status:
    """Σ w ∫ ξ(ḟ(s)) ds."""
    return status_sum([component_Df(c, p) for c, p in model], model.weights)


@dataclass(frozen=True)
class NecessaryIntegrals:
    weighted: Status
    fdot_int: Status


def necessary_integral(model: MixedModel) -> tuple[NecessaryIntegrals, ...]:
    """Per component: the (1 ∧ x^{-2})-weighted ξ integral and the plain one."""
    return tuple(NecessaryIntegrals(xi_integral(p.f, c.rho, weighted=True),
                                    xi_integral(p.f, c.rho, weighted=False))
                 for c, p in model)


# --- superpositions of fractional kernels ------------------------------------

@dataclass(frozen=True)
class FractionalReport:
    sufficient: Status
    necessary: tuple[Status, ...]
    example_verdict: str
    evidence: tuple[str, ...]
    identity_checks: tuple[tuple[float, float, float, float], ...]


def fractional_condition(model: MixedModel, check_xs=(0.5, 1.0, 2.0)) -> FractionalReport:
    """Moment conditions for a superposition of fractional kernels in SIMA mode.

    For each component the exponent is p = 1/(1-α); the sufficient condition
    is Σ w ∫|x|^p ρ / (1/2 - α) < ∞ and the per-component necessary one is
    ∫|x|^p ρ < ∞.  With finitely many components these decide finite
    variation exactly together with σ² = 0 and α ∈ [0, 1/2).
    """
    evidence, necessary, terms, checks = [], [], [], []
    fv = True
    for i, (comp, pair) in enumerate(model):
        k = pair.f
        if not isinstance(k, Fractional) or pair.mode != "same":
            raise ValueError("fractional_condition needs fractional kernels with f0 = f")
        a = k.alpha
        if comp.sigma2 > 0:
            fv = False
            evidence.append(f"component {i}: sigma2 > 0")
        if not 0 <= a < 0.5:
            fv = False
            evidence.append(f"component {i}: alpha = {a:g} outside [0, 1/2)"
                            + (" (alpha >= 1/2)" if a >= 0.5 else ""))
            necessary.append(Divergent("alpha outside [0, 1/2)"))
            terms.append(Divergent("alpha outside [0, 1/2)"))
            continue
        p = 1 / (1 - a)
        am = nm.abs_moment(comp.rho, p) if comp.rho is not None else nm.AbsMoment(0.0)
        st = Finite(am.value) if am.finite else Divergent(am.cause)
        necessary.append(st)
        terms.append(Finite(am.value / (0.5 - a)) if am.finite else st)
        if not am.finite:
            fv = False
            evidence.append(f"component {i}: moment of order {p:.6g} diverges {am.cause}")
        if a > 0:
            for x in check_xs:
                checks.append((a, x, sim_cal_closed(a, x), sim_cal_quadrature(a, x)))
    sufficient = status_sum(terms, model.weights)
    return FractionalReport(sufficient, tuple(necessary),
                            FINITE_VARIATION if fv else INFINITE_VARIATION,
                            tuple(evidence), tuple(checks))


# --- existence ---------------------------------------------------------------

EXISTS, FAILS_K, FAILS_B = "Exists", "FailsK", "FailsB"


@dataclass(frozen=True)
class ExistenceResult:
    status: str
    reasons: tuple[str, ...] = ()

    @property
    def exists(self) -> bool:
        return self.status == EXISTS


def small_jump_exponent(comp: NoiseComponent) -> float:
    """κ with K(x) ≍ |x|^κ as x → 0."""
    rho = comp.rho
    if comp.sigma2 > 0 or rho is None:
        return 2.0
    if isinstance(rho, Stable):
        return rho.alpha
    if isinstance(rho, TabulatedTail):
        p = rho.tail_exponent
        return 2.0 if p is None or p <= -2 else -p
    return 2.0


def _compact(pair: KernelPair) -> bool:
    lo, hi = pair.f.support()
    if math.isfinite(lo) and math.isfinite(hi):
        return True
    if pair.mode == "same" and isinstance(pair.f, Fractional) and pair.f.alpha == 0:
        return True
    if pair.mode == "same" and isinstance(pair.f, PiecewiseLinear):
        return True
    return False


def _component_existence(comp: NoiseComponent, pair: KernelPair) -> tuple[str, str]:
    k = pair.f
    if _compact(pair):
        return EXISTS, "bounded integrand with compact support"
    if isinstance(k, Fractional) and pair.mode == "same":
        a = k.alpha
        if a < 0:
            # f(1-s) - f(-s) blows up like |1-s|^α and |s|^α near the singularities
            def phi(s):
                return nm.k_function(comp.rho, comp.sigma2, float(pair.phi(1.0, s)))

            st = status_sum([detect_divergence(phi, 0.0, 1.0),
                             detect_divergence(phi, -1.0, 0.0)])
            if st.is_indeterminate:
                return INDETERMINATE, st.reason
            if st.is_divergent:
                return FAILS_K, f"K-integral diverges {st.cause}"
        kappa = small_jump_exponent(comp)
        if a >= 0 and kappa * (1 - a) <= 1:
            return FAILS_K, f"K-integral diverges at s=-inf (kappa*(1-alpha) = {kappa * (1 - a):.6g} <= 1)"
        if a > 0 and not is_mean_zero(comp):
            return FAILS_B, "noise is not centred and the kernel increment is not integrable"
        return EXISTS, f"kappa*(1-alpha) = {kappa * (1 - a):.6g} > 1"
    # generic route: nested truncation on both integrals
    kfun = lambda s: nm.k_function(comp.rho, comp.sigma2, float(pair.phi(1.0, s)))
    st = detect_divergence(kfun, -INF, INF)
    if st.is_indeterminate:
        return INDETERMINATE, st.reason
    if st.is_divergent:
        return FAILS_K, f"K-integral diverges {st.cause}"
    if not (comp.is_symmetric):
        bfun = lambda s: abs(nm.b_function(comp.rho, comp.theta, float(pair.phi(1.0, s))))
        sb = detect_divergence(bfun, -INF, INF)
        if sb.is_indeterminate:
            return INDETERMINATE, sb.reason
        if sb.is_divergent:
            return FAILS_B, f"B-integral diverges {sb.cause}"
    return EXISTS, "K and B integrals finite"


def existence_check(model: MixedModel) -> ExistenceResult:
    """Whether the stochastic integral defining the process exists."""
    statuses, reasons = [], []
    for i, (comp, pair) in enumerate(model):
        st, why = _component_existence(comp, pair)
        statuses.append(st)
        reasons.append(f"component {i}: {why}")
    for bad in (FAILS_K, FAILS_B, INDETERMINATE):
        if bad in statuses:
            return ExistenceResult(bad, tuple(reasons))
    return ExistenceResult(EXISTS, tuple(reasons))


# --- verdict -----------------------------------------------------------------

@dataclass(frozen=True)
class ComponentEvidence:
    kernel_ac: bool
    inf_var: bool | None
    Cf: Status
    Df: Status
    weighted: Status
    fdot_int: Status


@dataclass(frozen=True)
class CriteriaReport:
    components: tuple[ComponentEvidence, ...]
    Cf: Status
    Df: Status
    ratios: nm.RatioReport
    existence: ExistenceResult


@dataclass(frozen=True)
class Verdict:
    status: str
    theorem: str | None
    branch: str
    report: CriteriaReport
    caveats: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    def evidence(self) -> dict:
        r = self.report
        return {"C_f": _status_json(r.Cf), "D_f": _status_json(r.Df),
                "u00_sup": r.ratios.u00_sup, "u0_holds": list(r.ratios.u0_holds),
                "components": [{"kernel_ac": c.kernel_ac, "inf_var": c.inf_var,
                                "C_f": _status_json(c.Cf), "D_f": _status_json(c.Df),
                                "weighted_integral": _status_json(c.weighted),
                                "fdot_int": _status_json(c.fdot_int)} for c in r.components],
                "existence": {"status": r.existence.status, "reasons": list(r.existence.reasons)}}


def _status_json(st: Status) -> dict:
    if st.is_finite:
        return {"status": "Finite", "value": st.value}
    if st.is_divergent:
        return {"status": "Divergent", "cause": st.cause}
    return {"status": "Indeterminate", "reason": st.reason}


def criteria_report(model: MixedModel) -> CriteriaReport:
    comps = []
    for comp, pair in model:
        nec = NecessaryIntegrals(xi_integral(pair.f, comp.rho, True),
                                 xi_integral(pair.f, comp.rho, False))
        comps.append(ComponentEvidence(pair.f.is_ac, nm.check_infinite_variation_noise(comp),
                                       component_Cf(comp, pair), nec.fdot_int,
                                       nec.weighted, nec.fdot_int))
    w = model.weights
    return CriteriaReport(tuple(comps),
                          status_sum([c.Cf for c in comps], w),
                          status_sum([c.Df for c in comps], w),
                          nm.check_ratio_conditions(model.noise),
                          existence_check(model))


def verdict(model: MixedModel) -> Verdict:
    """Classify the paths of ``model`` on [0, 1] as of finite variation or not."""
    rep = criteria_report(model)
    comps = rep.components
    if not rep.existence.exists:
        return Verdict(INDETERMINATE, None, "existence", rep,
                       (f"process not well defined: {rep.existence.status}",))
    all_ac = all(c.kernel_ac for c in comps)
    inf_var = all(c.inf_var is True for c in comps)

    if all_ac and rep.Cf.is_finite and rep.Df.is_finite:
        return Verdict(FINITE_VARIATION, "Sufficiency", "absolutely continuous kernels with finite C_f and D_f", rep)
    if inf_var and not all_ac:
        return Verdict(INFINITE_VARIATION, "Necessity",
                       "infinite-variation noise forces absolutely continuous kernels", rep)

    caveats = []
    if any(c.inf_var is None for c in comps):
        caveats.append("infinite-variation test undecided for some component")
    # necessity conclusions need inf-var, or absolutely continuous kernels
    if inf_var or all_ac:
        basis = "infinite-variation noise" if inf_var else "absolutely continuous kernels"
        if rep.Cf.is_divergent or any(c.weighted.is_divergent for c in comps):
            which = "C_f" if rep.Cf.is_divergent else "weighted jump integral"
            return Verdict(INFINITE_VARIATION, "Necessity", f"{which} diverges ({basis})", rep)
        ratios = rep.ratios
        if rep.Df.is_divergent:
            if ratios.u0_certified:
                return Verdict(INFINITE_VARIATION, "Necessity",
                               f"D_f diverges under the limsup ratio bound ({basis})", rep)
            if ratios.u00_certified:
                return Verdict(INFINITE_VARIATION, "Necessity",
                               f"D_f diverges under the uniform ratio bound ({basis})", rep)
            if all(ratios.u0_holds) or math.isfinite(ratios.u00_sup):
                caveats.append("D_f diverges and the ratio bound holds only heuristically")
            else:
                caveats.append("D_f diverges but the ratio conditions fail")
    notes = []
    if not all_ac and not inf_var:
        kinds = {type(p.f) for _, p in model}
        if kinds <= {Indicator, Fractional} and all(
                c.rho is None or isinstance(c.rho, FiniteAtoms) or c.inf_var is False for c, _ in model):
            notes.append("noise has locally finite variation and the kernel is a step function: "
                         "paths are differences of finite-variation processes, a case neither "
                         "theorem covers in general")
    return Verdict(INDETERMINATE, None, "no theorem applies", rep, tuple(caveats), tuple(notes))


# --- expected variation bound ------------------------------------------------

class PreconditionError(ValueError):
    pass


def corollary_bound(Cf: float, Df: float) -> float:
    """√(2/π) C_f^{1/2} + (5/4) max(D_f, D_f^{1/2})."""
    if Cf < 0 or Df < 0:
        raise ValueError("C_f and D_f must be nonnegative")
    return math.sqrt(2 / math.pi) * math.sqrt(Cf) + 1.25 * max(Df, math.sqrt(Df))


def is_mean_zero(comp: NoiseComponent) -> bool:
    off = nm.mean_offset(comp.rho)
    if off is None:
        return False
    return abs(comp.theta + off) <= 1e-12 * (1 + abs(comp.theta))


def expected_bv_bound(model: MixedModel, v: Verdict | None = None) -> float:
    """Upper bound on E‖X‖_BV[0,1] for a centred finite-variation model."""
    bad = [i for i, c in enumerate(model.noise) if not is_mean_zero(c)]
    if bad:
        raise PreconditionError(f"components {bad} are not mean zero")
    v = v or verdict(model)
    if v.status != FINITE_VARIATION:
        raise PreconditionError(f"verdict is {v.status}, not {FINITE_VARIATION}")
    return corollary_bound(v.report.Cf.value, v.report.Df.value)


# --- zero-one laws -----------------------------------------------------------

PROBABILITY_ZERO, ZERO_ONE_HOLDS = "ProbabilityZero", "ZeroOneHolds"
NOT_COVERED = "NotCovered"


@dataclass(frozen=True)
class ZeroOneReport:
    global_law: str
    local_law: str
    via: str | None = None
    notes: tuple[str, ...] = ()


def zero_one_classify(model: MixedModel) -> ZeroOneReport:
    notes = []
    kernel_bv = [p.f.is_locally_bv for _, p in model]
    masses = [nm.total_mass(c.rho) for c in model.noise]
    glob = ZERO_ONE_HOLDS
    for i, (bv, mass) in enumerate(zip(kernel_bv, masses)):
        if mass > 0 and not bv:
            glob = PROBABILITY_ZERO
            notes.append(f"component {i}: jumps hit a kernel of unbounded variation on a compact set")
    if all(kernel_bv):
        return ZeroOneReport(glob, "Holds", "a", tuple(notes))
    if all(m == INF for m in masses):
        return ZeroOneReport(glob, "Holds", "b", tuple(notes))
    notes.append("finite-activity noise with a kernel of unbounded variation: the finite-variation "
                 "probability on [0, 1] can lie strictly between 0 and 1")
    return ZeroOneReport(glob, NOT_COVERED, None, tuple(notes))


# --- canonical models --------------------------------------------------------

@dataclass(frozen=True)
class CanonicalCase:
    name: str
    model: MixedModel
    expected: str
    theorem: str | None


def canonical_models() -> tuple[CanonicalCase, ...]:
    frac = Fractional(0.25)
    return (
        CanonicalCase("fractional(0.25) + tempered(1.2)",
                      MixedModel.single(frac, rho=TemperedStable(1, 1, 1.2, 1, 1)),
                      FINITE_VARIATION, "Sufficiency"),
        CanonicalCase("fractional(0.25) + tempered(1.5)",
                      MixedModel.single(frac, rho=TemperedStable(1, 1, 1.5, 1, 1)),
                      INFINITE_VARIATION, "Necessity"),
        CanonicalCase("smooth bump + stable(1.5)",
                      MixedModel.single(SmoothBump(-1, 1), rho=Stable(1, 1, 1.5)),
                      FINITE_VARIATION, "Sufficiency"),
        CanonicalCase("indicator + stable(1.5)",
                      MixedModel.single(Indicator(0, 1), rho=Stable(1, 1, 1.5)),
                      INFINITE_VARIATION, "Necessity"),
        CanonicalCase("fractional(0.25) + gaussian",
                      MixedModel.single(frac, sigma2=1.0),
                      INFINITE_VARIATION, "Necessity"),
        CanonicalCase("indicator + atoms",
                      MixedModel.single(Indicator(0, 1), rho=FiniteAtoms(((1.0, 1.0), (-1.0, 1.0)))),
                      INDETERMINATE, None),
    )

"""Path simulation on dyadic grids and Monte Carlo variation estimates.

A path on [0, 1] is assembled per component from

* the jumps of the noise in a finite window, exactly for finite activity and
  through a truncated shot-noise series otherwise,
* the drift left over after removing the compensator of the simulated jumps,
* a Gaussian part built by convolving cell averages of the kernel with
  Brownian increments (optionally carrying the variance of the omitted
  small jumps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from scipy import signal

from . import criteria as cr
from . import noise_models as nm
from .kernels import Fractional, Indicator, Kernel, KernelPair, PiecewiseLinear, SmoothBump, WeierstrassBump
from .noise_models import FiniteAtoms, NoiseComponent, Stable, TabulatedTail, TemperedStable
from .numerics import (Finite, SeedSpec, detect_divergence, integrate, status_sum,
                       variation_levels)

INF = math.inf
_CHUNK = 4096


@dataclass(frozen=True)
class SimPlan:
    n_max: int = 12
    window: tuple[float, float] | None = None
    series_terms: int = 10_000
    gaussian_compensation: bool = False
    replicas: int = 1000
    seed: SeedSpec = field(default_factory=lambda: SeedSpec(0))
    left_extent: float = 8.0

    def __post_init__(self):
        if not 1 <= self.n_max <= 20:
            raise ValueError("n_max must lie in [1, 20]")
        if self.series_terms < 1:
            raise ValueError("series_terms must be positive")
        if self.replicas < 1:
            raise ValueError("replicas must be positive")
        if self.window is not None and not self.window[0] < self.window[1]:
            raise ValueError("window must be an increasing pair")
        if self.left_extent <= 0:
            raise ValueError("left_extent must be positive")


@dataclass(frozen=True)
class PathSample:
    values: np.ndarray
    n_max: int
    methods: tuple[str, ...]
    jump_counts: tuple[int, ...]
    diagnostics: dict
    seed: SeedSpec

    @property
    def grid(self) -> np.ndarray:
        return np.arange(2 ** self.n_max + 1) / 2 ** self.n_max

    @cached_property
    def levels(self) -> np.ndarray:
        """Exactly rounded V_0..V_n; nondecreasing bit-for-bit."""
        return variation_levels(self.values, self.n_max)


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    se: float
    replicas: int
    level: int
    increment_mean: np.ndarray
    increment_se: np.ndarray
    variation_mean: np.ndarray
    variation_se: np.ndarray


# --- per-component preparation ----------------------------------------------

def _flat_right(k: Kernel) -> float | None:
    """Point beyond which ``k`` is constant, if any."""
    if isinstance(k, Fractional):
        return 0.0 if k.alpha == 0 else None
    if isinstance(k, PiecewiseLinear):
        return float(k.xs[-1])
    hi = k.support()[1]
    return hi if math.isfinite(hi) else None


def component_window(pair: KernelPair, plan: SimPlan) -> tuple[float, float]:
    """Noise locations s that can move the path on [0, 1]."""
    if plan.window is not None:
        return tuple(plan.window)
    k = pair.f
    lo_supp = k.support()[0]
    hi = 1.0 - lo_supp if math.isfinite(lo_supp) else plan.left_extent
    flat = _flat_right(k)
    if flat is None or (pair.mode == "zero" and k.limit_at_infinity != 0):
        lo = -plan.left_extent
    else:
        lo = -flat
    return (lo, hi)


def _step_representation(k: Kernel):
    """f(u) = Σ h·1{u ≥ p} (closed) or h·1{u > p} (open), as (p, h, closed)."""
    if isinstance(k, Fractional) and k.alpha == 0:
        return ((0.0, 1.0, False),)
    if isinstance(k, Indicator):
        return ((k.a, 1.0, True), (k.b, -1.0, False))
    return None


def _poly_representation(k: Kernel):
    """Pieces (lo, hi, centre, scale, coeffs) with f(u) = Σ c_m ((u - centre)/scale)^m on [lo, hi)."""
    if isinstance(k, SmoothBump):
        return ((k.a, k.b, k.center, k.half_width, (1.0, 0.0, -2.0, 0.0, 1.0)),)
    if isinstance(k, PiecewiseLinear):
        xs, ys = k.xs, k.ys
        pieces = [(-INF, float(xs[0]), 0.0, 1.0, (float(ys[0]),))]
        for x0, x1, y0, y1 in zip(xs[:-1], xs[1:], ys[:-1], ys[1:]):
            pieces.append((float(x0), float(x1), float(x0), 1.0, (float(y0), float((y1 - y0) / (x1 - x0)))))
        pieces.append((float(xs[-1]), INF, 0.0, 1.0, (float(ys[-1]),)))
        return tuple(pieces)
    return None


class _JumpSource:
    """Jumps with |x| > eps of one Lévy measure over a window of length L."""

    def __init__(self, rho, length: float, terms: int):
        self.rho = rho
        self.length = length
        self.terms = terms
        self.finite = self._finite_activity()
        if self.finite:
            self.eps = 0.0
        else:
            self.eps = self._inverse_tail(terms / length)

    def _finite_activity(self) -> bool:
        rho = self.rho
        if isinstance(rho, FiniteAtoms):
            return True
        if isinstance(rho, TabulatedTail):
            return rho.left_exponent == 0 or rho.tail(0.0) * self.length <= self.terms
        return False

    # dominating tail G and its inverse
    def _dominating(self):
        rho = self.rho
        if isinstance(rho, Stable):
            return rho.c1 + rho.c2, rho.alpha, rho.c1 / (rho.c1 + rho.c2)
        if isinstance(rho, TemperedStable):
            return rho.d1 + rho.d2, rho.beta, rho.d1 / (rho.d1 + rho.d2)
        return None

    def _inverse_tail(self, y: float) -> float:
        dom = self._dominating()
        if dom is not None:
            c, a, _ = dom
            return (c / (a * y)) ** (1 / a)
        return _tabulated_inverse(self.rho, np.array([y]))[0]

    def sample(self, rng: np.random.Generator, lo: float) -> tuple[np.ndarray, np.ndarray]:
        if isinstance(self.rho, FiniteAtoms):
            lam = self.length * self.rho.total_mass()
            count = rng.poisson(lam)
            pos = lo + self.length * rng.random(count)
            sizes = rng.choice(self.rho.locations, size=count, p=self.rho.rates / self.rho.rates.sum())
            return pos, sizes
        if self.finite:
            lam = self.length * self.rho.tail(0.0)
            count = rng.poisson(lam)
            pos = lo + self.length * rng.random(count)
            u = self.rho.tail(0.0) * (1 - rng.random(count))
            mags = _tabulated_inverse(self.rho, u)
            signs = np.where(rng.random(count) < 0.5, 1.0, -1.0)
            return pos, signs * mags
        return self._series(rng, lo)

    def _series(self, rng, lo):
        pos_out, size_out = [], []
        gamma = 0.0
        dom = self._dominating()
        while True:
            e = rng.standard_exponential(_CHUNK)
            u_pos = rng.random(_CHUNK)
            u_sign = rng.random(_CHUNK)
            u_keep = rng.random(_CHUNK)
            arrivals = gamma + np.cumsum(e)
            gamma = arrivals[-1]
            take = arrivals <= self.terms
            y = arrivals[take] / self.length
            if dom is not None:
                c, a, p_plus = dom
                mags = (c / (a * y)) ** (1 / a)
                signs = np.where(u_sign[take] < p_plus, 1.0, -1.0)
                if isinstance(self.rho, TemperedStable):
                    rate = np.where(signs > 0, self.rho.l1, self.rho.l2)
                    keep = u_keep[take] < np.exp(-rate * mags)
                else:
                    keep = np.ones_like(mags, dtype=bool)
            else:
                mags = _tabulated_inverse(self.rho, y)
                signs = np.where(u_sign[take] < 0.5, 1.0, -1.0)
                keep = np.ones_like(mags, dtype=bool)
            pos_out.append(lo + self.length * u_pos[take][keep])
            size_out.append((signs * mags)[keep])
            if not take.all():
                break
        return np.concatenate(pos_out), np.concatenate(size_out)


def _tabulated_inverse(rho: TabulatedTail, y: np.ndarray) -> np.ndarray:
    """sup{r : g(r) > y} for the piecewise power-law tail g."""
    y = np.asarray(y, dtype=float)
    out = np.empty_like(y)
    segs = rho._segments()
    for i, v in enumerate(y):
        r = rho.r[-1]
        for lo, hi, c, s in segs:
            g_hi = 0.0 if hi == INF else c * hi ** s
            if v >= g_hi:
                r = hi if s == 0 else (v / c) ** (1 / s)
                r = min(max(r, lo), hi)
                break
        out[i] = r
    return out


@dataclass
class _Component:
    comp: NoiseComponent
    pair: KernelPair
    window: tuple[float, float]
    source: _JumpSource | None
    drift: float
    gauss_var: float
    phi_drift: np.ndarray
    conv_kernel: np.ndarray | None
    conv_base: np.ndarray | None
    cells: int
    steps: tuple | None
    cell_offset: int = 0
    aligned_steps: tuple | None = None
    poly: tuple | None = None


class Sampler:
    """Deterministic path generator for one model and plan."""

    def __init__(self, model: "cr.MixedModel", plan: SimPlan):
        self.model = model
        self.plan = plan
        self.t = np.arange(2 ** plan.n_max + 1) / 2 ** plan.n_max
        self.parts = [self._prepare(c, p) for c, p in model]
        self._diagnostics = None

    def _prepare(self, comp, pair) -> _Component:
        plan, t = self.plan, self.t
        lo, hi = component_window(pair, plan)
        length = hi - lo
        source = None
        drift = comp.theta
        gauss_var = comp.sigma2
        if comp.rho is not None:
            source = _JumpSource(comp.rho, length, plan.series_terms)
            if not source.finite and plan.series_terms < 1000:
                raise ValueError("series_terms must be at least 1000 for infinite-activity noise")
            drift = comp.theta - nm.compensator(comp.rho, source.eps)
            if plan.gaussian_compensation and source.eps > 0:
                gauss_var += nm.truncated_second_moment(comp.rho, source.eps)
        k = pair.f
        F = k.antiderivative
        phi = F(t - lo) - F(t - hi)
        if pair.mode == "same":
            phi = phi - (F(-lo) - F(-hi))
        conv_kernel = conv_base = None
        cells = offset = 0
        steps = _step_representation(k)
        aligned = None
        if gauss_var > 0:
            conv_kernel, conv_base, cells = self._gaussian_operator(pair, lo, hi)
            h = 2.0 ** -plan.n_max
            offset = math.floor(lo / h)
            if steps is not None and all(float(p / h).is_integer() for p, _, _ in steps):
                aligned = tuple((int(p / h), height) for p, height, _ in steps)
        return _Component(comp, pair, (lo, hi), source, drift, gauss_var, np.asarray(phi, float),
                          conv_kernel, conv_base, cells, steps, offset, aligned, _poly_representation(k))

    def _gaussian_operator(self, pair, lo, hi):
        n = self.plan.n_max
        h = 2.0 ** -n
        m = math.floor(lo / h)
        cells = math.ceil(hi / h) - m
        F = pair.f.antiderivative
        kmin = -(cells - 1) - m
        ks = np.arange(kmin, 2 ** n - m + 1, dtype=float)
        avg = (F(ks * h) - F((ks - 1) * h)) / h
        c = np.arange(cells, dtype=float)
        if pair.mode == "same":
            base = (F(-(m + c) * h) - F(-(m + c + 1) * h)) / h
        else:
            base = np.zeros(cells)
        return np.asarray(avg, float), np.asarray(base, float), cells

    # --- sampling ---------------------------------------------------------

    def sample(self, seed: SeedSpec) -> PathSample:
        x = np.zeros_like(self.t)
        methods, counts = [], []
        for i, part in enumerate(self.parts):
            rng = seed.child(i).generator()
            xi, how, cnt = self._component_path(part, rng)
            x += xi
            methods.append(how)
            counts.append(cnt)
        return PathSample(x, self.plan.n_max, tuple(methods), tuple(counts),
                          self.diagnostics, seed)

    def _component_path(self, part: _Component, rng):
        x = part.drift * part.phi_drift if part.drift != 0 else np.zeros_like(self.t)
        how = []
        if part.gauss_var > 0:
            h = 2.0 ** -self.plan.n_max
            db = rng.standard_normal(part.cells) * math.sqrt(part.gauss_var * h)
            if part.aligned_steps is not None:
                # cell averages of a grid-aligned step are 0 or 1: partial sums suffice
                cum = np.concatenate([[0.0], np.cumsum(db)])
                i = np.arange(self.t.size)
                g = np.zeros_like(self.t)
                for q, height in part.aligned_steps:
                    g += height * cum[np.clip(i - part.cell_offset - q, 0, part.cells)]
                x = x + g - db @ part.conv_base
            else:
                full = signal.fftconvolve(db, part.conv_kernel)
                x = x + full[part.cells - 1: part.cells - 1 + self.t.size] - db @ part.conv_base
            how.append("gaussian-convolution")
        count = 0
        if part.source is not None:
            pos, sizes = part.source.sample(rng, part.window[0])
            count = pos.size
            x = x + self._jump_sum(part, pos, sizes)
            how.append("compound-poisson" if part.source.finite else "shot-noise-series")
        return x, "+".join(how) or "drift", count

    def _jump_sum(self, part: _Component, pos, sizes) -> np.ndarray:
        t = self.t
        if pos.size == 0:
            return np.zeros_like(t)
        pair = part.pair
        base = float(sizes @ np.asarray(pair.f0(-pos), float)) if pair.mode == "same" else 0.0
        if part.steps is not None:
            order = np.argsort(pos, kind="stable")
            sp, sx = pos[order], sizes[order]
            csum = np.concatenate([[0.0], np.cumsum(sx)])
            out = np.zeros_like(t)
            for p, height, closed in part.steps:
                idx = np.searchsorted(sp, t - p, side="right" if closed else "left")
                out += height * csum[idx]
            return out - base
        if part.poly is not None:
            return self._poly_jump_sum(part.poly, pos, sizes) - base
        out = np.zeros_like(t)
        f = pair.f
        step = max(1, 2 ** 20 // t.size)
        for j in range(0, pos.size, step):
            block = f.eval(t[None, :] - pos[j:j + step, None])
            out += sizes[j:j + step] @ block
        return out - base

    def _poly_jump_sum(self, pieces, pos, sizes) -> np.ndarray:
        """Σ_j x_j f(t - s_j) for piecewise polynomial f via prefix sums over sorted s_j."""
        t = self.t
        order = np.argsort(pos, kind="stable")
        sp, sx = pos[order], sizes[order]
        out = np.zeros_like(t)
        for lo, hi, centre, scale, coeffs in pieces:
            # u = t - s in [lo, hi)  <=>  s in (t - hi, t - lo]
            i0 = np.searchsorted(sp, t - hi, side="right")
            i1 = np.searchsorted(sp, t - lo, side="right")
            sig = sp / scale
            tau = (t - centre) / scale
            moments = []
            for q in range(len(coeffs)):
                c = np.concatenate([[0.0], np.cumsum(sx * sig ** q)])
                moments.append(c[i1] - c[i0])
            # ((tau - sig)^m summed against x) by the binomial theorem
            for m, cm in enumerate(coeffs):
                if cm == 0:
                    continue
                acc = np.zeros_like(t)
                for q in range(m + 1):
                    acc += math.comb(m, q) * (-1) ** q * tau ** (m - q) * moments[q]
                out += cm * acc
        return out

    # --- diagnostics ------------------------------------------------------

    @property
    def diagnostics(self) -> dict:
        if self._diagnostics is None:
            self._diagnostics = {"components": [self._component_diagnostics(p) for p in self.parts]}
        return self._diagnostics

    def _component_diagnostics(self, part: _Component) -> dict:
        comp, k = part.comp, part.pair.f
        out = {"window": list(part.window), "drift": part.drift,
               "gaussian_variance": part.gauss_var}
        if part.source is not None:
            eps = part.source.eps
            omitted = nm.truncated_second_moment(comp.rho, eps) if eps > 0 else 0.0
            out["cutoff"] = eps
            out["omitted_small_jump_variance"] = 0.0 if self.plan.gaussian_compensation else omitted
            out["small_jump_residual_bv"] = _small_jump_residual(comp.rho, k, eps)
        lo = part.window[0]
        out["window_residual_bv"] = _window_residual(comp, part.pair, lo)
        return out


def _small_jump_residual(rho, k: Kernel, eps: float) -> float:
    """(5/4) max(D, √D) with D the D_f integral of the jumps below ``eps``."""
    if eps == 0:
        return 0.0
    if not k.is_ac:
        return math.nan
    if isinstance(k, Fractional):
        factor = cr.fractional_xi_factor(k.alpha)
        d = factor * rho.moment(1 / (1 - k.alpha), 0.0, eps) if factor < INF else INF
    else:
        st = cr._quad_over_support(k, lambda s: nm.xi_truncated(rho, float(k.derivative(s)), eps))
        d = st.value
    return 1.25 * max(d, math.sqrt(d)) if math.isfinite(d) else INF


def _window_residual(comp: NoiseComponent, pair: KernelPair, lo: float) -> float:
    """Centred bound on the variation contributed by noise left of the window."""
    k = pair.f
    if math.isfinite(k.support()[1]) or _flat_right(k) is not None and -lo >= _flat_right(k):
        return 0.0
    if not k.is_ac or pair.mode != "same":
        return math.nan
    a = -lo
    if isinstance(k, Fractional):
        al = k.alpha
        c = comp.sigma2 * al * al * a ** (2 * al - 1) / (1 - 2 * al) if al < 0.5 else INF
    else:
        c = comp.sigma2 * detect_divergence(lambda u: float(k.derivative(u)) ** 2, a, INF).value
    if comp.rho is None:
        d = 0.0
    else:
        d = detect_divergence(lambda u: nm.xi(comp.rho, float(k.derivative(u))), a, INF).value
    if not (math.isfinite(c) and math.isfinite(d)):
        return INF
    return cr.corollary_bound(c, d)


# --- public operations -------------------------------------------------------

def sample_path(model, plan: SimPlan, seed: SeedSpec | None = None) -> PathSample:
    ex = cr.existence_check(model)
    if not ex.exists:
        raise ValueError(f"model does not exist: {ex.status}")
    return Sampler(model, plan).sample(seed or plan.seed)


def bv_levels(path: PathSample | np.ndarray) -> np.ndarray:
    """Dyadic variation levels V_0..V_n of a sampled path."""
    values = path.values if isinstance(path, PathSample) else np.asarray(path, float)
    return variation_levels(values)


def _fast_levels(values: np.ndarray, n: int) -> np.ndarray:
    """Level sums by plain summation; for averaging only."""
    return np.array([np.abs(np.diff(values[:: 2 ** (n - k)])).sum() for k in range(n + 1)])


def _replica_seed(plan: SimPlan, r: int) -> SeedSpec:
    return plan.seed.child(r)


def mc_expected_variation(model, plan: SimPlan, n: int, R: int | None = None) -> MCEstimate:
    """Monte Carlo estimate of 2^n E|X(2^{-n}) - X(0)| with per-level breakdown."""
    R = plan.replicas if R is None else R
    if R < 100:
        raise ValueError("at least 100 replicas are required")
    if not 0 <= n <= plan.n_max:
        raise ValueError("level n must lie in [0, n_max]")
    sampler = Sampler(model, plan)
    top = plan.n_max
    incs = np.empty((R, top + 1))
    vars_ = np.empty((R, top + 1))
    idx = np.array([2 ** (top - k) for k in range(top + 1)])
    scale = 2.0 ** np.arange(top + 1)
    for r in range(R):
        p = sampler.sample(_replica_seed(plan, r))
        incs[r] = scale * np.abs(p.values[idx] - p.values[0])
        vars_[r] = _fast_levels(p.values, top)
    se = lambda a: a.std(axis=0, ddof=1) / math.sqrt(R)
    inc_mean, inc_se = incs.mean(axis=0), se(incs)
    return MCEstimate(float(inc_mean[n]), float(inc_se[n]), R, n, inc_mean, inc_se,
                      vars_.mean(axis=0), se(vars_))


def compute_In(model, n: int) -> float:
    """I_n = Σ w ∫ ξ(f_n(s)) ds with f_n(s) = 2^n [f(2^{-n} - s) - f(-s)]."""
    total = []
    d = 2.0 ** -n
    for comp, pair in model:
        k, rho = pair.f, comp.rho
        if rho is None:
            continue
        if isinstance(k, Indicator) and isinstance(rho, Stable):
            width = min(d, k.b - k.a)
            total.append(comp.weight * 2 * width * rho.xi_constant * 2.0 ** (n * rho.alpha))
            continue

        def fn(s, k=k, rho=rho):
            v = 2.0 ** n * (float(k.eval(d - s)) - float(k.eval(-s)))
            return nm.xi(rho, v)

        lo, hi = k.support()
        pts = sorted({d - p for p in k.breakpoints()} | {-p for p in k.breakpoints()})
        # f(d - s) lives on [d - hi, d - lo] and f(-s) on [-hi, -lo]
        a = -hi if math.isfinite(hi) else -INF
        b = d - lo if math.isfinite(lo) else INF
        inner = [p for p in pts if a < p < b]
        edges = [a, *inner, b]
        parts = []
        for x0, x1 in zip(edges[:-1], edges[1:]):
            if math.isinf(x0) or math.isinf(x1):
                parts.append(detect_divergence(fn, x0, x1))
            else:
                parts.append(Finite(integrate(fn, x0, x1).value))
        st = status_sum(parts)
        total.append(comp.weight * st.value)
    return math.fsum(total) if all(math.isfinite(v) for v in total) else INF


@dataclass(frozen=True)
class SandwichReport:
    n: int
    I_n: float
    lower: float
    upper: float
    estimate: float
    se: float
    inside: bool


def l1_bounds(I_n: float) -> tuple[float, float]:
    return 0.25 * min(I_n, math.sqrt(I_n)), 1.25 * max(I_n, math.sqrt(I_n))


def verify_L1_sandwich(model, n, R: int, plan: SimPlan | None = None) -> list[SandwichReport]:
    """Check (1/4) min(I_n, √I_n) <= E|2^n ΔX| <= (5/4) max(I_n, √I_n) by Monte Carlo."""
    ns = [n] if np.ndim(n) == 0 else list(n)
    for comp in model.noise:
        if comp.sigma2 > 0 or not comp.is_symmetric:
            raise ValueError("the L1 bounds need symmetric, purely non-Gaussian noise")
    plan = plan or SimPlan(n_max=max(max(ns), 1), replicas=R)
    plan = replace(plan, n_max=max(plan.n_max, max(ns), 1))
    est = mc_expected_variation(model, plan, max(ns), R)
    out = []
    for k in ns:
        I = compute_In(model, k)
        lo, hi = l1_bounds(I)
        m, s = float(est.increment_mean[k]), float(est.increment_se[k])
        out.append(SandwichReport(k, I, lo, hi, m, s, lo - 3 * s <= m <= hi + 3 * s))
    return out


# --- zero-one experiment -----------------------------------------------------

def weierstrass_model(terms: int = 20):
    """Weierstrass bump driven by an (uncompensated) unit-rate Poisson measure."""
    rho = FiniteAtoms(((1.0, 1.0),))
    return cr.MixedModel.single(WeierstrassBump(terms=terms), rho=rho,
                                theta=nm.compensator(rho, 0.0), mode="zero")


@dataclass(frozen=True)
class ZeroOneExperiment:
    replicas: int
    fraction_empty_window: float
    se_empty_window: float
    fraction_bounded: float
    atom_counts: np.ndarray
    growth_ratios: np.ndarray
    single_atom_replicas: int
    single_atom_min_ratio: float
    single_atom_failures: int
    zero_atom_replicas: int
    zero_atom_max_variation: float
    growth_threshold: float
    low_level: int


def _ratio(a: float, b: float) -> float:
    if b > 0:
        return a / b
    return INF if a > 0 else math.nan


def zero_one_experiment(model, plan: SimPlan, R: int, growth_threshold: float = 10.0,
                        proxy_threshold: float = 1.25, low_level: int = 4) -> ZeroOneExperiment:
    """Classify simulated paths of a finite-activity model as bounded or growing."""
    for comp in model.noise:
        if comp.sigma2 > 0 or nm.total_mass(comp.rho) == INF:
            raise ValueError("the zero-one experiment needs finite-activity noise")
    if not 0 <= low_level < plan.n_max:
        raise ValueError("low_level must lie below n_max")
    sampler = Sampler(model, plan)
    n = plan.n_max
    counts = np.empty(R, dtype=int)
    ratios = np.empty(R)
    bounded = np.empty(R, dtype=bool)
    top = np.empty(R)
    for r in range(R):
        p = sampler.sample(_replica_seed(plan, r))
        lv = p.levels
        counts[r] = sum(p.jump_counts)
        ratios[r] = _ratio(lv[n], lv[low_level])
        top[r] = lv[n]
        proxy = _ratio(lv[n], lv[max(n - 4, 0)])
        bounded[r] = lv[n] == 0 or proxy < proxy_threshold
    empty = counts == 0
    single = counts == 1
    frac_empty = float(empty.mean())
    single_ratios = ratios[single]
    return ZeroOneExperiment(
        R, frac_empty, math.sqrt(frac_empty * (1 - frac_empty) / R), float(bounded.mean()),
        counts, ratios, int(single.sum()),
        float(np.nanmin(single_ratios)) if single_ratios.size else math.nan,
        int(np.sum(~(single_ratios > growth_threshold))),
        int(empty.sum()), float(top[empty].max()) if empty.any() else 0.0,
        growth_threshold, low_level)

"""Kernel sections f(·, v), kernel pairs and section variation norms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import variation_levels

INF = math.inf


class NotAbsolutelyContinuous(ValueError):
    """Raised when a derivative is requested from a non-AC kernel."""


@dataclass(frozen=True)
class SectionBV:
    """Variation of a kernel section on an interval.

    ``exact`` sections carry the analytic value; otherwise ``levels`` holds
    the dyadic level sums and ``value`` the last of them (a lower bound).
    """

    value: float
    exact: bool
    levels: tuple[float, ...] = ()
    divergent: bool = False


class Kernel:
    family = "abstract"
    is_ac = False

    def eval(self, s):
        raise NotImplementedError

    def __call__(self, s):
        return self.eval(s)

    def derivative(self, s):
        raise NotAbsolutelyContinuous(f"{self.family} kernel is not absolutely continuous")

    def antiderivative(self, s):
        """Some antiderivative F with F' = f; only differences are meaningful."""
        raise NotImplementedError

    def support(self) -> tuple[float, float]:
        raise NotImplementedError

    def breakpoints(self) -> tuple[float, ...]:
        """Points where the kernel or its derivative is singular or kinked."""
        return ()

    @property
    def limit_at_infinity(self) -> float:
        return 0.0

    def monotone_pieces(self) -> tuple[float, ...] | None:
        """Break points between which the kernel is monotone, or None."""
        return None

    @property
    def is_locally_bv(self) -> bool:
        return True

    def to_dict(self) -> dict:
        raise NotImplementedError


def _arr(s):
    return np.asarray(s, dtype=float)


def _ret(x, like):
    return float(x) if np.ndim(like) == 0 else x


@dataclass(frozen=True)
class Fractional(Kernel):
    """s₊^α with the convention 0⁰ = 0, so α = 0 gives 1_{(0,∞)}."""

    alpha: float

    family = "fractional"

    @property
    def is_ac(self):
        return self.alpha > 0

    def eval(self, s):
        x = _arr(s)
        pos = x > 0
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(pos, np.power(np.where(pos, x, 1.0), self.alpha), 0.0)
        return _ret(out, s)

    def derivative(self, s):
        if not self.is_ac:
            return super().derivative(s)
        x = _arr(s)
        pos = x > 0
        with np.errstate(divide="ignore"):
            out = np.where(pos, self.alpha * np.power(np.where(pos, x, 1.0), self.alpha - 1), 0.0)
        return _ret(out, s)

    def antiderivative(self, s):
        if self.alpha <= -1:
            raise ValueError("kernel is not locally integrable at 0")
        x = np.maximum(_arr(s), 0.0)
        return _ret(x ** (self.alpha + 1) / (self.alpha + 1), s)

    def support(self):
        return (0.0, INF)

    def breakpoints(self):
        return (0.0,)

    @property
    def limit_at_infinity(self):
        return INF if self.alpha > 0 else (1.0 if self.alpha == 0 else 0.0)

    def monotone_pieces(self):
        return (0.0,)

    @property
    def is_locally_bv(self):
        return self.alpha >= 0

    def to_dict(self):
        return {"family": "fractional", "alpha": self.alpha}


@dataclass(frozen=True)
class Indicator(Kernel):
    """1 on the closed interval [a, b]."""

    a: float
    b: float

    family = "indicator"

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("indicator needs a < b")

    def eval(self, s):
        x = _arr(s)
        return _ret(((x >= self.a) & (x <= self.b)).astype(float), s)

    def antiderivative(self, s):
        return _ret(np.clip(_arr(s) - self.a, 0.0, self.b - self.a), s)

    def support(self):
        return (self.a, self.b)

    def breakpoints(self):
        return (self.a, self.b)

    def to_dict(self):
        return {"family": "indicator", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class SmoothBump(Kernel):
    """(1 - t²)² with t the affine image of [a, b] onto [-1, 1]; peak 1."""

    a: float = -1.0
    b: float = 1.0

    family = "smooth_bump"
    is_ac = True

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("bump support needs a < b")

    @property
    def half_width(self):
        return 0.5 * (self.b - self.a)

    @property
    def center(self):
        return 0.5 * (self.a + self.b)

    def _t(self, s):
        return (_arr(s) - self.center) / self.half_width

    def eval(self, s):
        t = self._t(s)
        return _ret(np.where(np.abs(t) <= 1, (1 - t * t) ** 2, 0.0), s)

    def derivative(self, s):
        t = self._t(s)
        return _ret(np.where(np.abs(t) <= 1, -4 * t * (1 - t * t) / self.half_width, 0.0), s)

    def antiderivative(self, s):
        t = np.clip(self._t(s), -1.0, 1.0)
        return _ret(self.half_width * (t - 2 * t ** 3 / 3 + t ** 5 / 5), s)

    def support(self):
        return (self.a, self.b)

    def breakpoints(self):
        return (self.a, self.center, self.b)

    def monotone_pieces(self):
        return (self.a, self.center, self.b)

    def to_dict(self):
        return {"family": "smooth_bump", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class WeierstrassBump(Kernel):
    """(Σ_{k<N} a^k cos(b^k π t)) · t(1 - t) on [0, 1], zero elsewhere.

    Continuous with no interval of bounded variation inside [0, 1] in the
    limit N → ∞; the fixed N keeps every evaluation deterministic.
    """

    a: float = 0.5
    b: int = 13
    terms: int = 20

    family = "weierstrass_bump"

    def __post_init__(self):
        if not 0 < self.a < 1:
            raise ValueError("Weierstrass amplitude ratio must lie in (0, 1)")
        if int(self.b) != self.b or self.b % 2 != 1:
            raise ValueError("Weierstrass frequency ratio must be an odd integer")
        if not self.a * self.b > 1 + 1.5 * math.pi:
            raise ValueError("Weierstrass parameters need a·b > 1 + 3π/2")
        if self.terms < 1:
            raise ValueError("term count must be positive")

    @property
    def frequencies(self) -> np.ndarray:
        return np.pi * float(self.b) ** np.arange(self.terms)

    @property
    def amplitudes(self) -> np.ndarray:
        return self.a ** np.arange(self.terms, dtype=float)

    def eval(self, s):
        x = _arr(s)
        inside = (x >= 0) & (x <= 1)
        t = x[inside] if x.ndim else (x if inside else None)
        out = np.zeros_like(x, dtype=float)
        if t is not None and np.size(t):
            acc = np.zeros_like(t, dtype=float)
            for amp, freq in zip(self.amplitudes, self.frequencies):
                acc += amp * np.cos(freq * t)
            if x.ndim:
                out[inside] = acc * t * (1 - t)
            else:
                out = acc * t * (1 - t)
        return _ret(out, s)

    def antiderivative(self, s):
        t = np.clip(_arr(s), 0.0, 1.0)

        def prim(t, w):
            # ∫ t(1-t) cos(w t) dt by parts
            p, dp = t - t * t, 1 - 2 * t
            return p * np.sin(w * t) / w + dp * np.cos(w * t) / w ** 2 + 2 * np.sin(w * t) / w ** 3

        total = sum(amp * (prim(t, w) - prim(0.0, w)) for amp, w in zip(self.amplitudes, self.frequencies))
        return _ret(total, s)

    def support(self):
        return (0.0, 1.0)

    def breakpoints(self):
        return (0.0, 1.0)

    @property
    def is_locally_bv(self):
        return not section_bv(self, 0.25, 0.5).divergent

    def to_dict(self):
        return {"family": "weierstrass_bump", "a": self.a, "b": self.b, "terms": self.terms}


@dataclass(frozen=True)
class PiecewiseLinear(Kernel):
    """Linear interpolation through ``knots``, constant beyond the end knots."""

    knots: tuple[tuple[float, float], ...]

    family = "piecewise_linear"
    is_ac = True

    def __post_init__(self):
        knots = tuple((float(s), float(y)) for s, y in self.knots)
        if len(knots) < 2:
            raise ValueError("piecewise linear kernel needs at least two knots")
        if any(b[0] <= a[0] for a, b in zip(knots, knots[1:])):
            raise ValueError("knot abscissae must be strictly increasing")
        object.__setattr__(self, "knots", knots)

    @property
    def xs(self):
        return np.array([k[0] for k in self.knots])

    @property
    def ys(self):
        return np.array([k[1] for k in self.knots])

    def eval(self, s):
        return _ret(np.interp(_arr(s), self.xs, self.ys), s)

    def derivative(self, s):
        x = _arr(s)
        xs, ys = self.xs, self.ys
        slopes = np.diff(ys) / np.diff(xs)
        idx = np.searchsorted(xs, x, side="right") - 1
        inside = (idx >= 0) & (idx < len(slopes))
        out = np.where(inside, slopes[np.clip(idx, 0, len(slopes) - 1)], 0.0)
        return _ret(out, s)

    def antiderivative(self, s):
        x = _arr(s)
        xs, ys = self.xs, self.ys
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (ys[1:] + ys[:-1]) * np.diff(xs))])
        idx = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, len(xs) - 1)
        base = xs[idx]
        out = cum[idx] + 0.5 * (ys[idx] + np.interp(x, xs, ys)) * (x - base)
        left = x < xs[0]
        out = np.where(left, ys[0] * (x - xs[0]), out)
        return _ret(out, s)

    def support(self):
        xs, ys = self.xs, self.ys
        lo = -INF if ys[0] != 0 else xs[0]
        hi = INF if ys[-1] != 0 else xs[-1]
        return (lo, hi)

    def breakpoints(self):
        return tuple(self.xs)

    @property
    def limit_at_infinity(self):
        return float(self.ys[-1])

    def monotone_pieces(self):
        return tuple(self.xs)

    def to_dict(self):
        return {"family": "piecewise_linear", "knots": [list(k) for k in self.knots]}


@dataclass(frozen=True)
class KernelPair:
    """f together with f₀: ``"same"`` gives f₀ = f, ``"zero"`` gives f₀ ≡ 0."""

    f: Kernel
    mode: str = "same"

    def __post_init__(self):
        if self.mode not in ("same", "zero"):
            raise ValueError("kernel pair mode must be 'same' or 'zero'")

    def f0(self, s):
        if self.mode == "zero":
            return np.zeros_like(_arr(s)) if np.ndim(s) else 0.0
        return self.f.eval(s)

    def phi(self, t, s):
        """f(t - s) - f₀(-s)."""
        return self.f.eval(_arr(t) - s) - self.f0(-_arr(s))


# --- section variation -------------------------------------------------------

def _exact_bv(k: Kernel, a: float, b: float) -> SectionBV | None:
    if isinstance(k, Indicator):
        jumps = int(a < k.a <= b) + int(a <= k.b < b)
        return SectionBV(float(jumps), True)
    if isinstance(k, Fractional):
        if k.alpha == 0:
            return SectionBV(float(a <= 0 < b), True)
        if k.alpha < 0:
            if a <= 0 < b:
                return SectionBV(INF, True, divergent=True)
            return SectionBV(abs(float(k.eval(b)) - float(k.eval(a))) if a > 0 else 0.0, True)
    pieces = k.monotone_pieces()
    if pieces is None:
        return None
    pts = np.array([a, *[p for p in pieces if a < p < b], b])
    vals = k.eval(pts)
    return SectionBV(math.fsum(np.abs(np.diff(vals)).tolist()), True)


def section_bv(k: Kernel, a: float, b: float, n_max: int = 14,
               growth: float = 0.05, refinements: int = 4) -> SectionBV:
    """Total variation of ``k`` on ``[a, b]``.

    Exact for kernels that are piecewise monotone or have finitely many
    jumps; otherwise the dyadic level sums ``V_0..V_{n_max}`` with a
    divergence flag raised when the last ``refinements`` levels each grow by
    more than ``growth``.
    """
    if not a < b:
        raise ValueError("section_bv needs a < b")
    if not 0 <= n_max <= 24:
        raise ValueError("n_max must lie in [0, 24]")
    exact = _exact_bv(k, a, b)
    if exact is not None:
        return exact
    pts = a + (b - a) * np.arange(2 ** n_max + 1) / 2 ** n_max
    levels = variation_levels(k.eval(pts), n_max)
    tail = levels[-(refinements + 1):]
    diverging = len(tail) == refinements + 1 and all(
        prev > 0 and cur > (1 + growth) * prev for prev, cur in zip(tail[:-1], tail[1:]))
    return SectionBV(float(levels[-1]), False, tuple(levels.tolist()), diverging)


@dataclass(frozen=True)
class KStar:
    value: float
    exact: bool
    divergent: bool = False
    argmax: float = math.nan


def default_shift_grid(k: Kernel, points: int = 401) -> np.ndarray:
    """Shifts s for which [0, 1] - s meets the dilated support of ``k``."""
    lo, hi = k.support()
    lo = -4.0 if lo == -INF else lo
    hi = lo + 8.0 if hi == INF else hi
    grid = np.linspace(lo - 1.0, hi + 1.0, points)
    # windows whose ends sit exactly on a break point
    extra = [v for p in k.breakpoints() for v in (-p, 1.0 - p)]
    return np.unique(np.concatenate([grid, -grid, extra]))


def kstar(k: Kernel, shifts=None, n_max: int = 14) -> KStar:
    """sup over shifts s of the variation of f(· - s) on [0, 1]."""
    shifts = default_shift_grid(k) if shifts is None else np.asarray(shifts, dtype=float)
    best, arg, exact = -1.0, math.nan, True
    for s in shifts:
        sec = section_bv(k, -s, 1.0 - s, n_max)
        if sec.divergent:
            return KStar(INF, sec.exact, True, float(s))
        exact = exact and sec.exact
        if sec.value > best:
            best, arg = sec.value, float(s)
    return KStar(best, exact, False, arg)


def kernel_from_dict(d: dict) -> Kernel:
    fam = d["family"]
    if fam == "fractional":
        return Fractional(d["alpha"])
    if fam == "indicator":
        return Indicator(d["a"], d["b"])
    if fam == "smooth_bump":
        return SmoothBump(d.get("a", -1.0), d.get("b", 1.0))
    if fam == "weierstrass_bump":
        return WeierstrassBump(d.get("a", 0.5), d.get("b", 13), d.get("terms", 20))
    if fam == "piecewise_linear":
        return PiecewiseLinear(tuple(tuple(k) for k in d["knots"]))
    raise ValueError(f"unknown kernel family {fam!r}")

"""Lévy measures of the driving noise and the functionals built on them.

Every functional reduces to the side moment

    M(m, lo, hi) = ∫_{lo < |x| <= hi} |x|^m ρ(dx),

evaluated separately on the positive and negative half-lines.  Stable and
tempered stable sides have the form ``d r^{-γ-1} e^{-l r}`` and are handled
through power integrals and incomplete gamma functions; atoms are summed; a
tabulated tail is integrated exactly as a piecewise power law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .numerics import DEFAULT_QUAD, QuadratureSpec, detect_divergence, integrate

INF = math.inf


class InvariantViolation(AssertionError):
    """A Lévy measure produced a quantity its validity rules out."""


# --- incomplete gamma for arbitrary real shape -------------------------------

def upper_gamma(a: float, z: float) -> float:
    """Γ(a, z) = ∫_z^∞ t^{a-1} e^{-t} dt for real ``a`` and ``z > 0``."""
    if z == INF:
        return 0.0
    if z <= 0:
        raise ValueError("upper_gamma needs z > 0")
    if a > 0:
        return float(special.gamma(a) * special.gammaincc(a, z))
    if a == 0:
        return float(special.exp1(z))
    # Γ(a, z) = (Γ(a+1, z) - z^a e^{-z}) / a
    return (upper_gamma(a + 1.0, z) - math.exp(a * math.log(z) - z)) / a


def _power_integral(e: float, lo: float, hi: float) -> float:
    """∫_lo^hi r^{e-1} dr with 0 <= lo < hi <= ∞."""
    if lo == 0 and e <= 0:
        return INF
    if hi == INF and e >= 0:
        return INF
    if e == 0:
        return math.log(hi) - math.log(lo)
    top = 0.0 if hi == INF else hi ** e
    bot = 0.0 if lo == 0 else lo ** e
    return (top - bot) / e


def _pe_integral(e: float, l: float, lo: float, hi: float) -> float:
    """∫_lo^hi r^{e-1} e^{-l r} dr for ``l > 0``."""
    if lo == 0 and e <= 0:
        return INF
    zl, zh = l * lo, l * hi
    scale = l ** (-e)
    if e > 0:
        if zl <= e:
            lower_hi = special.gamma(e) if zh == INF else special.gamma(e) * special.gammainc(e, zh)
            lower_lo = 0.0 if zl == 0 else special.gamma(e) * special.gammainc(e, zl)
            return float(scale * (lower_hi - lower_lo))
        return scale * (upper_gamma(e, zl) - upper_gamma(e, zh))
    return scale * (upper_gamma(e, zl) - upper_gamma(e, zh))


# --- Lévy measure families ---------------------------------------------------

class LevyMeasure:
    """Base class; subclasses provide :meth:`side_moment`."""

    family = "abstract"

    def side_moment(self, m: float, lo: float, hi: float, side: int) -> float:
        raise NotImplementedError

    def moment(self, m: float, lo: float = 0.0, hi: float = INF) -> float:
        if not lo < hi:
            return 0.0
        return self.side_moment(m, lo, hi, +1) + self.side_moment(m, lo, hi, -1)

    def signed_moment(self, m: float, lo: float = 0.0, hi: float = INF) -> float:
        """``∫_{lo<|x|<=hi} sign(x) |x|^m ρ(dx)``; nan when both sides diverge."""
        if not lo < hi:
            return 0.0
        p = self.side_moment(m, lo, hi, +1)
        q = self.side_moment(m, lo, hi, -1)
        if p == INF and q == INF:
            return math.nan
        return p - q

    def total_mass(self) -> float:
        return self.moment(0.0)

    @property
    def is_symmetric(self) -> bool:
        return False

    def density(self, x):
        raise TypeError(f"{self.family} has no Lebesgue density")

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Stable(LevyMeasure):
    c1: float
    c2: float
    alpha: float

    family = "stable"

    def __post_init__(self):
        if self.c1 < 0 or self.c2 < 0 or self.c1 + self.c2 <= 0:
            raise ValueError("stable Lévy measure needs c1, c2 >= 0 with c1 + c2 > 0")
        if not 0 < self.alpha < 2:
            raise ValueError("stable index alpha must lie in (0, 2)")

    def side_moment(self, m, lo, hi, side):
        d = self.c1 if side > 0 else self.c2
        if d == 0 or not lo < hi:
            return 0.0
        return d * _power_integral(m - self.alpha, lo, hi)

    @property
    def is_symmetric(self):
        return self.c1 == self.c2

    @property
    def xi_constant(self) -> float:
        """C with ξ(u) = C |u|^α; infinite for α <= 1."""
        if self.alpha <= 1:
            return INF
        return (self.c1 + self.c2) * (1 / (self.alpha - 1) + 1 / (2 - self.alpha))

    @property
    def ratio_constant(self) -> float:
        """The constant value of the moment ratio, (2-α)/(α-1)."""
        if self.alpha <= 1:
            return INF
        return (2 - self.alpha) / (self.alpha - 1)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        with np.errstate(divide="ignore"):
            base = np.where(ax > 0, ax ** (-self.alpha - 1), 0.0)
        return np.where(x > 0, self.c1, self.c2) * base

    def to_dict(self):
        return {"family": "stable", "c1": self.c1, "c2": self.c2, "alpha": self.alpha}


@dataclass(frozen=True)
class TemperedStable(LevyMeasure):
    d1: float
    d2: float
    beta: float
    l1: float
    l2: float

    family = "tempered_stable"

    def __post_init__(self):
        if self.d1 < 0 or self.d2 < 0 or self.d1 + self.d2 <= 0:
            raise ValueError("tempered stable needs d1, d2 >= 0 with d1 + d2 > 0")
        if not 0 < self.beta < 2:
            raise ValueError("tempered stable index beta must lie in (0, 2)")
        if self.l1 <= 0 or self.l2 <= 0:
            raise ValueError("tempering rates l1, l2 must be positive")

    def side_moment(self, m, lo, hi, side):
        d, l = (self.d1, self.l1) if side > 0 else (self.d2, self.l2)
        if d == 0 or not lo < hi:
            return 0.0
        return d * _pe_integral(m - self.beta, l, lo, hi)

    @property
    def is_symmetric(self):
        return self.d1 == self.d2 and self.l1 == self.l2

    def density(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        with np.errstate(divide="ignore", over="ignore"):
            pos = np.where(ax > 0, self.d1 * ax ** (-self.beta - 1) * np.exp(-self.l1 * ax), 0.0)
            neg = np.where(ax > 0, self.d2 * ax ** (-self.beta - 1) * np.exp(-self.l2 * ax), 0.0)
        return np.where(x > 0, pos, neg)

    def to_dict(self):
        return {"family": "tempered_stable", "d1": self.d1, "d2": self.d2, "beta": self.beta,
                "l1": self.l1, "l2": self.l2}


@dataclass(frozen=True)
class FiniteAtoms(LevyMeasure):
    """ρ = Σ rate_i δ_{x_i}."""

    atoms: tuple[tuple[float, float], ...]

    family = "atoms"

    def __post_init__(self):
        atoms = tuple((float(x), float(r)) for x, r in self.atoms)
        if not atoms:
            raise ValueError("FiniteAtoms needs at least one atom")
        for x, r in atoms:
            if x == 0 or not math.isfinite(x):
                raise ValueError("atom locations must be finite and nonzero")
            if not r > 0:
                raise ValueError("atom rates must be positive")
        object.__setattr__(self, "atoms", atoms)

    def side_moment(self, m, lo, hi, side):
        tot = [r * abs(x) ** m for x, r in self.atoms
               if (x > 0) == (side > 0) and lo < abs(x) <= hi]
        return math.fsum(tot)

    @property
    def is_symmetric(self):
        pos = sorted((x, r) for x, r in self.atoms if x > 0)
        neg = sorted((-x, r) for x, r in self.atoms if x < 0)
        return pos == neg

    @property
    def locations(self) -> np.ndarray:
        return np.array([x for x, _ in self.atoms])

    @property
    def rates(self) -> np.ndarray:
        return np.array([r for _, r in self.atoms])

    def to_dict(self):
        return {"family": "atoms", "atoms": [list(a) for a in self.atoms]}


@dataclass(frozen=True)
class TabulatedTail(LevyMeasure):
    """Symmetric Lévy measure given by its tail g(r) = ρ([-r, r]^c) on a grid.

    Between grid points g is interpolated linearly in log-log coordinates;
    below the first point the first segment's power law is continued; beyond
    the last point g decays like ``r^tail_exponent`` or, with no exponent,
    vanishes (the remaining mass then sits at ``|x| = r[-1]``).
    """

    r: tuple[float, ...]
    g: tuple[float, ...]
    tail_exponent: float | None = None
    _slopes: tuple[float, ...] = field(init=False, repr=False, compare=False)

    family = "tabulated"

    def __post_init__(self):
        r = tuple(float(v) for v in self.r)
        g = tuple(float(v) for v in self.g)
        if len(r) < 2 or len(r) != len(g):
            raise ValueError("tabulated tail needs matching r and g grids with >= 2 points")
        if any(v <= 0 for v in r) or any(b <= a for a, b in zip(r, r[1:])):
            raise ValueError("r grid must be positive and strictly increasing")
        if any(v <= 0 or not math.isfinite(v) for v in g):
            raise ValueError("g values must be positive and finite")
        if any(b > a for a, b in zip(g, g[1:])):
            raise ValueError("g must be nonincreasing")
        if self.tail_exponent is not None and not self.tail_exponent < 0:
            raise ValueError("tail exponent must be negative")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "g", g)
        slopes = tuple(math.log(g[k + 1] / g[k]) / math.log(r[k + 1] / r[k])
                       for k in range(len(r) - 1))
        object.__setattr__(self, "_slopes", slopes)
        near_zero = detect_divergence(lambda t: 2 * t * self.tail(t), 0.0, 1.0, check_upper=False)
        if not near_zero.is_finite:
            raise ValueError("tabulated tail violates ∫(1 ∧ x²) ρ(dx) < ∞ near 0")

    # segments as (lo, hi, coefficient, exponent) with g(r) = c r^s on (lo, hi]
    def _segments(self):
        r, g, s = self.r, self.g, self._slopes
        segs = [(0.0, r[0], g[0] / r[0] ** s[0], s[0])]
        for k in range(len(r) - 1):
            segs.append((r[k], r[k + 1], g[k] / r[k] ** s[k], s[k]))
        if self.tail_exponent is not None:
            p = self.tail_exponent
            segs.append((r[-1], INF, g[-1] / r[-1] ** p, p))
        return segs

    @property
    def left_exponent(self) -> float:
        return self._slopes[0]

    def tail(self, u: float) -> float:
        if u <= 0:
            return INF if self.left_exponent < 0 else self.g[0]
        for lo, hi, c, s in self._segments():
            if lo < u <= hi:
                return c * u ** s
        return 0.0

    def _power_tail_integral(self, q: float, lo: float, hi: float) -> float:
        """∫_lo^hi r^q g(r) dr."""
        total = []
        for a, b, c, s in self._segments():
            a, b = max(a, lo), min(b, hi)
            if a < b:
                total.append(c * _power_integral(q + s + 1, a, b))
        return math.fsum(total) if all(math.isfinite(t) for t in total) else INF

    def _full_moment(self, m, lo, hi):
        if not lo < hi:
            return 0.0
        if m == 0:
            return self.tail(lo) - self.tail(hi)
        if m < 0 and lo == 0:
            raise ValueError("negative moments near zero are not supported")
        integral = self._power_tail_integral(m - 1, lo, hi)
        if integral == INF:
            return INF
        head = 0.0 if lo == 0 else lo ** m * self.tail(lo)
        end = 0.0 if hi == INF else hi ** m * self.tail(hi)
        return head - end + m * integral

    def side_moment(self, m, lo, hi, side):
        return 0.5 * self._full_moment(m, lo, hi)

    def moment(self, m, lo=0.0, hi=INF):
        return self._full_moment(m, lo, hi)

    @property
    def is_symmetric(self):
        return True

    def to_dict(self):
        return {"family": "tabulated", "r": list(self.r), "g": list(self.g),
                "tail_exponent": self.tail_exponent}


# --- noise components --------------------------------------------------------

@dataclass(frozen=True)
class NoiseComponent:
    """One atom of the mixing measure: weight plus triplet (θ, σ², ρ)."""

    weight: float = 1.0
    theta: float = 0.0
    sigma2: float = 0.0
    rho: LevyMeasure | None = None

    def __post_init__(self):
        if not self.weight > 0:
            raise ValueError("component weight must be positive")
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be nonnegative")
        if not self.sigma2 > 0 and (self.rho is None or self.rho.total_mass() == 0):
            raise ValueError("noise must be purely stochastic: a component with sigma2 = 0 "
                             "needs a nonzero Lévy measure")

    @property
    def has_jumps(self) -> bool:
        return self.rho is not None

    @property
    def is_symmetric(self) -> bool:
        return self.theta == 0 and (self.rho is None or self.rho.is_symmetric)


@dataclass(frozen=True)
class MixedNoise:
    components: tuple[NoiseComponent, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("mixed noise needs at least one component")
        object.__setattr__(self, "components", comps)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)


# --- functionals -------------------------------------------------------------

def _check_u(u):
    if not u > 0:
        raise ValueError(f"u must be positive, got {u}")


def tail_mass(rho: LevyMeasure, u: float) -> float:
    """ρ([-u, u]^c)."""
    _check_u(u)
    return rho.moment(0.0, u, INF)


def truncated_second_moment(rho: LevyMeasure, u: float) -> float:
    """∫_{|x| <= u} x² ρ(dx)."""
    _check_u(u)
    val = rho.moment(2.0, 0.0, u)
    if not math.isfinite(val):
        raise InvariantViolation(f"{rho.family}: second moment near zero diverges")
    return val


def tail_first_moment(rho: LevyMeasure, u: float) -> float:
    """∫_{|x| > u} |x| ρ(dx), possibly +inf."""
    _check_u(u)
    return rho.moment(1.0, u, INF)


def xi(rho: LevyMeasure | None, u: float) -> float:
    """ξ(u) = ∫ (|ux|² ∧ |ux|) ρ(dx)."""
    if rho is None or u == 0:
        return 0.0
    if isinstance(rho, Stable):
        return rho.xi_constant * abs(u) ** rho.alpha
    a = 1.0 / abs(u)
    return u * u * rho.moment(2.0, 0.0, a) + abs(u) * rho.moment(1.0, a, INF)


def xi_convex(rho: LevyMeasure | None, u: float) -> float:
    """Convex comparison function: x² below |ux| = 1, 2|ux| - 1 above."""
    if rho is None or u == 0:
        return 0.0
    a = 1.0 / abs(u)
    big = rho.moment(1.0, a, INF)
    if big == INF:
        return INF
    return u * u * rho.moment(2.0, 0.0, a) + 2 * abs(u) * big - rho.moment(0.0, a, INF)


def xi_weighted(rho: LevyMeasure | None, u: float) -> float:
    """∫ (|ux| ∧ |ux|²)(1 ∧ x^{-2}) ρ(dx)."""
    if rho is None or u == 0:
        return 0.0
    u = abs(u)
    a = 1.0 / u
    parts = [u * u * rho.moment(2.0, 0.0, min(1.0, a))]
    if a < 1:
        parts.append(u * rho.moment(1.0, a, 1.0))
    else:
        parts.append(u * u * rho.moment(0.0, 1.0, a))
    parts.append(u * rho.moment(-1.0, max(1.0, a), INF))
    return INF if any(p == INF for p in parts) else math.fsum(parts)


def xi_truncated(rho: LevyMeasure | None, u: float, eps: float) -> float:
    """ξ restricted to jumps of size at most ``eps``."""
    if rho is None or u == 0:
        return 0.0
    a = 1.0 / abs(u)
    if a >= eps:
        return u * u * rho.moment(2.0, 0.0, eps)
    return u * u * rho.moment(2.0, 0.0, a) + abs(u) * rho.moment(1.0, a, eps)


def xi_quad(rho: LevyMeasure, u: float, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """ξ(u) by direct quadrature against the density (oracle route)."""
    if u == 0:
        return 0.0
    if isinstance(rho, FiniteAtoms):
        return math.fsum(r * min((u * x) ** 2, abs(u * x)) for x, r in rho.atoms)
    a = 1.0 / abs(u)

    def small(x):
        return (u * x) ** 2 * float(rho.density(x))

    def large(x):
        return abs(u * x) * float(rho.density(x))

    parts = [integrate(small, -a, 0.0, spec.with_points([])).value,
             integrate(small, 0.0, a, spec).value,
             integrate(large, -INF, -a, spec).value,
             integrate(large, a, INF, spec).value]
    return math.fsum(parts)


def moment_ratio(rho: LevyMeasure | None, u: float) -> float:
    """u ∫_{|x|>u} |x| ρ / ∫_{|x|<=u} x² ρ with a/0 := ∞ (including 0/0)."""
    _check_u(u)
    if rho is None:
        return INF
    if isinstance(rho, Stable):
        return rho.ratio_constant
    num = u * tail_first_moment(rho, u)
    den = truncated_second_moment(rho, u)
    if den == 0:
        return INF
    return num / den


def karamata_ratio_limit(beta: float) -> float:
    """Large-u limit of the moment ratio for a tail regularly varying of index β ∈ [-2, -1)."""
    if not -2 <= beta < -1:
        raise ValueError("index must lie in [-2, -1)")
    if beta == -2:
        return 0.0
    return (1 - 1 / (beta + 1)) / (2 / (beta + 2) - 1)


def total_mass(rho: LevyMeasure | None) -> float:
    return 0.0 if rho is None else rho.total_mass()


@dataclass(frozen=True)
class AbsMoment:
    value: float
    cause: str | None = None

    @property
    def finite(self) -> bool:
        return self.cause is None


def abs_moment(rho: LevyMeasure | None, p: float, weighted: bool = False) -> AbsMoment:
    """∫ |x|^p ρ(dx), or with ``weighted`` ∫ |x|^p (1 ∨ x²)^{-1} ρ(dx)."""
    if not 0 < p <= 2:
        raise ValueError("p must lie in (0, 2]")
    if rho is None:
        return AbsMoment(0.0)
    near = rho.moment(p, 0.0, 1.0)
    far = rho.moment(p - 2.0 if weighted else p, 1.0, INF)
    causes = [c for c, v in (("at-zero", near), ("at-infinity", far)) if v == INF]
    if causes:
        return AbsMoment(INF, "+".join(causes))
    return AbsMoment(near + far)


def mean_offset(rho: LevyMeasure | None) -> float | None:
    """∫ (x - [[x]]) ρ(dx); None when ∫_{|x|>1} |x| ρ = ∞."""
    if rho is None:
        return 0.0
    if rho.moment(1.0, 1.0, INF) == INF:
        return None
    return rho.signed_moment(1.0, 1.0, INF) - rho.signed_moment(0.0, 1.0, INF)


def compensator(rho: LevyMeasure | None, eps: float) -> float:
    """∫_{|x|>eps} [[x]] ρ(dx) with [[x]] = x / (|x| ∨ 1)."""
    if rho is None:
        return 0.0
    if eps >= 1:
        return rho.signed_moment(0.0, eps, INF)
    return rho.signed_moment(1.0, eps, 1.0) + rho.signed_moment(0.0, 1.0, INF)


def k_function(rho: LevyMeasure | None, sigma2: float, x: float) -> float:
    """x² σ² + ∫ [[xy]]² ρ(dy)."""
    if x == 0:
        return 0.0
    out = x * x * sigma2
    if rho is not None:
        a = 1.0 / abs(x)
        out += x * x * rho.moment(2.0, 0.0, a) + rho.moment(0.0, a, INF)
    return out


def b_function(rho: LevyMeasure | None, theta: float, x: float) -> float:
    """x θ + ∫ ([[xy]] - x[[y]]) ρ(dy)."""
    if x == 0:
        return 0.0
    out = x * theta
    if rho is None:
        return out
    sgn = 1.0 if x > 0 else -1.0
    ax = abs(x)
    a = 1.0 / ax

    def side(s):
        parts = []
        if a < 1:
            parts.append(rho.side_moment(0.0, a, 1.0, s) - ax * rho.side_moment(1.0, a, 1.0, s))
        elif a > 1:
            parts.append(ax * (rho.side_moment(1.0, 1.0, a, s) - rho.side_moment(0.0, 1.0, a, s)))
        parts.append((1 - ax) * rho.side_moment(0.0, max(1.0, a), INF, s))
        return math.fsum(parts)

    return out + sgn * (side(+1) - side(-1))


# --- condition checks --------------------------------------------------------

@dataclass(frozen=True)
class GeometricGrid:
    lo: float = 1e-3
    hi: float = 1e4
    points: int = 64

    def __post_init__(self):
        if self.points < 16:
            raise ValueError("ratio grid needs at least 16 points")
        if not (self.lo > 0 and self.hi > 0) or math.log10(self.hi / self.lo) < 6:
            raise ValueError("ratio grid must span at least 6 decades")

    def values(self) -> np.ndarray:
        return np.geomspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class RatioReport:
    u0_holds: tuple[bool, ...]
    u0_method: tuple[str, ...]
    u0_heuristic: tuple[bool, ...]
    u00_sup: float
    u00_heuristic: bool
    notes: tuple[str, ...] = ()

    @property
    def u0_certified(self) -> bool:
        return all(self.u0_holds) and not any(self.u0_heuristic)

    @property
    def u00_certified(self) -> bool:
        return math.isfinite(self.u00_sup) and not self.u00_heuristic


def _u0_decision(rho: LevyMeasure | None) -> tuple[bool, str, bool]:
    if rho is None:
        return True, "vacuous: no jump part", False
    if isinstance(rho, Stable):
        if rho.alpha > 1:
            return True, f"regular variation of index {-rho.alpha:g} in [-2,-1)", False
        return False, "tail first moment infinite", False
    if isinstance(rho, (TemperedStable, FiniteAtoms)):
        return True, "finite second moment beyond 1", False
    if isinstance(rho, TabulatedTail):
        p = rho.tail_exponent
        if p is None or p < -2:
            return True, "finite second moment beyond 1 (tail hint)", True
        if p < -1:
            return True, f"regular variation of index {p:g} (tail hint)", True
        return False, "tail first moment infinite (tail hint)", True
    raise TypeError(rho)


def _u00_component(rho: LevyMeasure, grid: np.ndarray) -> tuple[float, bool]:
    if isinstance(rho, Stable):
        return rho.ratio_constant, False
    if isinstance(rho, FiniteAtoms):
        # below the smallest atom the truncated second moment vanishes
        return INF, False
    vals = [moment_ratio(rho, float(u)) for u in grid]
    sup = max(vals)
    if isinstance(rho, TemperedStable):
        limit0 = (2 - rho.beta) / (rho.beta - 1) if rho.beta > 1 else INF
        if limit0 == INF:
            return INF, False
        sup = max(sup, limit0)
    return sup, True


def check_ratio_conditions(noise: MixedNoise, u_grid: GeometricGrid | None = None) -> RatioReport:
    """Decide the limsup and uniform moment-ratio conditions per component."""
    grid = (u_grid or GeometricGrid()).values()
    holds, methods, heur, notes = [], [], [], []
    sups, sup_heur = [], False
    for i, comp in enumerate(noise):
        h, how, is_h = _u0_decision(comp.rho)
        holds.append(h)
        methods.append(how)
        heur.append(is_h)
        if comp.rho is None:
            continue
        s, s_h = _u00_component(comp.rho, grid)
        sups.append(s)
        sup_heur = sup_heur or s_h
        if s_h:
            notes.append(f"component {i}: uniform ratio bound taken over a finite u-grid")
    return RatioReport(tuple(holds), tuple(methods), tuple(heur),
                       max(sups) if sups else 0.0, sup_heur, tuple(notes))


def check_infinite_variation_noise(comp: NoiseComponent) -> bool | None:
    """∫_{-1}^{1} |x| ρ(dx) = ∞ or σ² > 0; None when undecidable."""
    if comp.sigma2 > 0:
        return True
    rho = comp.rho
    if rho is None:
        return False
    if isinstance(rho, Stable):
        return rho.alpha >= 1
    if isinstance(rho, TemperedStable):
        return rho.beta >= 1
    if isinstance(rho, FiniteAtoms):
        return False
    if isinstance(rho, TabulatedTail):
        st = detect_divergence(rho.tail, 0.0, 1.0, check_upper=False)
        if st.is_indeterminate:
            return None
        return st.is_divergent
    raise TypeError(rho)


def levy_from_dict(d: dict | None) -> LevyMeasure | None:
    if d is None:
        return None
    fam = d["family"]
    if fam == "stable":
        return Stable(d["c1"], d["c2"], d["alpha"])
    if fam == "tempered_stable":
        return TemperedStable(d["d1"], d["d2"], d["beta"], d["l1"], d["l2"])
    if fam == "atoms":
        return FiniteAtoms(tuple(tuple(a) for a in d["atoms"]))
    if fam == "tabulated":
        return TabulatedTail(tuple(d["r"]), tuple(d["g"]), d.get("tail_exponent"))
    raise ValueError(f"unknown Lévy family {fam!r}")

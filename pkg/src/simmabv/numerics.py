"""Quadrature, divergence detection, dyadic grids and seeding.

Every integral used by the criteria layer goes through :func:`integrate` or
:func:`detect_divergence`; every random stream used by the simulator is
derived from a :class:`SeedSpec`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _spi


class NoConvergence(RuntimeError):
    """Adaptive quadrature gave up; ``partial`` holds the last estimate."""

    def __init__(self, message: str, partial: float, error: float):
        super().__init__(message)
        self.partial = partial
        self.error = error


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_depth: int = 40
    singular_points: tuple[float, ...] = ()
    tail_transform: bool = True

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("quadrature tolerances must be positive")
        if self.max_depth < 10:
            raise ValueError("max_depth must be >= 10")
        object.__setattr__(self, "singular_points", tuple(float(p) for p in self.singular_points))

    def with_points(self, points: Sequence[float]) -> "QuadratureSpec":
        return QuadratureSpec(self.rel_tol, self.abs_tol, self.max_depth,
                              tuple(self.singular_points) + tuple(points), self.tail_transform)


DEFAULT_QUAD = QuadratureSpec()


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float


# --- three-valued integral status, shared by noise_models and criteria -------

@dataclass(frozen=True)
class Finite:
    value: float
    note: str = ""

    is_finite = True
    is_divergent = False
    is_indeterminate = False


@dataclass(frozen=True)
class Divergent:
    cause: str

    value = math.inf
    is_finite = False
    is_divergent = True
    is_indeterminate = False


@dataclass(frozen=True)
class Indeterminate:
    reason: str

    value = math.nan
    is_finite = False
    is_divergent = False
    is_indeterminate = True


Status = Finite | Divergent | Indeterminate


def status_of(value: float, cause: str = "infinite") -> Status:
    """Wrap a number coming from an exact formula (``inf`` means divergent)."""
    if math.isnan(value):
        return Indeterminate("nan")
    if math.isinf(value):
        return Divergent(cause)
    return Finite(float(value))


def status_sum(parts: Sequence[Status], weights: Sequence[float] | None = None) -> Status:
    """Weighted sum with divergence dominating indeterminacy."""
    if weights is None:
        weights = [1.0] * len(parts)
    div = [p for p, w in zip(parts, weights) if p.is_divergent and w > 0]
    if div:
        return div[0]
    ind = [p for p in parts if p.is_indeterminate]
    if ind:
        return ind[0]
    return Finite(math.fsum(w * p.value for p, w in zip(parts, weights)))


# --- quadrature --------------------------------------------------------------

def integrate(fn: Callable[[float], float], a: float, b: float,
              spec: QuadratureSpec = DEFAULT_QUAD) -> QuadResult:
    """Adaptive Gauss-Kronrod quadrature of ``fn`` over ``[a, b]``.

    ``a``/``b`` may be infinite when ``spec.tail_transform`` is set.  The
    interval is split at every declared singular point so that each piece has
    its singularities at the endpoints only.
    """
    if a == b:
        return QuadResult(0.0, 0.0)
    if a > b:
        r = integrate(fn, b, a, spec)
        return QuadResult(-r.value, r.error)
    if (math.isinf(a) or math.isinf(b)) and not spec.tail_transform:
        raise ValueError("unbounded domain requires tail_transform")
    cuts = sorted({p for p in spec.singular_points if a < p < b})
    # unbounded pieces are anchored at a finite point so QUADPACK's infinite
    # rule sees a half-line
    if math.isinf(a) and math.isinf(b) and not cuts:
        cuts = [0.0]
    edges = [a, *cuts, b]
    total, err = [], 0.0
    limit = 25 * spec.max_depth
    for lo, hi in zip(edges[:-1], edges[1:]):
        if math.isinf(lo) and math.isinf(hi):
            raise ValueError("degenerate unbounded piece")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            out = _spi.quad(fn, lo, hi, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                            limit=limit, full_output=1)
        val, e = out[0], out[1]
        if not math.isfinite(val) or (len(out) > 3 and e > 1e3 * max(spec.rel_tol * abs(val), spec.abs_tol)):
            raise NoConvergence(f"quadrature failed on [{lo}, {hi}]", val, e)
        total.append(val)
        err += e
    return QuadResult(math.fsum(total), err)


def detect_divergence(fn: Callable[[float], float], a: float, b: float,
                      spec: QuadratureSpec = DEFAULT_QUAD, *,
                      growth: float = 0.10, refinements: int = 4,
                      max_steps: int = 12, shrink: float = 100.0,
                      check_lower: bool = True, check_upper: bool = True) -> Status:
    """Classify ``∫_a^b fn`` for nonnegative ``fn`` as finite or divergent.

    Each end of the domain is approached through nested truncations whose
    distance to the end shrinks (or, for an infinite end, grows) by ``shrink``
    per step.  The truncated integrals are accumulated piece by piece so that
    every quadrature call spans a single factor of ``shrink``.  An end is
    declared divergent when the last ``refinements`` steps each grow the
    truncated integral by more than ``growth``.
    """
    if a >= b:
        return Finite(0.0)
    mid = _anchor(a, b)
    ends = []
    if check_lower:
        ends.append(("lower", a))
    if check_upper:
        ends.append(("upper", b))
    tails = {}
    for side, end in ends:
        seq, prev = [], mid
        for k in range(1, max_steps + 1):
            cut = _truncation(end, mid, shrink ** k, side)
            try:
                inc = _piece(fn, cut, prev, spec)
            except NoConvergence as exc:
                return Indeterminate(f"quadrature failed near {side} end: {exc}")
            prev = cut
            seq.append((seq[-1] if seq else 0.0) + inc)
            if _diverging(seq, growth, refinements):
                where = "at +inf" if math.isinf(end) and end > 0 else \
                        "at -inf" if math.isinf(end) else f"at {end:g}"
                return Divergent(where)
            if _settled(seq):
                break
        else:
            return Indeterminate(f"no decision at {side} end after {max_steps} refinements")
        tails[side] = seq[-1] + _geometric_remainder(seq)
    partial = math.fsum(tails.values())
    try:
        full = integrate(fn, a, b, spec).value
    except NoConvergence:
        return Finite(partial, note="extrapolated")
    if full < 0 or abs(full - partial) > 1e-3 * max(abs(partial), spec.abs_tol):
        return Finite(partial, note="extrapolated")
    return Finite(full)


def _geometric_remainder(seq):
    if len(seq) < 3:
        return 0.0
    last, before = seq[-1] - seq[-2], seq[-2] - seq[-3]
    if not 0 < last < before:
        return 0.0
    r = last / before
    return last * r / (1 - r)


def _piece(fn, x, y, spec):
    """Integral of a nonnegative ``fn`` between ``x`` and ``y`` (either order)."""
    if x == y:
        return 0.0
    lo, hi = min(x, y), max(x, y)
    val = integrate(fn, lo, hi, spec).value
    if val < -max(spec.abs_tol, 1e-12 * abs(val)):
        raise NoConvergence(f"negative integral of a nonnegative function on [{lo}, {hi}]", val, math.inf)
    return max(val, 0.0)


def _anchor(a: float, b: float) -> float:
    if math.isinf(a) and math.isinf(b):
        return 0.0
    if math.isinf(a):
        return b - 1.0
    if math.isinf(b):
        return a + 1.0
    return 0.5 * (a + b)


def _truncation(end: float, mid: float, factor: float, side: str) -> float:
    if math.isinf(end):
        return mid + math.copysign(factor, end)
    return end + (mid - end) / factor


def _growths(seq: list[float]) -> list[float]:
    out = []
    for prev, cur in zip(seq[:-1], seq[1:]):
        if prev <= 0:
            out.append(0.0 if cur <= 0 else math.inf)
        else:
            out.append((cur - prev) / prev)
    return out


def _diverging(seq, growth, refinements):
    g = _growths(seq)
    return len(g) >= refinements and all(x > growth for x in g[-refinements:])


def _settled(seq):
    g = _growths(seq)
    if len(g) >= 1 and g[-1] <= 1e-9:
        return True
    # geometric decay of the increments with a small last step
    return len(g) >= 3 and g[-1] < 0.02 and g[-1] < g[-2] < g[-3]


# --- dyadic grids and variation ----------------------------------------------

@dataclass(frozen=True)
class DyadicGrid:
    a: float
    b: float
    n: int

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("dyadic grid needs a < b")
        if self.n < 0:
            raise ValueError("level must be nonnegative")

    @property
    def size(self) -> int:
        return 2 ** self.n + 1

    @property
    def step(self) -> float:
        return (self.b - self.a) / 2 ** self.n

    @property
    def points(self) -> np.ndarray:
        i = np.arange(self.size, dtype=float)
        return self.a + i * (self.b - self.a) / 2 ** self.n


def dyadic_variation(values) -> float:
    """Sum of absolute increments of ``values``.

    Increments are split exactly into two floats (TwoSum) and summed with
    ``math.fsum``, so the result is the correctly rounded variation of the
    given samples.  This makes level sums computed from nested subsamples
    monotone bit-for-bit.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 2:
        return 0.0
    a, b = v[1:], v[:-1]
    hi = a - b
    bb = hi - a
    lo = (a - (hi - bb)) - (b + bb)
    sign = np.where(hi < 0, -1.0, 1.0)
    return math.fsum(np.concatenate([sign * hi, sign * lo]).tolist())


def variation_levels(values, n: int | None = None) -> np.ndarray:
    """Level sums ``V_0..V_n`` from samples on a level-``n`` dyadic grid."""
    v = np.asarray(values, dtype=float)
    if n is None:
        n = int(round(math.log2(v.size - 1)))
    if v.size != 2 ** n + 1:
        raise ValueError(f"expected {2 ** n + 1} samples for level {n}, got {v.size}")
    return np.array([dyadic_variation(v[:: 2 ** (n - k)]) for k in range(n + 1)])


# --- seeding -----------------------------------------------------------------

@dataclass(frozen=True)
class SeedSpec:
    """Root seed plus a derivation path, e.g. ``(replica, component)``."""

    root: int
    path: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not 0 <= int(self.root) < 2 ** 64:
            raise ValueError("root seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "path", tuple(int(p) for p in self.path))

    def child(self, *idx: int) -> "SeedSpec":
        return SeedSpec(self.root, self.path + tuple(idx))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.root), spawn_key=self.path)
        return np.random.Generator(np.random.PCG64(ss))

"""The measure d mu_k, weighted quadrature, L^p_k norms and concentration ratios.

d mu_k(x) = |x|^(2k+1) / (2^(k+1) Gamma(k+1)) dx on the real line.

Integrals are computed with composite Gauss rules over panels.  Panels never
straddle the origin, a support edge or a declared zero of the integrand.  At a
point where the integrand behaves like |x - x0|^rho (the origin, where the
density vanishes like |x|^(2k+1), or a zero of f raised to the power p) the
adjacent panel uses a Gauss-Jacobi rule that absorbs the algebraic factor, so
convergence stays geometric.  Panel counts are doubled until two successive
estimates agree to the requested relative tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import special as sp

from .errors import NonConvergence, ParameterOutOfRange, ZeroSignal
from .special import as_order

MAX_PANELS = 2 ** 14


def mu_constant(k) -> float:
    """Normalizing constant 1/(2^(k+1) Gamma(k+1)) of d mu_k."""
    k = as_order(k)
    return math.exp(-(k + 1.0) * math.log(2.0) - math.lgamma(k + 1.0))


def mu_weight(k, x):
    """Density |x|^(2k+1)/(2^(k+1) Gamma(k+1)) of d mu_k."""
    k = as_order(k)
    out = mu_constant(k) * np.abs(np.asarray(x, dtype=float)) ** (2.0 * k + 1.0)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class QuadratureSpec:
    """Quadrature controls.

    radius caps the integration half-width (None: use the signal's decay
    radius); panels is the starting panel count of the doubling refinement.
    """

    radius: Optional[float] = None
    panels: int = 16
    nodes_per_panel: int = 32
    rel_tol: float = 1e-10

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-3):
            raise ParameterOutOfRange("rel_tol must lie in (0, 1e-3]")
        if int(self.panels) < 2:
            raise ParameterOutOfRange("panels must be >= 2")
        if int(self.nodes_per_panel) < 8:
            raise ParameterOutOfRange("nodes_per_panel must be >= 8")
        if self.radius is not None and not self.radius > 0:
            raise ParameterOutOfRange("radius must be positive")

    def window(self, decay_radius: float) -> float:
        if self.radius is None:
            return float(decay_radius)
        return float(min(self.radius, decay_radius))


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint open intervals, sorted.  Endpoints may be infinite."""

    intervals: tuple = ()

    def __post_init__(self):
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        for lo, hi in ivs:
            if not lo < hi:
                raise ParameterOutOfRange(f"interval ({lo}, {hi}) is empty or reversed")
        for (_, h0), (l1, _) in zip(ivs, ivs[1:]):
            if not h0 <= l1:
                raise ParameterOutOfRange("intervals must be sorted and disjoint")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def from_pairs(cls, pairs) -> "IntervalSet":
        """Build from arbitrary pairs, merging overlaps."""
        ivs = sorted((float(a), float(b)) for a, b in pairs if a < b)
        merged: list[list[float]] = []
        for lo, hi in ivs:
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        return cls(tuple(tuple(m) for m in merged))

    @classmethod
    def symmetric(cls, r: float) -> "IntervalSet":
        return cls(((-float(r), float(r)),))

    @classmethod
    def real_line(cls) -> "IntervalSet":
        return cls(((-math.inf, math.inf),))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for a0, a1 in self.intervals:
            for b0, b1 in other.intervals:
                lo, hi = max(a0, b0), min(a1, b1)
                if lo < hi:
                    out.append((lo, hi))
        return IntervalSet.from_pairs(out)

    def complement(self) -> "IntervalSet":
        out = []
        prev = -math.inf
        for lo, hi in self.intervals:
            if prev < lo:
                out.append((prev, lo))
            prev = hi
        if prev < math.inf:
            out.append((prev, math.inf))
        return IntervalSet.from_pairs(out)

    def contains(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        m = np.zeros(x.shape, dtype=bool)
        for lo, hi in self.intervals:
            m |= (x > lo) & (x < hi)
        return m

    def endpoints(self) -> list[float]:
        return [e for iv in self.intervals for e in iv if math.isfinite(e)]

    def total_length(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)

    def to_list(self) -> list:
        return [list(iv) for iv in self.intervals]


def gamma_measure(E: IntervalSet, k) -> float:
    """mu_k-measure of an interval set, from the antiderivative of the density."""
    k = as_order(k)
    e = 2.0 * k + 2.0
    c = mu_constant(k) / e

    def anti(x):
        if math.isinf(x):
            return math.copysign(math.inf, x)
        return math.copysign(abs(x) ** e, x) * c

    return float(sum(anti(hi) - anti(lo) for lo, hi in E.intervals))


class Signal:
    """Complex-valued function of a real variable with decay metadata.

    Parameters
    ----------
    func : callable
        Vectorized map from a float array to a complex array.
    decay_radius : float
        |f| is negligible outside [-decay_radius, decay_radius].
    support : IntervalSet, optional
        Exact support when compact; quadrature clips to it.
    breaks : sequence of float
        Points where f is not smooth (jumps); never inside a panel.
    zeros : sequence of (x, order)
        Points where f vanishes like |x - x0|^order.
    bandwidth : float
        Angular frequency beyond which the chirp-free part of f has
        negligible spectrum; sets minimum panel counts.
    chirp : float
        f = exp(i chirp x^2) g with g of the given bandwidth.
    critical_points : sequence of float
        Extra points probed by the grid supremum.
    jump : (amplitude, r), optional
        Marks f = amplitude * chi_(-r, r); used by spectral tail models.
    """

    def __init__(self, func: Callable, decay_radius: float, label: str = "", seed=None, *,
                 support: Optional[IntervalSet] = None, breaks: Sequence[float] = (),
                 zeros: Sequence = (), bandwidth: float = 1.0, chirp: float = 0.0,
                 critical_points: Sequence[float] = (), jump=None, gauss=None,
                 tail=None, params: Optional[dict] = None):
        self._func = func
        self.decay_radius = float(decay_radius)
        self.label = label
        self.seed = seed
        self.support = support
        self.breaks = tuple(float(b) for b in breaks)
        self.zeros = tuple((float(z), float(o)) for z, o in zeros)
        self.bandwidth = float(bandwidth)
        self.chirp = float(chirp)
        self.critical_points = tuple(float(c) for c in critical_points)
        self.jump = jump
        # gauss = (z, m): f = amplitude * x^m exp(-z x^2); exact spectral radius
        self.gauss = gauss
        self.tail = tail
        self.params = dict(params or {})

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.asarray(self._func(x), dtype=complex)

    def window(self, quad: QuadratureSpec) -> float:
        return quad.window(self.decay_radius)

    def region(self, quad: QuadratureSpec) -> IntervalSet:
        w = self.window(quad)
        reg = IntervalSet.symmetric(w)
        if self.support is not None:
            reg = reg.intersect(self.support)
        return reg

    def scaled(self, c: complex) -> "Signal":
        """c * f with the same metadata."""
        c = complex(c)
        func = self._func
        jump = None if self.jump is None else (self.jump[0] * c, self.jump[1])
        gauss = None if self.gauss is None else (self.gauss[0], self.gauss[1], self.gauss[2] * c)
        zeros = self.zeros if c != 0 else ()
        out = Signal(lambda x: c * func(x), self.decay_radius, self.label, self.seed,
                     support=self.support, breaks=self.breaks, zeros=zeros,
                     bandwidth=self.bandwidth, chirp=self.chirp,
                     critical_points=self.critical_points, jump=jump, gauss=gauss,
                     tail=None if self.tail is None else self.tail.scaled(c),
                     params=self.params)
        return out

    def restricted(self, E: IntervalSet) -> "Signal":
        """chi_E f, carrying the edges of E as breakpoints."""
        func = self._func

        def g(x):
            return np.where(E.contains(x), func(x), 0.0)

        sup = E if self.support is None else self.support.intersect(E)
        return Signal(g, self.decay_radius, f"{self.label}|E", self.seed, support=sup,
                      breaks=self.breaks + tuple(E.endpoints()), zeros=self.zeros,
                      bandwidth=self.bandwidth, chirp=self.chirp,
                      critical_points=self.critical_points, params=self.params)

    def spectral_radius(self, beta: float = 0.0) -> float:
        """Dunkl-frequency radius beyond which D_k(exp(i beta x^2) f) is negligible."""
        if self.gauss is not None:
            z, m, _ = self.gauss
            zp = complex(z) - 1j * beta
            s = zp.real
            return 2.0 * abs(zp) * math.sqrt((40.0 + 4.0 * m) / s)
        r = self.decay_radius
        if self.support is not None and not self.support.is_empty:
            r = max(abs(e) for e in self.support.endpoints()) if self.support.endpoints() else r
        return self.bandwidth + 2.0 * abs(beta + self.chirp) * r


# ---------------------------------------------------------------------------
# Quadrature rules
# ---------------------------------------------------------------------------

@lru_cache(maxsize=512)
def _jacobi(n: int, alpha: float, beta: float):
    if alpha == 0.0 and beta == 0.0:
        t, w = sp.roots_legendre(n)
    else:
        t, w = sp.roots_jacobi(n, alpha, beta)
    return np.asarray(t), np.asarray(w)


def _panel(a: float, b: float, pa: float, pb: float, n: int):
    """Nodes and weights for int_a^b h(x) dx where h ~ (x-a)^pa (b-x)^pb.

    Returned weights act on h itself: the algebraic factors are divided out
    of the Jacobi weights.
    """
    t, w = _jacobi(n, float(pb), float(pa))
    half = 0.5 * (b - a)
    x = a + (t + 1.0) * half
    ww = w * half
    if pa != 0.0:
        ww = ww / (1.0 + t) ** pa
    if pb != 0.0:
        ww = ww / (1.0 - t) ** pb
    return x, ww


@dataclass
class Rule:
    nodes: np.ndarray
    weights: np.ndarray  # include the d mu_k density


def build_rule(region: IntervalSet, k: float, panels: int, n: int, *,
               breaks: Sequence[float] = (), singular: Optional[dict] = None,
               origin_power: float = 0.0) -> Rule:
    """Composite rule for int_region g d mu_k.

    singular maps points to the exponent of the integrand's algebraic
    behaviour there; origin_power is added at x = 0 on top of the density's
    own exponent 2k + 1.
    """
    k = as_order(k)
    singular = dict(singular or {})
    c = mu_constant(k)
    dens_pow = 2.0 * k + 1.0
    segs = []
    for lo, hi in region.intervals:
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ParameterOutOfRange("quadrature region must be bounded")
        pts = {lo, hi}
        if lo < 0.0 < hi:
            pts.add(0.0)
        for b in list(breaks) + list(singular):
            if lo < b < hi:
                pts.add(float(b))
        pts = sorted(pts)
        segs.extend(zip(pts[:-1], pts[1:]))
    if not segs:
        return Rule(np.zeros(0), np.zeros(0))
    total = sum(b - a for a, b in segs)

    def power_at(x):
        p = singular.get(x, 0.0)
        if x == 0.0:
            p += dens_pow + origin_power
        return p

    xs, ws = [], []
    for a, b in segs:
        m = max(1, int(round(panels * (b - a) / total)))
        edges = np.linspace(a, b, m + 1)
        pa, pb = power_at(a), power_at(b)
        for i in range(m):
            la = pa if i == 0 else 0.0
            lb = pb if i == m - 1 else 0.0
            x, w = _panel(edges[i], edges[i + 1], la, lb, n)
            xs.append(x)
            ws.append(w)
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    # The Jacobi factors were divided out above, so the density multiplies
    # every weight uniformly.
    w = w * c * np.abs(x) ** dens_pow
    return Rule(x, w)


def _estimate(values: np.ndarray, weights: np.ndarray) -> complex:
    return complex(np.sum(weights * values))


def refine(evaluate: Callable[[int], tuple], quad: QuadratureSpec, start: int,
           what: str = "integral", floor: float = 0.0):
    """Doubling loop: evaluate(panels) -> (value, scale) until converged.

    Converged when successive values differ by at most rel_tol |value| + floor.
    Returns (value, panels used).
    """
    n = max(int(start), int(quad.panels))
    prev, _ = evaluate(n)
    while True:
        n2 = 2 * n
        if n2 > MAX_PANELS:
            raise NonConvergence(f"{what}: no convergence within {MAX_PANELS} panels")
        cur, scale = evaluate(n2)
        if abs(cur - prev) <= quad.rel_tol * abs(cur) + 1e-15 * scale + floor:
            return cur, n2
        prev, n = cur, n2


def _min_panels(f: Signal, region: IntervalSet, quad: QuadratureSpec) -> int:
    length = region.total_length()
    if not math.isfinite(length):
        return quad.panels
    return int(math.ceil(length * f.bandwidth / 20.0))


def integrate_weighted(f: Signal, k, quad: QuadratureSpec = QuadratureSpec(),
                       region: Optional[IntervalSet] = None) -> complex:
    """int f d mu_k over the signal's window (or a sub-region of it)."""
    k = as_order(k)
    reg = f.region(quad)
    if region is not None:
        reg = reg.intersect(region)
    if reg.is_empty:
        return 0j
    zeros_pow = {z: o for z, o in f.zeros if o == int(o)}

    def ev(n):
        rule = build_rule(reg, k, n, quad.nodes_per_panel, breaks=f.breaks,
                          singular={z: 0.0 for z in zeros_pow})
        v = f(rule.nodes)
        return _estimate(v, rule.weights), float(np.sum(np.abs(rule.weights * v)))

    val, _ = refine(ev, quad, _min_panels(f, reg, quad), "integrate_weighted")
    return val


def _power_integral(f: Signal, p: float, k: float, quad: QuadratureSpec,
                    alpha: float, region: Optional[IntervalSet], scale: float = 0.0) -> float:
    """int |x|^(alpha p) |f|^p d mu_k over the window and any tail model.

    `scale` sets the magnitude against which the tail tolerance is measured
    (for example the full integral when only a part of it is wanted).
    """
    reg = f.region(quad)
    if region is not None:
        reg = reg.intersect(region)
    total = 0.0
    if not reg.is_empty:
        singular = {}
        origin = alpha * p
        even_power = float(p).is_integer() and int(p) % 2 == 0
        for z, o in (() if even_power else f.zeros):
            if z == 0.0:
                origin += o * p
            else:
                singular[z] = o * p

        def ev(n):
            rule = build_rule(reg, k, n, quad.nodes_per_panel, breaks=f.breaks,
                              singular=singular, origin_power=origin)
            v = np.abs(f(rule.nodes)) ** p
            if alpha:
                v = v * np.abs(rule.nodes) ** (alpha * p)
            return float(np.sum(rule.weights * v)), 0.0

        total, _ = refine(ev, quad, _min_panels(f, reg, quad), "lp_norm",
                          floor=quad.rel_tol * scale)
        total = max(total, 0.0)
    if f.tail is not None:
        w = f.window(quad)
        outside = IntervalSet(((-math.inf, -w), (w, math.inf)))
        if region is not None:
            outside = outside.intersect(region)
        if not outside.is_empty:
            total += f.tail.power_integral(p, alpha, outside, quad, scale=max(total, scale))
    return total


def grid_sup(f: Signal, k, quad: QuadratureSpec = QuadratureSpec(),
             region: Optional[IntervalSet] = None) -> float:
    """Supremum of |f| over quadrature nodes and critical points (a lower bound)."""
    reg = f.region(quad)
    if region is not None:
        reg = reg.intersect(region)
    pts = [np.asarray(f.critical_points, dtype=float)]
    if not reg.is_empty:
        n = max(quad.panels, _min_panels(f, reg, quad)) * 2
        pts.append(build_rule(reg, k, n, quad.nodes_per_panel, breaks=f.breaks).nodes)
    x = np.concatenate(pts)
    if region is not None:
        x = x[region.contains(x) | np.isin(x, region.endpoints())]
    if x.size == 0:
        return 0.0
    return float(np.max(np.abs(f(x))))


def lp_norm(f: Signal, p: float, k, quad: QuadratureSpec = QuadratureSpec(),
            region: Optional[IntervalSet] = None) -> float:
    """L^p_k norm; p = inf gives the grid supremum."""
    k = as_order(k)
    if not p >= 1:
        raise ParameterOutOfRange("p must be >= 1")
    if math.isinf(p):
        return grid_sup(f, k, quad, region)
    val = _power_integral(f, p, k, quad, 0.0, region)
    return val ** (1.0 / p)


def weighted_moment_norm(f: Signal, alpha: float, p: float, k,
                         quad: QuadratureSpec = QuadratureSpec(),
                         region: Optional[IntervalSet] = None) -> float:
    """L^p_k norm of x -> |x|^alpha f(x)."""
    k = as_order(k)
    if alpha < 0:
        raise ParameterOutOfRange("alpha must be >= 0")
    if not p >= 1:
        raise ParameterOutOfRange("p must be >= 1")
    if math.isinf(p):
        g = Signal(lambda x: np.abs(x) ** alpha * f(x), f.decay_radius, support=f.support,
                   breaks=f.breaks, bandwidth=f.bandwidth, critical_points=f.critical_points)
        return grid_sup(g, k, quad, region)
    val = _power_integral(f, p, k, quad, float(alpha), region)
    return val ** (1.0 / p)


def concentration(f: Signal, E: IntervalSet, p: float, k,
                  quad: QuadratureSpec = QuadratureSpec()) -> float:
    """||f - chi_E f||_p / ||f||_p."""
    k = as_order(k)
    full = _power_integral(f, p, k, quad, 0.0, None)
    if full == 0.0:
        raise ZeroSignal("concentration of a zero signal")
    out = _power_integral(f, p, k, quad, 0.0, E.complement(), scale=full)
    return float(min(1.0, (out / full) ** (1.0 / p)))

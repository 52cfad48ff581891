"""Deterministic families of test signals.

Every entry is reproducible from its family name, parameters and seed.  The
random trigonometric bumps draw from numpy's PCG64 generator seeded with the
entry seed, so values are identical across platforms.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ParameterOutOfRange
from .measure import IntervalSet, Signal

FAMILIES = ("gaussian", "chirped_gaussian", "poly_gaussian", "indicator",
            "smooth_bump", "random_trig_bump")

# Angular frequency (times the bump radius) beyond which the Fourier transform
# of the bump profile stays below 1e-10 of its peak.  Spectral norms are only
# taken with exponents q >= 2, so the neglected L^q mass is below 1e-20.
BUMP_BANDWIDTH = 220.0


@dataclass
class CorpusEntry:
    signal: Signal
    family: str
    params: dict = field(default_factory=dict)
    seed: Optional[int] = None

    def manifest(self) -> dict:
        return {"label": self.signal.label, "family": self.family,
                "params": dict(self.params), "seed": self.seed}


def make_gaussian(s_re: float, s_im: float = 0.0) -> Signal:
    """x -> exp(-(s_re + i s_im) x^2)."""
    if not s_re > 0:
        raise ParameterOutOfRange("s_re must be positive")
    z = complex(s_re, s_im)
    return Signal(lambda x: np.exp(-z * x * x), math.sqrt(36.0 / s_re),
                  f"gaussian(s={s_re:g},sigma={s_im:g})",
                  bandwidth=2.0 * math.sqrt(40.0 * s_re), chirp=-s_im,
                  critical_points=(0.0,), gauss=(z, 0, 1.0),
                  params={"s_re": s_re, "s_im": s_im})


def _poly_radius(m: int, delta: float) -> float:
    r = math.sqrt(37.0 / delta)
    for _ in range(20):
        r = math.sqrt((37.0 + m * math.log(max(r, 1.0))) / delta)
    return r


def make_poly_gaussian(m: int, delta: float, s_im: float = 0.0) -> Signal:
    """x -> x^m exp(-(delta + i s_im) x^2)."""
    m = int(m)
    if not 0 <= m <= 6:
        raise ParameterOutOfRange("degree must lie in 0..6")
    if not delta > 0:
        raise ParameterOutOfRange("delta must be positive")
    z = complex(delta, s_im)
    crit = (0.0,) if m == 0 else (-math.sqrt(m / (2 * delta)), math.sqrt(m / (2 * delta)))
    return Signal(lambda x: x ** m * np.exp(-z * x * x), _poly_radius(m, delta),
                  f"poly_gaussian(m={m},delta={delta:g},sigma={s_im:g})",
                  zeros=((0.0, m),) if m else (),
                  bandwidth=2.0 * math.sqrt(40.0 * delta) + m, chirp=-s_im,
                  critical_points=crit, gauss=(z, m, 1.0),
                  params={"m": m, "delta": delta, "s_im": s_im})


def make_indicator(r: float) -> Signal:
    """Characteristic function of (-r, r) with exact support metadata."""
    if not r > 0:
        raise ParameterOutOfRange("r must be positive")
    r = float(r)
    return Signal(lambda x: np.where(np.abs(x) < r, 1.0, 0.0) + 0j, r, f"indicator(r={r:g})",
                  support=IntervalSet.symmetric(r), breaks=(-r, r), bandwidth=0.0,
                  critical_points=(0.0,), jump=(1.0, r), params={"r": r})


def bump_profile(x, r: float) -> np.ndarray:
    """exp(1 - 1/(1 - (x/r)^2)^2) on (-r, r), zero elsewhere; equals 1 at 0."""
    x = np.asarray(x, dtype=float)
    u = 1.0 - (x / r) ** 2
    out = np.zeros(x.shape)
    inside = u > 0
    out[inside] = np.exp(1.0 - 1.0 / u[inside] ** 2)
    return out


def make_smooth_bump(r: float) -> Signal:
    """C-infinity bump supported on [-r, r]."""
    if not r > 0:
        raise ParameterOutOfRange("r must be positive")
    r = float(r)
    return Signal(lambda x: bump_profile(x, r) + 0j, r, f"smooth_bump(r={r:g})",
                  support=IntervalSet.symmetric(r), bandwidth=BUMP_BANDWIDTH / r,
                  critical_points=(0.0,), params={"r": r})


def make_random_trig_bump(r: float, terms: int, max_freq: float, seed: int) -> Signal:
    """Bump times a random complex trigonometric sum sum_j c_j exp(i w_j x)."""
    if not r > 0 or terms < 1 or not max_freq > 0:
        raise ParameterOutOfRange("invalid random trigonometric bump parameters")
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    freqs = rng.uniform(-max_freq, max_freq, size=int(terms))
    coefs = (rng.standard_normal(int(terms)) + 1j * rng.standard_normal(int(terms))) / math.sqrt(terms)
    r = float(r)

    def func(x):
        x = np.asarray(x, dtype=float)
        trig = np.exp(1j * np.multiply.outer(x, freqs)) @ coefs
        return bump_profile(x, r) * trig

    crit = tuple(np.linspace(-r, r, 41)[1:-1])
    return Signal(func, r, f"random_trig_bump(r={r:g},n={terms},w={max_freq:g},seed={seed})",
                  seed=int(seed), support=IntervalSet.symmetric(r),
                  bandwidth=BUMP_BANDWIDTH / r + max_freq, critical_points=crit,
                  params={"r": r, "terms": int(terms), "max_freq": float(max_freq)})


def make_signal(family: str, params: dict, seed: Optional[int] = None) -> Signal:
    """Construct a signal from its family name and parameters."""
    p = dict(params)
    if family in ("gaussian", "chirped_gaussian"):
        return make_gaussian(float(p.get("s_re", p.get("s", 1.0))), float(p.get("s_im", 0.0)))
    if family == "poly_gaussian":
        return make_poly_gaussian(int(p.get("m", 1)), float(p.get("delta", 1.0)),
                                  float(p.get("s_im", 0.0)))
    if family == "indicator":
        return make_indicator(float(p.get("r", 1.0)))
    if family == "smooth_bump":
        return make_smooth_bump(float(p.get("r", 1.0)))
    if family == "random_trig_bump":
        return make_random_trig_bump(float(p.get("r", 2.0)), int(p.get("terms", 4)),
                                     float(p.get("max_freq", 3.0)),
                                     int(seed if seed is not None else p.get("seed", 0)))
    raise ParameterOutOfRange(f"unknown signal family {family!r}")


_DEFAULT_SPECS = [
    ("gaussian", {"s_re": 1.0, "s_im": 0.0}),
    ("gaussian", {"s_re": 0.5, "s_im": 0.0}),
    ("gaussian", {"s_re": 2.0, "s_im": 0.0}),
    ("chirped_gaussian", {"s_re": 1.0, "s_im": 0.5}),
    ("chirped_gaussian", {"s_re": 0.5, "s_im": -1.0}),
    ("chirped_gaussian", {"s_re": 2.0, "s_im": 1.5}),
    ("poly_gaussian", {"m": 1, "delta": 1.0}),
    ("poly_gaussian", {"m": 2, "delta": 0.5}),
    ("poly_gaussian", {"m": 3, "delta": 1.0}),
    ("poly_gaussian", {"m": 4, "delta": 2.0}),
    ("indicator", {"r": 1.0}),
    ("indicator", {"r": 2.0}),
    ("indicator", {"r": 0.5}),
    ("smooth_bump", {"r": 1.0}),
    ("smooth_bump", {"r": 2.0}),
    ("smooth_bump", {"r": 3.0}),
    ("random_trig_bump", {"r": 1.5, "terms": 3, "max_freq": 2.0}),
    ("random_trig_bump", {"r": 2.0, "terms": 4, "max_freq": 3.0}),
    ("random_trig_bump", {"r": 2.5, "terms": 5, "max_freq": 4.0}),
    ("random_trig_bump", {"r": 3.0, "terms": 6, "max_freq": 5.0}),
]


def corpus_default(seed: int = 0) -> list[CorpusEntry]:
    """Twenty entries covering every family; random entries use seed + index."""
    out = []
    for i, (family, params) in enumerate(_DEFAULT_SPECS):
        s = int(seed) + i if family == "random_trig_bump" else None
        sig = make_signal(family, params, s)
        out.append(CorpusEntry(sig, family, dict(params), s))
    return out


def corpus_manifest(entries: list[CorpusEntry]) -> str:
    """JSON manifest (family, params, seed per entry)."""
    return json.dumps([e.manifest() for e in entries], indent=2, sort_keys=True)

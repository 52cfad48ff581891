"""Spectral tail model for transforms of (chirped) indicator functions.

For u(x) = A exp(i alpha x^2) chi_(-r, r)(x), repeated integration by parts
with d/dx[x^(2nu+2) j_(nu+1)(mu x)] = (2nu+2) x^(2nu+1) j_nu(mu x) gives the
convergent expansion

    D_k u(mu) = 2 c_k A exp(i alpha r^2)
                sum_n (-2 i alpha)^n r^(2k+2+2n) j_(k+1+n)(mu r) / prod_(m<=n) (2k+2+2m),

with c_k the constant of d mu_k.  Its terms shrink like (2|alpha| r^2 / (mu r))^n,
so far from the origin only a few are needed.  The spectrum decays only like
|mu|^(-(k+3/2)), so L^p norms of such spectra need the part beyond any finite
window.  This module integrates the series numerically up to a far cutoff and
adds the leading Bessel asymptotics beyond it in closed form.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special as sp

from .errors import NonConvergence
from .measure import MAX_PANELS, IntervalSet, QuadratureSpec, build_rule, mu_constant
from .special import BesselTable

FAR_CUTOFF = 2.0e4  # value of mu r where the closed-form remainder takes over
_HARMONICS = 6


def _abs_cos_coefficients(p: float) -> np.ndarray:
    """Fourier cosine coefficients a_j of |cos t|^p = a_0 + sum_j a_j cos(2 j t)."""
    n = 4096
    t = (np.arange(n) + 0.5) * math.pi / n
    v = np.abs(np.cos(t)) ** p
    coef = np.array([np.mean(v * np.cos(2 * j * t)) for j in range(_HARMONICS + 1)])
    coef[1:] *= 2.0
    coef[0] = math.exp(math.lgamma((p + 1) / 2) - math.lgamma(p / 2 + 1)) / math.sqrt(math.pi)
    return coef


def _osc_power_integral(e: float, omega: float, z: float) -> complex:
    """Asymptotic value of int_z^inf t^e exp(i omega t) dt (three terms)."""
    io = 1j * omega
    total = 0j
    fall = 1.0
    for m in range(3):
        total += fall * z ** (e - m) * (-1.0) ** m / io ** (m + 1)
        fall *= (e - m)
    return -np.exp(io * z) * total


class JumpTail:
    """Exact series evaluator and tail integrals for D^M of A exp(i chirp x^2) chi_(-r,r)."""

    def __init__(self, amplitude: complex, r: float, chirp: float, M, k: float):
        self.amplitude = complex(amplitude)
        self.r = float(r)
        self.chirp0 = float(chirp)
        self.M = M
        self.k = float(k)
        self.alpha = self.chirp0 + M.a / (2.0 * M.b)

    def scaled(self, c: complex) -> "JumpTail":
        return JumpTail(self.amplitude * c, self.r, self.chirp0, self.M, self.k)

    # -- evaluation ---------------------------------------------------------
    def _terms(self, zmin: float) -> int:
        q = 2.0 * abs(self.alpha) * self.r ** 2 / max(zmin, 1e-300)
        if self.alpha == 0.0:
            return 1
        if q >= 0.9:
            return 200
        return int(min(200, math.ceil(-40.0 / math.log(q)) + 1))

    def dunkl_values(self, mu) -> np.ndarray:
        """D_k u(mu) from the Bessel series."""
        k, r, al = self.k, self.r, self.alpha
        mu = np.asarray(mu, dtype=float)
        z = np.abs(mu) * r
        nterm = self._terms(float(np.min(z)) if z.size else 1.0)
        ck = mu_constant(k)
        lead = 2.0 * ck * self.amplitude * np.exp(1j * al * r * r)
        total = np.zeros(z.shape, complex)
        coef = 1.0 + 0j
        if nterm > 1 and np.min(z) < 2.0 * nterm:
            # small arguments: direct evaluation of each order
            for n in range(nterm):
                nu = k + 1.0 + n
                coef = coef / (2.0 * k + 2.0 + 2.0 * n)
                jn = _normalized_j(nu, z)
                total += coef * r ** (2 * k + 2 + 2 * n) * jn
                coef *= -2j * al
            return lead * total
        j0, j1 = BesselTable.for_order(k).pair(z.ravel())
        j0 = j0.reshape(z.shape)
        j1 = j1.reshape(z.shape)
        jm, jc = j0, j1  # j_(nu-1), j_nu with nu = k+1
        nu = k + 1.0
        for n in range(nterm):
            coef = coef / (2.0 * k + 2.0 + 2.0 * n)
            total += coef * r ** (2 * k + 2 + 2 * n) * jc
            coef *= -2j * al
            with np.errstate(divide="ignore", invalid="ignore"):
                jn = np.where(z > 0, 4.0 * nu * (nu + 1.0) / (z * z) * (jc - jm), 0.0)
            jm, jc = jc, jn
            nu += 1.0
        return lead * total

    def __call__(self, lam) -> np.ndarray:
        M, k = self.M, self.k
        lam = np.asarray(lam, dtype=float)
        from .transform import prefactor

        return (prefactor(M, k) * np.exp(0.5j * (M.d / M.b) * lam ** 2)
                * self.dunkl_values(lam / M.b))

    # -- integrals ------------------------------------------------------------
    def far_lambda(self, window: float) -> float:
        z_far = max(FAR_CUTOFF, 20.0 * abs(window / self.M.b) * self.r)
        return abs(self.M.b) * z_far / self.r

    def _closed_remainder(self, p: float, aw: float, lam0: float) -> float:
        """int_{lam0}^inf |lam|^(aw p) |S|^p d mu_k from the leading asymptotics."""
        k, r, b = self.k, self.r, abs(self.M.b)
        e = aw * p + 2 * k + 1 - p * (k + 1.5)
        if e >= -1.0:
            return math.inf
        K = abs(self.amplitude) * b ** (-(k + 1)) * r ** (2 * k + 2) * math.sqrt(2 / math.pi)
        scale = mu_constant(k) * K ** p * (b / r) ** (aw * p + 2 * k + 2)
        z = lam0 * r / b
        phi = (k + 1) * math.pi / 2 + math.pi / 4
        a = _abs_cos_coefficients(p)
        val = a[0] * z ** (e + 1) / (-(e + 1))
        for j in range(1, _HARMONICS + 1):
            if abs(a[j]) < 1e-14:
                continue
            val += a[j] * (np.exp(-2j * j * phi) * _osc_power_integral(e, 2.0 * j, z)).real
        return float(scale * val)

    def power_integral(self, p: float, aw: float, outside: IntervalSet, quad: QuadratureSpec,
                       scale: float = 0.0) -> float:
        """int over `outside` (|lam| beyond the window) of |lam|^(aw p) |S|^p d mu_k."""
        window = min(abs(e) for e in outside.endpoints()) if outside.endpoints() else 0.0
        unbounded = any(math.isinf(lo) or math.isinf(hi) for lo, hi in outside.intervals)
        if unbounded and aw * p + 2 * self.k + 1 - p * (self.k + 1.5) >= -1.0:
            return math.inf  # |lam|^(aw p) |S|^p decays too slowly to be integrable
        far = self.far_lambda(window)
        total = 0.0
        near_parts = outside.intersect(IntervalSet(((-far, far),)))
        if not near_parts.is_empty:
            total += self._numeric(p, aw, near_parts, quad, scale)
        for lo, hi in outside.intervals:
            # pieces beyond the far cutoff on each side; |S| is even in lam
            for s_lo, s_hi in ((max(lo, far), hi), (max(-hi, far), -lo)):
                if s_lo < s_hi:
                    part = self._closed_remainder(p, aw, s_lo)
                    if math.isfinite(s_hi):
                        part -= self._closed_remainder(p, aw, s_hi)
                    total += part
        return total

    def _numeric(self, p, aw, region, quad, scale):
        k = self.k
        length = region.total_length()
        start = int(math.ceil(length * self.r / abs(self.M.b) / 12.0)) + 2
        n = max(start, quad.panels)

        def ev(n):
            rule = build_rule(region, k, n, quad.nodes_per_panel)
            v = np.abs(self(rule.nodes)) ** p
            if aw:
                v = v * np.abs(rule.nodes) ** (aw * p)
            return float(np.sum(rule.weights * v))

        prev = ev(n)
        while True:
            n *= 2
            if n > 8 * MAX_PANELS:
                raise NonConvergence("spectral tail integral did not converge")
            cur = ev(n)
            if abs(cur - prev) <= quad.rel_tol * (abs(cur) + scale):
                return cur
            prev = cur


def _normalized_j(nu: float, z: np.ndarray) -> np.ndarray:
    out = np.ones(z.shape)
    nz = z > 0
    zz = z[nz]
    out[nz] = np.exp(math.lgamma(nu + 1) + nu * (math.log(2) - np.log(zz))) * sp.jv(nu, zz)
    return out

"""Both sides of the uncertainty inequalities, with explicit constants.

Each report op evaluates the left and right members of one inequality for a
given signal, matrix and order, and attaches a verdict:

* ``holds``/``violated`` when the constant is explicit (tolerance 1e-9),
* ``trivial`` when the right member is infinite or the left member is zero,
* ``empirical_only`` when no explicit constant exists and only the ratio
  is recorded.

Constants are assembled in log space from :func:`log_gamma`.  Norms of a
signal and of its spectrum are memoized per :class:`Case`, so a suite that
asks for the same norm from several inequalities computes it once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .corpus import CorpusEntry, make_gaussian, make_poly_gaussian
from .errors import (ConcentrationSaturated, LcdunklError, ParameterOutOfRange, ZeroSignal)
from .measure import (IntervalSet, QuadratureSpec, Signal, _power_integral, gamma_measure,
                      grid_sup, lp_norm)
from .special import as_order, log_gamma
from .transform import (CanonicalMatrix, SpectrumSignal, fit_polynomial_degree,
                        fractional_matrix, gaussian_constant_analytic,
                        gaussian_lcdt_closed_form, lcdt_forward, matrix_inverse)

VERDICT_TOL = 1e-9
HOLDS, VIOLATED, TRIVIAL, EMPIRICAL = "holds", "violated", "trivial", "empirical_only"

# Transform sweep: two fractional angles, a shear, a b < 0 case and a generic matrix.
SWEEP_MATRICES = (fractional_matrix(math.pi / 6), fractional_matrix(math.pi / 2),
                  CanonicalMatrix(1.0, 1.0, 0.0, 1.0), CanonicalMatrix(0.5, -1.0, 0.5, 1.0),
                  CanonicalMatrix(2.0, 0.5, 1.0, 0.75))
SWEEP_ORDERS = (-0.5, 0.0, 0.5, 1.5)
# Inequality suite default: one chirped b < 0 matrix, all four orders (about six minutes).
SUITE_MATRICES = (CanonicalMatrix(0.5, -1.0, 0.5, 1.0),)
SUITE_ORDERS = SWEEP_ORDERS


# ---------------------------------------------------------------------------
# Report types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentPair:
    """Exponent p in (1, 2] with its conjugate q = p/(p-1)."""

    p: float
    q: float

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not 1.0 < p <= 2.0:
            raise ParameterOutOfRange(f"p = {p} outside (1, 2]")
        if abs(1.0 / p + 1.0 / q - 1.0) > 1e-12:
            raise ParameterOutOfRange("p and q are not conjugate")

    @classmethod
    def from_p(cls, p: float) -> "ExponentPair":
        p = float(p)
        if not 1.0 < p <= 2.0:
            raise ParameterOutOfRange(f"p = {p} outside (1, 2]")
        return cls(p, p / (p - 1.0))


@dataclass
class InequalityReport:
    theorem_id: str
    params: dict
    lhs: float
    rhs: float
    constant: float
    ratio: float
    verdict: str
    case: str = ""
    diagnostics: dict = field(default_factory=dict)
    note: str = ""

    def to_dict(self) -> dict:
        return {"theorem_id": self.theorem_id, "case": self.case, "params": dict(self.params),
                "lhs": self.lhs, "rhs": self.rhs, "constant": self.constant,
                "ratio": self.ratio, "verdict": self.verdict,
                "diagnostics": dict(self.diagnostics), "note": self.note}


def make_report(theorem_id: str, params: dict, lhs: float, rhs: float,
                constant: Optional[float], *, case: str = "", diagnostics=None,
                note: str = "") -> InequalityReport:
    """Assemble a report and its verdict.  constant=None marks a non-explicit constant."""
    lhs, rhs = float(lhs), float(rhs)
    if rhs == math.inf or lhs == 0.0:
        ratio = 0.0
        verdict = TRIVIAL
    else:
        ratio = lhs / rhs if rhs > 0 else math.inf
        if constant is None:
            verdict = EMPIRICAL
        else:
            verdict = HOLDS if ratio <= 1.0 + VERDICT_TOL else VIOLATED
    const = math.nan if constant is None else float(constant)
    return InequalityReport(theorem_id, dict(params), lhs, rhs, const, ratio, verdict, case,
                            dict(diagnostics or {}), note)


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

def log_ckb(k: float, b: float) -> float:
    """log of C_{k,b} = |b|^(-(k+1))."""
    return -(k + 1.0) * math.log(abs(b))


def log_ball_factor(k: float) -> float:
    """log of 2^(k+1) Gamma(k+2), the dmu_k measure of (-1, 1) inverted."""
    return (k + 1.0) * math.log(2.0) + log_gamma(k + 2.0)


def _pow_sum(*logs: float) -> float:
    """log(sum exp(logs)) without overflow."""
    top = max(logs)
    return top + math.log(sum(math.exp(v - top) for v in logs))


def nash_constant(k: float, b: float, q: float) -> float:
    """{1 + C_{k,b}^q / (2^(k+1) Gamma(k+2))}^(1/q)."""
    return math.exp(_pow_sum(0.0, q * log_ckb(k, b) - log_ball_factor(k)) / q)


def nash_l2_constant(k: float, b: float, q: float) -> float:
    """{1 + (C_{k,b}^2 / (2^(k+1) Gamma(k+2)))^((q-2)/q)}^(1/2)."""
    inner = (2.0 * log_ckb(k, b) - log_ball_factor(k)) * (q - 2.0) / q
    return math.exp(0.5 * _pow_sum(0.0, inner))


def nash_two_constant(k: float, b: float, q1: float, q2: float) -> float:
    """{1 + (2^(k+1) Gamma(k+2))^(-(q1-q2)/q1) C_{k,b}^((1-2/q1) q2)}^(1/q2)."""
    inner = -log_ball_factor(k) * (q1 - q2) / q1 + (1.0 - 2.0 / q1) * q2 * log_ckb(k, b)
    return math.exp(_pow_sum(0.0, inner) / q2)


def clarkson_constant(k: float, q: float) -> float:
    """(2^(k+1) Gamma(k+2))^(-1/q) + 1."""
    return 1.0 + math.exp(-log_ball_factor(k) / q)


def clarkson_l2_constant(k: float, p: float) -> float:
    """{1 + (2^(k+1) Gamma(k+2))^(-(2-p)/2)}^(1/p)."""
    return math.exp(_pow_sum(0.0, -log_ball_factor(k) * (2.0 - p) / 2.0) / p)


def clarkson_two_constant(k: float, p1: float, p2: float) -> float:
    """{1 + (2^(k+1) Gamma(k+2))^(-(p2-p1)/p2)}^(1/p1)."""
    return math.exp(_pow_sum(0.0, -log_ball_factor(k) * (p2 - p1) / p2) / p1)


def gaussian_norm_constant(k: float, p: float) -> float:
    """C in ||exp(-t lam^2)||_{L^p_k} = C t^(-(k+1)/p); equals (2p)^(-(k+1)/p)."""
    return math.exp(-(k + 1.0) / p * math.log(2.0 * p))


def smoothing_constant(k: float, b: float, alpha: float, q: float) -> float:
    """Constant C(alpha, b, q) of the Gaussian-damped spectrum bound.

    Near part: ||exp(-t lam^2)||_q C_{k,b} ||chi_r f||_1 with Hoelder against
    |y|^(-alpha) chi_r, whose L^q_k norm is
    (2^k Gamma(k+1))^(-1/q) r^((2k+2-alpha q)/q) / (2k+2-alpha q)^(1/q).
    Far part: Young with constant |b|^(-(k+1)(1-2/q)).  With r = sqrt(t) both
    parts scale like t^(-alpha/2).
    """
    gap = 2.0 * (k + 1.0) - alpha * q
    if gap <= 0:
        raise ParameterOutOfRange("alpha must be below 2(k+1)/q")
    log_near = (math.log(gaussian_norm_constant(k, q)) + log_ckb(k, b)
                - (k * math.log(2.0) + log_gamma(k + 1.0)) / q - math.log(gap) / q)
    return math.exp(log_near) + math.exp((1.0 - 2.0 / q) * log_ckb(k, b))


def young_constant(k: float, b: float, q: float) -> float:
    return math.exp((1.0 - 2.0 / q) * log_ckb(k, b))


def moment_interpolation_constant(u: float, beta: float) -> float:
    """(beta/(beta-u)) (beta-u)^(u/beta)."""
    return beta / (beta - u) * (beta - u) ** (u / beta)


# ---------------------------------------------------------------------------
# Per-case norm cache
# ---------------------------------------------------------------------------

def _region_key(region: Optional[IntervalSet]):
    return None if region is None else tuple(map(tuple, region.to_list()))


class Case:
    """A (signal, matrix, order) triple with memoized norms of f and its spectrum."""

    def __init__(self, f: Signal, M: CanonicalMatrix, k, quad: QuadratureSpec = QuadratureSpec(),
                 label: Optional[str] = None):
        self.f = f
        self.M = M
        self.k = as_order(k)
        self.quad = quad
        self.label = label or f"{f.label}|k={self.k:g}|M=({M.a:g},{M.b:g},{M.c:g},{M.d:g})"
        self._spectrum: Optional[SpectrumSignal] = None
        self._memo: dict = {}

    @property
    def spectrum(self) -> SpectrumSignal:
        if self._spectrum is None:
            self._spectrum = SpectrumSignal(self.f, self.M, self.k, self.quad)
        return self._spectrum

    def scaled(self, c: complex) -> "Case":
        return Case(self.f.scaled(c), self.M, self.k, self.quad, self.label)

    def _norm(self, side: str, p: float, alpha: float, region) -> float:
        key = (side, float(p), float(alpha), _region_key(region))
        if key not in self._memo:
            g = self.f if side == "f" else self.spectrum
            if math.isinf(p):
                val = grid_sup(g, self.k, self.quad, region) if alpha == 0 else math.nan
            else:
                # parts of a norm are resolved relative to the whole
                scale = 0.0 if region is None else self._norm(side, p, alpha, None) ** p
                val = _power_integral(g, p, self.k, self.quad, float(alpha), region, scale)
                val = val ** (1.0 / p) if val != math.inf else math.inf
            self._memo[key] = val
        return self._memo[key]

    def fnorm(self, p: float, alpha: float = 0.0, region=None) -> float:
        return self._norm("f", p, alpha, region)

    def snorm(self, q: float, alpha: float = 0.0, region=None) -> float:
        return self._norm("s", q, alpha, region)

    def f_concentration(self, E: IntervalSet, p: float) -> float:
        return _concentration(self.fnorm(p), self.fnorm(p, region=E.complement()))

    def s_concentration(self, F: IntervalSet, q: float) -> float:
        return _concentration(self.snorm(q), self.snorm(q, region=F.complement()))


def _concentration(full: float, outside: float) -> float:
    if full == 0.0:
        raise ZeroSignal("concentration of a zero signal")
    return float(min(1.0, outside / full))


def _params(**kw) -> dict:
    return {k: float(v) for k, v in kw.items()}


# ---------------------------------------------------------------------------
# Transform-level inequalities
# ---------------------------------------------------------------------------

def plancherel_report(case: Case) -> InequalityReport:
    lhs, rhs = case.snorm(2.0), case.fnorm(2.0)
    dev = abs(lhs / rhs - 1.0) if rhs > 0 else 0.0
    return make_report("plancherel", {}, lhs, rhs, 1.0, case=case.label,
                       diagnostics={"relative_deviation": dev})


def riemann_lebesgue_report(case: Case) -> InequalityReport:
    const = math.exp(log_ckb(case.k, case.M.b))
    lhs = case.snorm(math.inf)
    rhs = const * case.fnorm(1.0)
    return make_report("riemann_lebesgue", {}, lhs, rhs, const, case=case.label,
                       note="sup over quadrature nodes (lower bound of the true sup)")


def young_report(case: Case, p: float) -> InequalityReport:
    pq = ExponentPair.from_p(p)
    const = young_constant(case.k, case.M.b, pq.q)
    lhs = case.snorm(pq.q)
    rhs = const * case.fnorm(pq.p)
    return make_report("young", _params(p=pq.p), lhs, rhs, const, case=case.label)


def heisenberg_report(case: Case, alpha: float, beta: float, pq: ExponentPair) -> InequalityReport:
    """Moment-weighted uncertainty with a non-explicit constant: ratio only."""
    k = case.k
    if not 0.0 < alpha < 2.0 * (k + 1.0) / pq.q:
        raise ParameterOutOfRange("alpha must lie in (0, 2(k+1)/q)")
    if not beta > 0:
        raise ParameterOutOfRange("beta must be positive")
    lhs = case.snorm(pq.q)
    a = case.fnorm(pq.p, alpha)
    c = case.snorm(pq.q, beta)
    rhs = _product([(a, beta / (alpha + beta)), (c, alpha / (alpha + beta))])
    return make_report("heisenberg", _params(alpha=alpha, beta=beta, p=pq.p), lhs, rhs, None,
                       case=case.label, note="constant not explicit; ratio recorded")


def _product(factors) -> float:
    """prod x_i^e_i with inf^e = inf for e > 0 and x^0 = 1."""
    out = 1.0
    for x, e in factors:
        if e == 0:
            continue
        if x == math.inf:
            return math.inf
        out *= x ** e
    return out


def gaussian_norm_report(k, p: float, t: float, quad: QuadratureSpec = QuadratureSpec()
                         ) -> InequalityReport:
    """Measured ||exp(-t lam^2)||_{L^p_k} against (2p)^(-(k+1)/p) t^(-(k+1)/p)."""
    k = as_order(k)
    g = make_gaussian(t)
    lhs = lp_norm(g, p, k, quad)
    const = gaussian_norm_constant(k, p)
    rhs = const * t ** (-(k + 1.0) / p)
    return make_report("gaussian_norm", _params(k=k, p=p, t=t), lhs, rhs, const,
                       case=f"gauss|k={k:g}",
                       diagnostics={"relative_deviation": abs(lhs / rhs - 1.0)})


def _damped(S: Signal, t: float) -> Signal:
    return Signal(lambda lam: np.exp(-t * lam * lam) * S(lam), S.decay_radius, S.label,
                  bandwidth=S.bandwidth, chirp=S.chirp, critical_points=S.critical_points,
                  zeros=S.zeros)


def heisenberg_smoothing_report(case: Case, alpha: float, t: float, pq: ExponentPair
                                ) -> InequalityReport:
    k = case.k
    if not 0.0 < alpha < 2.0 * (k + 1.0) / pq.q:
        raise ParameterOutOfRange("alpha must lie in (0, 2(k+1)/q)")
    if not t > 0:
        raise ParameterOutOfRange("t must be positive")
    const = smoothing_constant(k, case.M.b, alpha, pq.q)
    key = ("damped", float(t), float(pq.q))
    if key not in case._memo:
        case._memo[key] = lp_norm(_damped(case.spectrum, t), pq.q, k, case.quad)
    lhs = case._memo[key]
    rhs = const * t ** (-alpha / 2.0) * case.fnorm(pq.p, alpha)
    return make_report("heisenberg_smoothing", _params(alpha=alpha, t=t, p=pq.p), lhs, rhs,
                       const, case=case.label)


def moment_interpolation_report(F: Signal, u: float, beta: float, q: float, k,
                                quad: QuadratureSpec = QuadratureSpec(), *, case: Optional[Case] = None,
                                label: str = "") -> InequalityReport:
    """||lam^u F||_q against the interpolation of ||F||_q and ||lam^beta F||_q."""
    k = as_order(k)
    if not 0.0 < u < beta:
        raise ParameterOutOfRange("need 0 < u < beta")

    def norm(alpha):
        if case is not None:
            return case.snorm(q, alpha)
        v = _power_integral(F, q, k, quad, float(alpha), None)
        return v ** (1.0 / q) if v != math.inf else math.inf

    const = moment_interpolation_constant(u, beta)
    lhs = norm(u)
    rhs = const * _product([(norm(beta), u / beta), (norm(0.0), 1.0 - u / beta)])
    return make_report("moment_interpolation", _params(u=u, beta=beta, q=q), lhs, rhs, const,
                       case=label or (case.label if case else ""))


# ---------------------------------------------------------------------------
# Nash and Clarkson type inequalities
# ---------------------------------------------------------------------------

NASH_VARIANTS = ("L1_Lp", "L2_Lp", "two_exponent")
CLARKSON_VARIANTS = ("L1_Lp", "L2_Lp", "p1_p2")


def nash_report(variant: str, case: Case, s: float, p: float, p2: Optional[float] = None
                ) -> InequalityReport:
    """Nash-type bounds of the spectrum norm by a signal norm and a spectral moment."""
    k, b = case.k, case.M.b
    if not s > 0:
        raise ParameterOutOfRange("s must be positive")
    if variant == "L1_Lp":
        pq = ExponentPair.from_p(p)
        q = pq.q
        n = 2 * k + 2 + q * s
        const = nash_constant(k, b, q)
        lhs = case.snorm(q)
        rhs = const * _product([(case.fnorm(1.0), q * s / n),
                                (case.snorm(q, s), (2 * k + 2) / n)])
        params = _params(s=s, p=p)
    elif variant == "L2_Lp":
        if not 1.0 < p < 2.0:
            raise ParameterOutOfRange("the L2 variant needs 1 < p < 2")
        q = p / (p - 1.0)
        n = (2 * k + 2) * (q - 2) + 2 * s * q
        const = nash_l2_constant(k, b, q)
        lhs = case.fnorm(2.0)
        rhs = const * _product([(case.fnorm(p), 2 * s * q / n),
                                (case.snorm(2.0, s), (2 * k + 2) * (q - 2) / n)])
        params = _params(s=s, p=p)
    elif variant == "two_exponent":
        if p2 is None or not 1.0 < p <= p2 <= 2.0:
            raise ParameterOutOfRange("need 1 < p1 <= p2 <= 2")
        q1 = p / (p - 1.0)
        q2 = p2 / (p2 - 1.0)
        n = (2 * k + 2) * (q1 - q2) + s * q1 * q2
        const = nash_two_constant(k, b, q1, q2)
        lhs = case.snorm(q2)
        rhs = const * _product([(case.fnorm(p), s * q1 * q2 / n),
                                (case.snorm(q2, s), (2 * k + 2) * (q1 - q2) / n)])
        params = _params(s=s, p1=p, p2=p2)
    else:
        raise ParameterOutOfRange(f"unknown Nash variant {variant!r}")
    return make_report(f"nash_{variant}", params, lhs, rhs, const, case=case.label)


def clarkson_report(variant: str, f: Signal, k, s: float, p: float, p2: Optional[float] = None,
                    quad: QuadratureSpec = QuadratureSpec(), *, case: Optional[Case] = None
                    ) -> InequalityReport:
    """Clarkson-type bounds; only norms of f itself enter."""
    k = as_order(k)
    if not s > 0:
        raise ParameterOutOfRange("s must be positive")
    c = case if case is not None else Case(f, CanonicalMatrix(0.0, -1.0, 1.0, 0.0), k, quad)
    label = case.label.split("|M=")[0] if case is not None else f"{f.label}|k={k:g}"
    if variant == "L1_Lp":
        pq = ExponentPair.from_p(p)
        q = pq.q
        n = 2 * k + 2 + q * s
        const = clarkson_constant(k, q)
        lhs = c.fnorm(1.0)
        rhs = const * _product([(c.fnorm(p), q * s / n), (c.fnorm(1.0, s), (2 * k + 2) / n)])
        params = _params(s=s, p=p)
    elif variant == "L2_Lp":
        if not 1.0 < p < 2.0:
            raise ParameterOutOfRange("the L2 variant needs 1 < p < 2")
        n = (k + 1) * (2 - p) + p * s
        const = clarkson_l2_constant(k, p)
        lhs = c.fnorm(p)
        rhs = const * _product([(c.fnorm(2.0), p * s / n), (c.fnorm(p, s), (k + 1) * (2 - p) / n)])
        params = _params(s=s, p=p)
    elif variant == "p1_p2":
        if p2 is None or not 1.0 < p < p2 <= 2.0:
            raise ParameterOutOfRange("need 1 < p1 < p2 <= 2")
        n = (2 * k + 2) * (p2 - p) + p * p2 * s
        const = clarkson_two_constant(k, p, p2)
        lhs = c.fnorm(p)
        rhs = const * _product([(c.fnorm(p2), p * p2 * s / n),
                                (c.fnorm(p, s), (2 * k + 2) * (p2 - p) / n)])
        params = _params(s=s, p1=p, p2=p2)
    else:
        raise ParameterOutOfRange(f"unknown Clarkson variant {variant!r}")
    return make_report(f"clarkson_{variant}", params, lhs, rhs, const, case=label)


# ---------------------------------------------------------------------------
# Concentration-based inequalities
# ---------------------------------------------------------------------------

DS_VARIANTS = ("L1_Lp", "p1_p2")
SATURATION = 1.0 - 1e-9


def _check_eps(name: str, eps: float):
    if eps >= SATURATION:
        raise ConcentrationSaturated(f"{name} = {eps:.3g} leaves no room in the bound")


def donoho_stark_report(variant: str, case: Case, E: IntervalSet, F: IntervalSet, p: float,
                        p2: Optional[float] = None) -> InequalityReport:
    """Bound of the spectrum norm from measured concentrations on E and F."""
    k, b = case.k, case.M.b
    gE, gF = gamma_measure(E, k), gamma_measure(F, k)
    if variant == "L1_Lp":
        pq = ExponentPair.from_p(p)
        if case.fnorm(1.0) == 0.0:
            return make_report("donoho_stark_L1_Lp", _params(p=p), 0.0, 0.0, 1.0, case=case.label)
        eps_e = case.f_concentration(E, 1.0)
        eps_f = case.s_concentration(F, pq.q)
        _check_eps("eps_E", eps_e)
        _check_eps("eps_F", eps_f)
        const = math.exp(log_ckb(k, b)) * gF ** (1 / pq.q) * gE ** (1 / pq.q)
        const /= (1 - eps_e) * (1 - eps_f)
        lhs = case.snorm(pq.q)
        rhs = const * case.fnorm(pq.p)
        params = _params(p=p)
    elif variant == "p1_p2":
        if p2 is None or not 1.0 < p < p2 <= 2.0:
            raise ParameterOutOfRange("need 1 < p1 < p2 <= 2")
        q1, q2 = p / (p - 1.0), p2 / (p2 - 1.0)
        if case.fnorm(p) == 0.0:
            return make_report("donoho_stark_p1_p2", _params(p1=p, p2=p2), 0.0, 0.0, 1.0,
                               case=case.label)
        eps_e = case.f_concentration(E, p)
        eps_f = case.s_concentration(F, q2)
        _check_eps("eps_E", eps_e)
        _check_eps("eps_F", eps_f)
        const = (math.exp((1 - 2 / q1) * log_ckb(k, b)) * gE ** ((p2 - p) / (p * p2))
                 * gF ** ((q1 - q2) / (q1 * q2)))
        const /= (1 - eps_e) * (1 - eps_f)
        lhs = case.snorm(q2)
        rhs = const * case.fnorm(p2)
        params = _params(p1=p, p2=p2)
    else:
        raise ParameterOutOfRange(f"unknown Donoho-Stark variant {variant!r}")
    params.update(gamma_E=gE, gamma_F=gF)
    return make_report(f"donoho_stark_{variant}", params, lhs, rhs, const, case=case.label,
                       diagnostics={"eps_E": eps_e, "eps_F": eps_f})


def smooth_step(u):
    """C-infinity step: 0 for u <= 0, 1 for u >= 1."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    out = np.zeros(u.shape)
    out[u >= 1.0] = 1.0
    mid = (u > 0.0) & (u < 1.0)
    um = u[mid]
    a = np.exp(-1.0 / um)
    c = np.exp(-1.0 / (1.0 - um))
    out[mid] = a / (a + c)
    return out


def taper(F: IntervalSet, fraction: float = 0.1):
    """Smooth window supported in F, equal to 1 away from the finite edges."""
    def phi(lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros(lam.shape)
        for lo, hi in F.intervals:
            width = fraction * (hi - lo) if math.isfinite(hi - lo) else 1.0
            w = np.ones(lam.shape)
            if math.isfinite(lo):
                w *= smooth_step((lam - lo) / width)
            if math.isfinite(hi):
                w *= smooth_step((hi - lam) / width)
            out += w
        return out
    return phi


class BandlimitedPart(Signal):
    """h = D^(M^-1)(phi_F D^M f) with a smooth cutoff phi_F supported in F.

    The cutoff keeps D^M h supported in F while h itself decays quickly, so
    h lies in every L^p_k and the defect f - h has a finite window.
    """

    def __init__(self, case: Case, F: IntervalSet, fraction: float = 0.1):
        S = case.spectrum
        phi = taper(F, fraction)
        Fw = F.intersect(IntervalSet.symmetric(S.decay_radius))
        if Fw.is_empty:
            raise ConcentrationSaturated("F misses the spectral window")
        G = Signal(lambda lam: phi(lam) * S(lam), S.decay_radius, f"cut[{S.label}]",
                   support=Fw, breaks=tuple(Fw.endpoints()), bandwidth=S.bandwidth,
                   chirp=S.chirp, critical_points=(0.0,))
        width = min(fraction * (hi - lo) for lo, hi in Fw.intervals)
        spread = 40.0 * abs(case.M.b) / max(width, 1e-12)
        xw = case.f.window(case.quad) + spread
        self.inner = SpectrumSignal(G, matrix_inverse(case.M), case.k, case.quad, window=xw)
        super().__init__(self.inner, xw, f"band[{case.f.label}]", bandwidth=self.inner.bandwidth,
                         chirp=self.inner.chirp, critical_points=(0.0,))


def bandlimited_report(case: Case, E: IntervalSet, F: IntervalSet, p1: float, p2: float
                       ) -> InequalityReport:
    k, b = case.k, case.M.b
    if not 1.0 < p1 <= p2 <= 2.0:
        raise ParameterOutOfRange("need 1 < p1 <= p2 <= 2")
    q2 = p2 / (p2 - 1.0)
    params = _params(p1=p1, p2=p2)
    if case.fnorm(p2) == 0.0:
        return make_report("bandlimited", params, 0.0, 0.0, 1.0, case=case.label)
    eps_e = case.f_concentration(E, p1)
    _check_eps("eps_E", eps_e)
    key = ("band", _region_key(F))
    if key not in case._memo:
        case._memo[key] = BandlimitedPart(case, F)
    h = case._memo[key]
    f = case.f
    defect = Signal(lambda x: f(x) - h(x), h.decay_radius, "defect", breaks=f.breaks,
                    bandwidth=max(f.bandwidth, h.bandwidth), critical_points=(0.0,))
    dkey = ("band_defect", _region_key(F), float(p2))
    if dkey not in case._memo:
        # eps_F is a fraction of ||f||, so the defect is resolved relative to it
        val = _power_integral(defect, p2, k, case.quad, 0.0, None, case.fnorm(p2) ** p2)
        case._memo[dkey] = val ** (1.0 / p2)
    eps_f = case._memo[dkey] / case.fnorm(p2)
    _check_eps("eps_F", eps_f)
    gE, gF = gamma_measure(E, k), gamma_measure(F, k)
    inner = ((1 + eps_f) * gE ** (1 / p2) * gF ** (1 / p2)
             * math.exp(-2 * (k + 1) * (1 - 1 / q2) * math.log(abs(b))) + eps_f)
    const = gE ** ((p2 - p1) / (p1 * p2)) / (1 - eps_e) * inner
    lhs = case.fnorm(p1)
    rhs = const * case.fnorm(p2)
    params.update(gamma_E=gE, gamma_F=gF)
    return make_report("bandlimited", params, lhs, rhs, const, case=case.label,
                       diagnostics={"eps_E": eps_e, "eps_F": eps_f})


MATOLCSI_VARIANTS = ("L1_Lp", "p1_p2")


def level_set_measure(g: Signal, eta: float, k, half: float, n: int = 4001) -> float:
    """gamma_k of {|g| > eta} on [-half, half], by a uniform grid scan."""
    x = np.linspace(-half, half, n)
    above = np.abs(g(x)) > eta
    if not above.any():
        return 0.0
    h = x[1] - x[0]
    pairs = []
    start = None
    for i, a in enumerate(above):
        if a and start is None:
            start = x[i] - 0.5 * h
        if not a and start is not None:
            pairs.append((start, x[i] - 0.5 * h))
            start = None
    if start is not None:
        pairs.append((start, x[-1] + 0.5 * h))
    return gamma_measure(IntervalSet.from_pairs(pairs), k)


def matolcsi_report(variant: str, case: Case, eta: float = 0.0, p: float = 2.0,
                    p2: Optional[float] = None) -> InequalityReport:
    """Support-size bound.

    With eta = 0 the supports are exact.  The spectrum of a nonzero integrable
    signal extends to an entire function, so its support has infinite measure
    and the bound is trivial.  With eta > 0 the supports are replaced by the
    level sets {|g| > eta sup|g|}; that is a diagnostic only, never a verdict.
    The threshold is relative so the ratio does not change under f -> c f.
    """
    if variant not in MATOLCSI_VARIANTS:
        raise ParameterOutOfRange(f"unknown Matolcsi variant {variant!r}")
    k, b = case.k, case.M.b
    tid = f"matolcsi_{variant}"
    if variant == "L1_Lp":
        pq = ExponentPair.from_p(p)
        q_out, p_in = pq.q, pq.p
        params = _params(p=p, eta=eta)
    else:
        if p2 is None or not 1.0 < p <= p2 <= 2.0:
            raise ParameterOutOfRange("need 1 < p1 <= p2 <= 2")
        q_out, p_in = p2 / (p2 - 1.0), p2
        params = _params(p1=p, p2=p2, eta=eta)
    lhs = case.snorm(q_out)
    if eta <= 0.0 or lhs == 0.0:
        return make_report(tid, params, lhs, math.inf, None, case=case.label,
                           note="exact spectral support has infinite measure")
    gS = level_set_measure(case.spectrum, eta * case.snorm(math.inf), k,
                           case.spectrum.decay_radius)
    gf = level_set_measure(case.f, eta * case.fnorm(math.inf), k, case.f.window(case.quad))
    if variant == "L1_Lp":
        # Hoelder form: ||Df||_q <= C_kb gS^(1/q) gf^(1/q) ||f||_p
        rhs = math.exp(log_ckb(k, b)) * gS ** (1 / q_out) * gf ** (1 / q_out) * case.fnorm(p_in)
    else:
        q1 = p / (p - 1.0)
        rhs = (math.exp((1 - 2 / q1) * log_ckb(k, b)) * gS ** ((q1 - q_out) / (q1 * q_out))
               * gf ** ((p2 - p) / (p * p2)) * case.fnorm(p2))
    rep = make_report(tid, params, lhs, rhs, None, case=case.label,
                      diagnostics={"gamma_spectrum_level_set": gS, "gamma_signal_level_set": gf},
                      note="level-set diagnostic, not the exact-support statement")
    return rep


# ---------------------------------------------------------------------------
# Extremal Gaussian cases
# ---------------------------------------------------------------------------

def miyachi_extremal_check(s: float, M: CanonicalMatrix, k, grid=None,
                           quad: QuadratureSpec = QuadratureSpec(), tol: float = 1e-8
                           ) -> InequalityReport:
    """Equality case s t = 1/(4 b^2): transform of the chirped Gaussian vs its closed form.

    lhs is the maximal pointwise relative deviation, rhs the tolerance.  The
    diagnostics carry the fitted decay rate t, the calibrated constant and the
    largest ln+ integrand value on the grid for threshold |C0|.
    """
    k = as_order(k)
    evaluator, c0 = gaussian_lcdt_closed_form(s, M, k, quad)
    t = 1.0 / (4.0 * s * M.b ** 2)
    if grid is None:
        grid = np.linspace(-1.0, 1.0, 129) * math.sqrt(math.log(1e6) / t)
    lam = np.asarray(grid, dtype=float)
    f = make_gaussian(s, M.a / (2.0 * M.b))
    vals = lcdt_forward(f, M, k, lam, quad).values
    ref = evaluator(lam)
    dev = float(np.max(np.abs(vals - ref) / np.abs(ref)))
    # decay rate from a least-squares line through log|spectrum| against lam^2
    A = np.vstack([np.ones_like(lam), lam ** 2]).T
    coef, *_ = np.linalg.lstsq(A, np.log(np.abs(vals)), rcond=None)
    t_fit = -float(coef[1])
    lnplus = np.maximum(np.log(np.abs(np.exp(t * lam ** 2) * vals) / abs(c0)), 0.0)
    diag = {"t": t, "t_fit": t_fit, "decay_error": abs(4 * s * M.b ** 2 * t_fit - 1.0),
            "c0_re": c0.real, "c0_im": c0.imag,
            "c0_analytic_deviation": abs(c0 - gaussian_constant_analytic(s, M, k)) / abs(c0),
            "lnplus_max": float(np.max(lnplus))}
    return make_report("miyachi_extremal", _params(s=s, k=k, b=M.b), dev, tol, tol,
                       case=f"miyachi|s={s:g}|k={k:g}|M=({M.a:g},{M.b:g},{M.c:g},{M.d:g})",
                       diagnostics=diag, note="equality case only; finiteness claims not checked")


def cowling_price_extremal_check(m: int, delta: float, M: CanonicalMatrix, k, grid=None,
                                 quad: QuadratureSpec = QuadratureSpec(), tol: float = 1e-8
                                 ) -> InequalityReport:
    """x^m exp(-(delta + i a/(2b)) x^2) maps to Q(lam) exp(-lam^2/(4 delta b^2)) times a chirp.

    Fits Q and requires degree m with residual <= tol (FitFailure otherwise).
    """
    k = as_order(k)
    if M.b == 0:
        from .errors import DegenerateMatrix
        raise DegenerateMatrix("needs b != 0")
    f = make_poly_gaussian(int(m), delta, M.a / (2.0 * M.b))
    if grid is None:
        grid = np.linspace(-1.0, 1.0, 129) * abs(M.b) * math.sqrt(4.0 * delta * math.log(1e4))
    lam = np.asarray(grid, dtype=float)
    vals = lcdt_forward(f, M, k, lam, quad).values
    env = np.exp(-lam ** 2 / (4.0 * delta * M.b ** 2)) * np.exp(0.5j * (M.d / M.b) * lam ** 2)
    Q = vals / env
    deg, res = fit_polynomial_degree(lam, Q, tol=tol)
    if deg != int(m):
        from .errors import FitFailure
        raise FitFailure(f"fitted degree {deg} differs from {m}")
    scale = float(np.max(np.abs(Q)))
    parity = float(np.max(np.abs(Q - (-1) ** int(m) * Q[::-1]))) / scale
    return make_report("cowling_price_extremal", _params(m=m, delta=delta, k=k, b=M.b), res, tol,
                       tol, case=f"cowling_price|m={m}|delta={delta:g}|k={k:g}|"
                                 f"M=({M.a:g},{M.b:g},{M.c:g},{M.d:g})",
                       diagnostics={"degree": float(deg), "parity_defect": parity},
                       note="extremal construction only")


# ---------------------------------------------------------------------------
# Suite
# ---------------------------------------------------------------------------

@dataclass
class SuiteConfig:
    s_values: Sequence[float] = (0.5, 1.0, 2.0)
    exponents: Sequence[float] = (1.25, 1.5, 2.0)
    heisenberg: Sequence[tuple] = ((0.5, 1.0),)
    smoothing_t: Sequence[float] = (1.0,)
    moment_pairs: Sequence[tuple] = ((1.0, 2.0),)
    gaussian_t: Sequence[float] = (0.5, 1.0, 4.0)
    eta: float = 1e-6
    set_fraction: float = 0.6
    miyachi_s: Sequence[float] = (0.5, 1.0)
    cowling_price: Sequence[tuple] = ((0, 1.0), (1, 1.0), (2, 0.5), (3, 2.0))
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)


@dataclass
class CorpusReport:
    cases: list
    errors: list
    summary: dict

    def violated(self) -> int:
        return sum(1 for c in self.cases if c.verdict == VIOLATED)


def case_sets(case: Case, fraction: float) -> tuple[IntervalSet, IntervalSet]:
    """Symmetric E and F covering a fixed fraction of the signal and spectral windows."""
    E = IntervalSet.symmetric(fraction * case.f.window(case.quad))
    F = IntervalSet.symmetric(fraction * case.spectrum.decay_radius)
    return E, F


def case_reports(case: Case, cfg: SuiteConfig) -> tuple[list, list]:
    """Every transform-dependent report for one case; returns (reports, errors)."""
    out, errs = [], []

    def run(name, fn, *args, **kw):
        try:
            out.append(fn(*args, **kw))
        except LcdunklError as exc:
            errs.append({"theorem_id": name, "case": case.label, "error": type(exc).__name__,
                         "message": str(exc)})

    ps = sorted(float(p) for p in cfg.exponents)
    pairs = [(a, b) for a in ps for b in ps if a < b]
    run("plancherel", plancherel_report, case)
    run("riemann_lebesgue", riemann_lebesgue_report, case)
    for p in ps:
        run("young", young_report, case, p)
    k = case.k
    for alpha, beta in cfg.heisenberg:
        for p in ps:
            pq = ExponentPair.from_p(p)
            if alpha < 2 * (k + 1) / pq.q:
                run("heisenberg", heisenberg_report, case, alpha, beta, pq)
                for t in cfg.smoothing_t:
                    run("heisenberg_smoothing", heisenberg_smoothing_report, case, alpha, t, pq)
    for u, beta in cfg.moment_pairs:
        for p in ps:
            q = p / (p - 1.0)
            run("moment_interpolation", moment_interpolation_report, case.spectrum, u, beta, q,
                k, case.quad, case=case)
    for s in cfg.s_values:
        for p in ps:
            run("nash_L1_Lp", nash_report, "L1_Lp", case, s, p)
            if p < 2.0:
                run("nash_L2_Lp", nash_report, "L2_Lp", case, s, p)
        for p1, p2 in pairs:
            run("nash_two_exponent", nash_report, "two_exponent", case, s, p1, p2)
    E, F = case_sets(case, cfg.set_fraction)
    for p in ps:
        run("donoho_stark_L1_Lp", donoho_stark_report, "L1_Lp", case, E, F, p)
    for p1, p2 in pairs:
        run("donoho_stark_p1_p2", donoho_stark_report, "p1_p2", case, E, F, p1, p2)
        run("bandlimited", bandlimited_report, case, E, F, p1, p2)
    for p in ps:
        run("matolcsi_L1_Lp", matolcsi_report, "L1_Lp", case, 0.0, p)
        run("matolcsi_L1_Lp", matolcsi_report, "L1_Lp", case, cfg.eta, p)
    for p1, p2 in pairs:
        run("matolcsi_p1_p2", matolcsi_report, "p1_p2", case, 0.0, p1, p2)
    return out, errs


def signal_reports(f: Signal, k, cfg: SuiteConfig, case: Optional[Case] = None) -> tuple[list, list]:
    """Clarkson-type reports, which do not involve the transform."""
    out, errs = [], []
    c = case if case is not None else Case(f, CanonicalMatrix(0.0, -1.0, 1.0, 0.0), k, cfg.quad)
    ps = sorted(float(p) for p in cfg.exponents)
    for s in cfg.s_values:
        for p in ps:
            jobs = [("L1_Lp", p, None)]
            if p < 2.0:
                jobs.append(("L2_Lp", p, None))
            jobs += [("p1_p2", p, p2) for p2 in ps if p2 > p]
            for variant, a, b in jobs:
                try:
                    out.append(clarkson_report(variant, f, k, s, a, b, cfg.quad, case=c))
                except LcdunklError as exc:
                    errs.append({"theorem_id": f"clarkson_{variant}", "case": c.label,
                                 "error": type(exc).__name__, "message": str(exc)})
    return out, errs


def summarize(reports: list) -> dict:
    """Per-theorem counts of each verdict and worst (largest) ratio."""
    summary: dict = {}
    for r in reports:
        s = summary.setdefault(r.theorem_id, {"cases": 0, "worst_ratio": 0.0, HOLDS: 0,
                                              VIOLATED: 0, TRIVIAL: 0, EMPIRICAL: 0})
        s["cases"] += 1
        s[r.verdict] += 1
        if r.verdict != TRIVIAL and math.isfinite(r.ratio):
            s["worst_ratio"] = max(s["worst_ratio"], r.ratio)
    for s in summary.values():
        if s[VIOLATED]:
            s["verdict"] = VIOLATED
        elif s[HOLDS]:
            s["verdict"] = HOLDS
        elif s[EMPIRICAL]:
            s["verdict"] = EMPIRICAL
        else:
            s["verdict"] = TRIVIAL
    return dict(sorted(summary.items()))


def run_suite(corpus: Sequence[CorpusEntry], matrices: Sequence[CanonicalMatrix],
              orders: Sequence[float], config: Optional[SuiteConfig] = None,
              progress=None) -> CorpusReport:
    """All reports over corpus x matrices x orders plus the extremal and anchor checks.

    Per-case failures are recorded in ``errors`` and never abort the run.
    Reports are sorted by (theorem_id, case, params) for deterministic output.
    """
    cfg = config or SuiteConfig()
    reports, errors = [], []
    if not corpus:
        return CorpusReport([], [], {})
    for k in orders:
        for p in sorted(float(p) for p in cfg.exponents):
            for t in cfg.gaussian_t:
                reports.append(gaussian_norm_report(k, p, t, cfg.quad))
        for entry in corpus:
            first = None
            for M in matrices:
                case = Case(entry.signal, M, k, cfg.quad)
                first = first or case
                r, e = case_reports(case, cfg)
                reports += r
                errors += e
                if progress:
                    progress(case.label)
            if first is not None:
                r, e = signal_reports(entry.signal, k, cfg, first)
                reports += r
                errors += e
        for M in matrices:
            for s in cfg.miyachi_s:
                try:
                    reports.append(miyachi_extremal_check(s, M, k, quad=cfg.quad))
                except LcdunklError as exc:
                    errors.append({"theorem_id": "miyachi_extremal", "case": f"s={s}",
                                   "error": type(exc).__name__, "message": str(exc)})
            for m, delta in cfg.cowling_price:
                try:
                    reports.append(cowling_price_extremal_check(m, delta, M, k, quad=cfg.quad))
                except LcdunklError as exc:
                    errors.append({"theorem_id": "cowling_price_extremal",
                                   "case": f"m={m},delta={delta}",
                                   "error": type(exc).__name__, "message": str(exc)})
    reports.sort(key=lambda r: (r.theorem_id, r.case, sorted(r.params.items())))
    errors.sort(key=lambda e: (e["theorem_id"], e["case"], e["message"]))
    return CorpusReport(reports, errors, summarize(reports))

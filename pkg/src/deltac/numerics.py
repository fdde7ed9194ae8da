"""Special functions and quadrature engines.

The complex error function and the adaptive integrators are thin, checked
wrappers around scipy (the Faddeeva package behind ``scipy.special`` and
QUADPACK behind ``scipy.integrate.quad``).  What this module adds is the
bookkeeping the rest of the package relies on: explicit convergence flags,
error estimates, and exact treatment of the constant part of oscillatory
Fourier integrands (the part that becomes a Dirac delta).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from scipy import integrate, special

from .errors import InvalidArgumentError, UnsupportedIntegrandError

_EPS = np.finfo(float).eps

# Radius inside which erf_complex is quoted at full accuracy.
ERF_ACCURATE_RADIUS = 10.0


@dataclass(frozen=True)
class ComplexErfResult:
    value: complex
    est_abs_error: float


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and splitting policy for every oracle integration.

    ``tail_cutoff`` is the abscissa (in the integration variable) past which
    semi-infinite oscillatory integrals are handed to the Fourier-tail
    integrator; it is rounded up to a whole number of periods.
    ``oscillation_split``, when set, cuts finite intervals into panels of that
    width before adaptive integration.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000
    tail_cutoff: float = 30.0
    oscillation_split: float | None = None

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise InvalidArgumentError("abs_tol and rel_tol must be strictly positive")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise InvalidArgumentError("max_subdivisions must be a positive integer")
        if not self.tail_cutoff > 0:
            raise InvalidArgumentError("tail_cutoff must be positive")
        if self.oscillation_split is not None and not self.oscillation_split > 0:
            raise InvalidArgumentError("oscillation_split must be positive when given")

    def with_tolerance(self, tol: float) -> "QuadratureSpec":
        return QuadratureSpec(tol, tol, self.max_subdivisions, self.tail_cutoff,
                              self.oscillation_split)

    def accepts(self, value: complex, error: float) -> bool:
        return error <= max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class QuadratureResult:
    value: complex | float
    est_error: float
    evaluations: int
    converged: bool


@dataclass(frozen=True)
class OscillatoryResult(QuadratureResult):
    """Result of a Fourier-type integral with its distributional parts split off.

    The full integral, as a distribution in ``r``, equals
    ``value + delta_coeff * delta(r)``.  ``value`` already contains the
    principal-value term ``pv_coeff / r`` produced by an odd constant tail
    (that term is taken as 0 at r = 0).
    """

    delta_coeff: complex = 0.0
    pv_coeff: complex = 0.0


# ---------------------------------------------------------------------------
# error function


def erf_complex(w: complex) -> ComplexErfResult:
    """Error function of a complex argument.

    Accuracy: inside ``|w| <= 10`` the value is good to a few ulps relative
    to ``max(1, |erf(w)|)``.  Outside that disk the estimate is inflated by
    ``|w|**2``, reflecting the conditioning of ``exp(-w**2)``; when the value
    itself overflows an ``OverflowError`` is raised.
    """
    w = complex(w)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise InvalidArgumentError(f"erf_complex needs a finite argument, got {w!r}")
    value = complex(special.erf(w))
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise OverflowError(f"erf({w!r}) overflows double precision")
    err = 8 * _EPS * max(1.0, abs(value))
    if abs(w) > ERF_ACCURATE_RADIUS:
        err *= abs(w) ** 2
    return ComplexErfResult(value, err)


def erfcx_complex(w: complex) -> complex:
    """Scaled complementary error function exp(w**2) * erfc(w)."""
    w = complex(w)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise InvalidArgumentError(f"erfcx_complex needs a finite argument, got {w!r}")
    return complex(special.erfcx(w))


# ---------------------------------------------------------------------------
# finite intervals


def _quad_real(f, lo, hi, spec, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, lo, hi, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                             limit=int(spec.max_subdivisions), full_output=1, **kw)
    value, err, info = out[0], out[1], out[2]
    ok = len(out) == 3
    neval = int(info.get("neval", 0)) if isinstance(info, dict) else 0
    return value, err, neval, ok


def _is_complex_valued(f, x) -> bool:
    return np.iscomplexobj(np.asarray(f(x)))


def _breakpoints(lo, hi, spec, points):
    cuts = {lo, hi}
    if points is not None:
        cuts.update(p for p in points if lo < p < hi)
    if spec.oscillation_split is not None:
        n = int(math.ceil((hi - lo) / spec.oscillation_split))
        cuts.update(lo + i * (hi - lo) / n for i in range(1, n))
    return sorted(cuts)


def integrate_finite(f: Callable[[float], complex], lo: float, hi: float,
                     spec: QuadratureSpec = DEFAULT_SPEC, *,
                     points=None) -> QuadratureResult:
    """Adaptive Gauss-Kronrod integral of ``f`` over ``[lo, hi]``.

    Complex integrands are integrated part by part.  ``points`` lists interior
    abscissae where the integrand has kinks or jumps.
    """
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        raise InvalidArgumentError(f"integrate_finite needs lo < hi, got [{lo}, {hi}]")
    cuts = _breakpoints(lo, hi, spec, points)
    is_complex = _is_complex_valued(f, 0.5 * (lo + hi))
    parts = [lambda x: float(np.real(f(x)))]
    if is_complex:
        parts.append(lambda x: float(np.imag(f(x))))
    totals, errs, neval, ok = [0.0, 0.0], [0.0, 0.0], 0, True
    for a, b in zip(cuts[:-1], cuts[1:]):
        for i, part in enumerate(parts):
            v, e, n, good = _quad_real(part, a, b, spec)
            totals[i] += v
            errs[i] += e
            neval += n
            ok &= good
    value = complex(totals[0], totals[1]) if is_complex else totals[0]
    err = math.hypot(errs[0], errs[1])
    return QuadratureResult(value, err, neval, ok and spec.accepts(value, err))


# ---------------------------------------------------------------------------
# semi-infinite oscillatory integrals


def _aitken_limit(g, start: float, sign: float) -> complex:
    """Limit of g(sign * k) as k -> inf, by Aitken extrapolation on a geometric grid."""
    ks = start * 2.0 ** np.arange(14)
    vals = np.array([complex(g(sign * k)) for k in ks])
    if not np.all(np.isfinite(vals)):
        raise UnsupportedIntegrandError("integrand is not finite along its tail")
    diffs = np.abs(np.diff(vals))
    scale = max(1.0, float(np.max(np.abs(vals))))
    # a tail that tends to a constant has shrinking, eventually tiny increments
    if diffs[-1] > 1e-4 * scale or diffs[-1] > diffs[-4]:
        raise UnsupportedIntegrandError(
            "integrand tail neither decays nor tends to a constant")
    d1, d2 = vals[-1] - vals[-2], vals[-2] - vals[-3]
    denom = d1 - d2
    limit = vals[-1]
    if abs(denom) > 1e-300 and abs(d1) > 1e-15 * scale:
        limit = vals[-1] - d1 * d1 / denom
    if abs(limit) < 1e-12 * scale:
        return 0.0
    return complex(limit) if limit.imag else float(limit.real)


def _half_line_weighted(h, omega, kind, spec):
    """int_0^inf h(k) * cos(omega k) (or sin) dk for real h and omega >= 0."""
    if omega == 0.0:
        if kind == "sin":
            return 0.0, 0.0, 0, True
        v, e, n, ok = _quad_real(h, 0.0, np.inf, spec)
        return v, e, n, ok
    period = 2 * math.pi / omega
    cut = math.ceil(spec.tail_cutoff / period) * period
    v1, e1, n1, ok1 = _quad_real(h, 0.0, cut, spec, weight=kind, wvar=omega)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(h, cut, np.inf, weight=kind, wvar=omega,
                             epsabs=spec.abs_tol, limlst=200, full_output=1)
    v2, e2, info2 = out[0], out[1], out[2]
    ok2 = len(out) == 3
    n2 = int(info2.get("neval", 0)) if isinstance(info2, dict) else 0
    return v1 + v2, math.hypot(e1, e2), n1 + n2, ok1 and ok2


def _complex_half_line(h, omega, kind, spec, is_complex):
    vr, er, nr, okr = _half_line_weighted(lambda k: float(np.real(h(k))), omega, kind, spec)
    if not is_complex:
        return vr, er, nr, okr
    vi, ei, ni, oki = _half_line_weighted(lambda k: float(np.imag(h(k))), omega, kind, spec)
    return complex(vr, vi), math.hypot(er, ei), nr + ni, okr and oki


def integrate_semi_infinite_oscillatory(
        g: Callable[[float], complex], r: float, spec: QuadratureSpec = DEFAULT_SPEC, *,
        domain: Literal["full", "half"] = "full",
        parity: Literal["even", "odd"] | None = None,
        tail_limit: complex | tuple[complex, complex] | None = None,
) -> OscillatoryResult:
    """Fourier integral of ``exp(i r k) g(k)`` over the real line or over k > 0.

    ``g`` must be smooth for k != 0 and tend to constants as k -> +-inf.
    The constants are removed analytically: an even constant ``c`` over the
    full line contributes ``2 pi c delta(r)``, an odd one contributes the
    principal value ``2 i c / r``; on the half line a constant contributes
    ``pi c delta(r) + i c / r``.  Only the decaying remainder is integrated
    numerically, which keeps the distributional part exact.

    ``tail_limit`` may give the limits exactly (one value for both ends, or a
    ``(plus, minus)`` pair); otherwise they are extrapolated from samples
    beyond ``spec.tail_cutoff``.  ``parity`` skips evaluating ``g(-k)``.
    """
    r = float(r)
    if not math.isfinite(r):
        raise InvalidArgumentError("r must be finite")
    start = max(spec.tail_cutoff, 1.0)
    if tail_limit is None:
        c_plus = _aitken_limit(g, start, 1.0)
        if domain == "full":
            if parity == "even":
                c_minus = c_plus
            elif parity == "odd":
                c_minus = -c_plus
            else:
                c_minus = _aitken_limit(g, start, -1.0)
        else:
            c_minus = 0.0
    elif isinstance(tail_limit, tuple):
        c_plus, c_minus = tail_limit
    else:
        c_plus = tail_limit
        c_minus = -tail_limit if parity == "odd" else tail_limit

    omega = abs(r)
    sgn = 1.0 if r >= 0 else -1.0
    is_complex = _is_complex_valued(g, 1.0) or isinstance(c_plus, complex) and c_plus.imag != 0

    if domain == "half":
        rem = lambda k: g(k) - c_plus  # noqa: E731
        vc, ec, nc, okc = _complex_half_line(rem, omega, "cos", spec, is_complex)
        vs, es, ns, oks = _complex_half_line(rem, omega, "sin", spec, is_complex)
        pv = 1j * c_plus
        value = vc + 1j * sgn * vs + (pv / r if r != 0 else 0.0)
        err = math.hypot(ec, es)
        return OscillatoryResult(value, err, nc + ns, okc and oks and spec.accepts(value, err),
                                 delta_coeff=math.pi * c_plus, pv_coeff=pv)

    if domain != "full":
        raise InvalidArgumentError(f"unknown domain {domain!r}")
    c_even = 0.5 * (c_plus + c_minus)
    c_odd = 0.5 * (c_plus - c_minus)
    value, err, neval, ok = 0.0, 0.0, 0, True
    if parity != "odd":
        if parity == "even":
            even = lambda k: 2.0 * (g(k) - c_even)  # noqa: E731
        else:
            even = lambda k: g(k) + g(-k) - 2.0 * c_even  # noqa: E731
        v, e, n, good = _complex_half_line(even, omega, "cos", spec, is_complex)
        value, err, neval, ok = value + v, math.hypot(err, e), neval + n, ok and good
    if parity != "even":
        if parity == "odd":
            odd = lambda k: 2.0 * (g(k) - c_odd)  # noqa: E731
        else:
            odd = lambda k: g(k) - g(-k) - 2.0 * c_odd  # noqa: E731
        v, e, n, good = _complex_half_line(odd, omega, "sin", spec, is_complex)
        value, err, neval, ok = value + 1j * sgn * v, math.hypot(err, e), neval + n, ok and good
    pv = 2j * c_odd
    if r != 0 and c_odd != 0:
        value = value + pv / r
    return OscillatoryResult(value, err, neval, ok and spec.accepts(value, err),
                             delta_coeff=2 * math.pi * c_even, pv_coeff=pv)

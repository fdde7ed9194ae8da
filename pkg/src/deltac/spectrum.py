"""Spectrum and eigenfunctions of H = -d^2/dx^2 + z delta(x).

Everything here is in the dimensionless variables x -> x/ell,
z = 2 m ell zeta / hbar^2, E = 2 m ell^2 E_phys / hbar^2.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from .errors import (DegenerateCouplingError, InvalidArgumentError,
                     SpectralSingularityError)
from .numerics import DEFAULT_SPEC, QuadratureSpec, integrate_finite


@dataclass(frozen=True)
class Coupling:
    """Dimensionless complex coupling with its derived parameters.

    ``a`` and ``b`` are the squared half real and imaginary parts, and
    ``epsilon = Im(z)/Re(z)`` is the non-Hermiticity parameter used as the
    expansion variable of the metric.
    """

    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise InvalidArgumentError(f"coupling must be finite, got {self.z!r}")
        object.__setattr__(self, "z", z)

    @classmethod
    def from_epsilon(cls, re_z: float, epsilon: float) -> "Coupling":
        return cls(complex(re_z, re_z * epsilon))

    @property
    def re(self) -> float:
        return self.z.real

    @property
    def im(self) -> float:
        return self.z.imag

    @property
    def a(self) -> float:
        return self.z.real ** 2 / 4

    @property
    def b(self) -> float:
        return self.z.imag ** 2 / 4

    @property
    def sqrt_a(self) -> float:
        return abs(self.z.real) / 2

    @property
    def epsilon(self) -> float:
        if self.z.real == 0:
            raise InvalidArgumentError("epsilon is undefined for purely imaginary z")
        return self.z.imag / self.z.real

    def require_positive_real_part(self) -> None:
        """Raise unless Re(z) > 0, the regime with a clean continuum."""
        if self.z == 0:
            raise DegenerateCouplingError("z = 0 (free particle) is outside the model")
        if self.z.real == 0:
            raise SpectralSingularityError(
                f"z = {self.z} is purely imaginary: spectral singularity at "
                f"E = {(-self.z ** 2 / 4).real:g}, the biorthonormal system breaks down")
        if self.z.real < 0:
            raise InvalidArgumentError(
                f"Re(z) = {self.z.real} < 0: bound state present, metric construction needs Re(z) > 0")


def as_coupling(z) -> Coupling:
    return z if isinstance(z, Coupling) else Coupling(z)


def nondimensionalize(m: float, ell: float, zeta: complex, hbar: float = 1.0) -> Coupling:
    """z = 2 m ell zeta / hbar^2."""
    if not m > 0:
        raise InvalidArgumentError(f"mass must be positive, got {m}")
    if not ell > 0:
        raise InvalidArgumentError(f"length scale must be positive, got {ell}")
    return Coupling(2 * m * ell * complex(zeta) / hbar ** 2)


def dimensionalize(coupling: Coupling, m: float, ell: float, hbar: float = 1.0) -> complex:
    """Inverse of :func:`nondimensionalize`: the physical coupling zeta."""
    if not m > 0 or not ell > 0:
        raise InvalidArgumentError("mass and length scale must be positive")
    return as_coupling(coupling).z * hbar ** 2 / (2 * m * ell)


class SpectralKind(enum.Enum):
    BOUND_STATE = "BoundState"
    SPECTRAL_SINGULARITY = "SpectralSingularity"
    CLEAN_CONTINUUM = "CleanContinuum"


@dataclass(frozen=True)
class SpectralReport:
    kind: SpectralKind
    special_E: complex | float | None
    continuum: str = "[0, inf)"

    def describe(self) -> str:
        if self.special_E is None:
            return f"{self.kind.value} continuum={self.continuum}"
        return f"{self.kind.value} E={_fmt_number(self.special_E)}"


def _fmt_number(v) -> str:
    v = complex(v)
    if v.imag == 0:
        return f"{v.real:g}"
    return f"{v.real:g}{v.imag:+g}i"


def classify(z) -> SpectralReport:
    """Spectral type of H for coupling z.

    Re(z) < 0 gives an isolated eigenvalue -z^2/4, purely imaginary z a
    spectral singularity at -z^2/4 > 0, and Re(z) > 0 a clean continuum.
    """
    zc = as_coupling(z).z
    if zc == 0:
        raise DegenerateCouplingError("z = 0 (free particle) is outside the model")
    special = -zc * zc / 4
    if zc.real < 0:
        return SpectralReport(SpectralKind.BOUND_STATE, special)
    if zc.real == 0:
        return SpectralReport(SpectralKind.SPECTRAL_SINGULARITY, special.real)
    return SpectralReport(SpectralKind.CLEAN_CONTINUUM, None)


def transfer_coefficients(A_minus: complex, B_minus: complex, z: complex,
                          k: float) -> tuple[complex, complex]:
    """Amplitudes (A+, B+) on x > 0 from (A-, B-) on x < 0 across the delta."""
    if abs(A_minus) ** 2 + abs(B_minus) ** 2 == 0:
        raise InvalidArgumentError("A- and B- must not both vanish")
    if not k > 0:
        raise InvalidArgumentError(f"k must be positive, got {k}")
    t = 1j * complex(z) / (2 * k)
    return (1 - t) * A_minus - t * B_minus, t * A_minus + (1 + t) * B_minus


@dataclass(frozen=True)
class Eigenfunction:
    """Normalized continuum eigenfunction of H (``psi``) or of H^dagger (``phi``).

    Branch 1 is the reflectionless odd solution sin(kx)/sqrt(pi); branch 2 is
    the even solution (cos kx + (z/2k) sin k|x|)/sqrt(pi (1 + z^2/4k^2)), with
    z replaced by its conjugate for ``phi``.  The square root is principal.
    """

    coupling: Coupling
    k: float
    branch: Literal[1, 2]
    which: Literal["psi", "phi"] = "psi"

    def __post_init__(self):
        object.__setattr__(self, "coupling", as_coupling(self.coupling))
        if self.branch not in (1, 2):
            raise InvalidArgumentError(f"branch must be 1 or 2, got {self.branch}")
        if self.which not in ("psi", "phi"):
            raise InvalidArgumentError(f"which must be 'psi' or 'phi', got {self.which!r}")
        if not self.k > 0:
            raise InvalidArgumentError(f"k must be positive, got {self.k}")

    @property
    def z_eff(self) -> complex:
        z = self.coupling.z
        return z if self.which == "psi" else z.conjugate()

    @property
    def normalization_root(self) -> complex:
        if self.branch == 1:
            return complex(math.sqrt(math.pi))
        root = cmath.sqrt(math.pi * (1 + self.z_eff ** 2 / (4 * self.k ** 2)))
        if abs(root) < 1e-12:
            raise SpectralSingularityError(
                f"normalization vanishes at k = {self.k} for z = {self.coupling.z}")
        return root

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        k = self.k
        if self.branch == 1:
            return np.sin(k * x) / math.sqrt(math.pi)
        # sin(kx) sign(x) = sin(k|x|); vanishes at x = 0 with sign(0) = 0
        return (np.cos(k * x) + self.z_eff / (2 * k) * np.sin(k * np.abs(x))) / self.normalization_root

    def derivative(self, x, side: int = 1):
        """Analytic derivative; at x = 0 the one-sided value selected by ``side``."""
        x = np.asarray(x, dtype=float)
        k = self.k
        if self.branch == 1:
            return k * np.cos(k * x) / math.sqrt(math.pi)
        s = np.where(x == 0, np.sign(side), np.sign(x))
        return (-k * np.sin(k * x) + self.z_eff / 2 * np.cos(k * x) * s) / self.normalization_root


def eval_eigenfunction(e: Eigenfunction, x):
    return e(x)


@dataclass(frozen=True)
class SchrodingerResidual:
    max_residual: float
    jump_measured: complex
    jump_expected: complex

    @property
    def jump_residual(self) -> float:
        return abs(self.jump_measured - self.jump_expected)


def verify_schrodinger(e: Eigenfunction, x_samples: Sequence[float],
                       h: float = 1e-4) -> SchrodingerResidual:
    """Finite-difference check of -psi'' = k^2 psi away from 0 and of the
    derivative jump psi'(0+) - psi'(0-) = z psi(0) at the origin."""
    xs = np.asarray(x_samples, dtype=float)
    if np.any(np.abs(xs) < 2 * h):
        raise InvalidArgumentError("x_samples must stay at least 2h away from the origin")
    second = (e(xs + h) - 2 * e(xs) + e(xs - h)) / h ** 2
    residual = float(np.max(np.abs(-second - e.k ** 2 * e(xs)))) if xs.size else 0.0
    f0 = e(0.0)
    right = (-3 * f0 + 4 * e(h) - e(2 * h)) / (2 * h)
    left = (3 * f0 - 4 * e(-h) + e(-2 * h)) / (2 * h)
    return SchrodingerResidual(residual, complex(right - left), complex(e.z_eff * f0))


@dataclass(frozen=True)
class MomentumProfile:
    """Smooth momentum-space weight supported on [k_lo, k_hi] within (0, inf)."""

    k_lo: float
    k_hi: float
    func: Callable[[np.ndarray], np.ndarray] = field(compare=False)

    def __post_init__(self):
        if not (0 < self.k_lo < self.k_hi and math.isfinite(self.k_hi)):
            raise InvalidArgumentError(
                f"profile support must satisfy 0 < k_lo < k_hi < inf, got [{self.k_lo}, {self.k_hi}]")

    def __call__(self, k):
        k = np.asarray(k, dtype=float)
        inside = (k > self.k_lo) & (k < self.k_hi)
        out = np.zeros(k.shape, dtype=complex)
        out[inside] = self.func(k[inside])
        return out

    @classmethod
    def bump(cls, k_lo: float, k_hi: float, *, amplitude: complex = 1.0,
             tilt: float = 0.0) -> "MomentumProfile":
        """Standard C-infinity bump exp(-1/(1-t^2)), optionally tilted by (1 + tilt*t)."""
        mid, half = 0.5 * (k_lo + k_hi), 0.5 * (k_hi - k_lo)

        def func(k):
            t = (k - mid) / half
            return amplitude * (1 + tilt * t) * np.exp(1.0 - 1.0 / (1.0 - t * t))

        return cls(k_lo, k_hi, func)


def profile_overlap(g: MomentumProfile, h: MomentumProfile,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """int conj(g(k)) h(k) dk over the common support."""
    lo, hi = max(g.k_lo, h.k_lo), min(g.k_hi, h.k_hi)
    if lo >= hi:
        return 0.0
    res = integrate_finite(lambda k: complex(np.conj(g(k)) * h(k)), lo, hi, spec)
    return complex(res.value)


@dataclass(frozen=True)
class SmearedResult:
    value: complex
    expected: complex
    tail_bound: float
    converged: bool

    @property
    def error(self) -> float:
        return abs(self.value - self.expected)


def _gauss_panels(lo, hi, n_panels, order):
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _smeared_wave(coupling, branch, which, profile, xs, k_nodes, k_weights):
    """x-space packet int profile(k) eigenfunction_k(x) dk on the nodes xs."""
    gk = profile(k_nodes) * k_weights
    keep = gk != 0
    out = np.zeros(xs.shape, dtype=complex)
    for k, wk in zip(k_nodes[keep], gk[keep]):
        out += wk * Eigenfunction(coupling, float(k), branch, which)(xs)
    return out


def smeared_inner_product(coupling, bra_branch: int, ket_branch: int,
                          g: MomentumProfile, h: MomentumProfile,
                          spec: QuadratureSpec = DEFAULT_SPEC, *,
                          x_max: float | None = None) -> SmearedResult:
    """<int g(k) psi_a^k dk | int h(q) phi_b^q dq> by nested quadrature.

    The smeared packets decay faster than any power of x, so the x integral
    is truncated at ``x_max``; the change between ``0.75 x_max`` and
    ``x_max`` is reported as ``tail_bound``.  Biorthonormality predicts
    ``delta_ab * int conj(g) h dk``.
    """
    c = as_coupling(coupling)
    c.require_positive_real_part()
    k_lo, k_hi = min(g.k_lo, h.k_lo), max(g.k_hi, h.k_hi)
    if x_max is None:
        x_max = 250.0 / min(g.k_hi - g.k_lo, h.k_hi - h.k_lo)
    k_nodes, k_weights = _gauss_panels(k_lo, k_hi, 16, 24)
    # panels no wider than a quarter wavelength of the fastest mode
    width = min(0.5, 0.5 * math.pi / k_hi)
    n_panels = int(math.ceil(x_max / width))
    xs, xw = _gauss_panels(0.0, x_max, n_panels, 12)
    xs = np.concatenate([-xs[::-1], xs])
    xw = np.concatenate([xw[::-1], xw])
    bra = _smeared_wave(c, bra_branch, "psi", g, xs, k_nodes, k_weights)
    ket = _smeared_wave(c, ket_branch, "phi", h, xs, k_nodes, k_weights)
    dens = np.conj(bra) * ket * xw
    value = complex(np.sum(dens))
    inner = np.abs(xs) <= 0.75 * x_max
    tail = abs(value - complex(np.sum(dens[inner])))
    expected = profile_overlap(g, h, spec) if bra_branch == ket_branch else 0.0
    return SmearedResult(value, complex(expected), tail, tail <= max(spec.abs_tol, 1e-9))


def singularity_scan(z, k_grid, tol: float = 1e-2) -> list[float]:
    """Momenta on ``k_grid`` where |1 + z^2/(4k^2)| < tol.

    The factor vanishes only for z = +-2ik on the positive axis, so any
    coupling with Re(z) != 0 returns an empty list.
    """
    zc = as_coupling(z).z
    ks = np.asarray(list(k_grid), dtype=float)
    if np.any(ks <= 0):
        raise InvalidArgumentError("k_grid must lie in (0, inf)")
    if zc.real != 0:
        return []
    factor = np.abs(1 + zc * zc / (4 * ks * ks))
    return [float(k) for k in ks[factor < tol]]

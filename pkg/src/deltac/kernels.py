"""Containers for two-point kernels with symbolic delta parts, and grid functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import CubicSpline

from .errors import InvalidArgumentError


def _zero1(x):
    return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class KernelSample:
    """Value of a kernel at one point (x, y), split into its parts.

    The kernel reads
    ``delta_diag*delta(x-y) + delta_anti*delta(x+y) + delta_x*delta(x)
    + delta_y*delta(y) + smooth``, where each coefficient is evaluated at the
    sample point.
    """

    x: float
    y: float
    delta_diag: complex
    delta_anti: complex
    smooth: complex
    delta_x: complex = 0.0
    delta_y: complex = 0.0


@dataclass(frozen=True)
class SingularSmoothKernel:
    """Kernel K(x, y) carried as delta-line coefficients plus a smooth part.

    ``delta_diag(x)`` multiplies delta(x - y), ``delta_anti(x)`` multiplies
    delta(x + y), ``delta_x(y)`` multiplies delta(x) and ``delta_y(x)``
    multiplies delta(y).  Quadrature only ever touches ``smooth``.
    """

    smooth: Callable = field(compare=False)
    delta_diag: Callable = field(default=_zero1, compare=False)
    delta_anti: Callable = field(default=_zero1, compare=False)
    delta_x: Callable = field(default=_zero1, compare=False)
    delta_y: Callable = field(default=_zero1, compare=False)
    hermitian: bool = False
    parity: bool = False
    label: str = ""

    def sample(self, x: float, y: float) -> KernelSample:
        return KernelSample(
            float(x), float(y),
            complex(self.delta_diag(x)), complex(self.delta_anti(x)),
            complex(self.smooth(x, y)),
            complex(self.delta_x(y)), complex(self.delta_y(x)),
        )


@dataclass(frozen=True)
class GridFunction:
    """Samples of a function on a strictly increasing grid, cubic-spline interpolated."""

    nodes: np.ndarray
    values: np.ndarray
    degree: int = 3

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if nodes.ndim != 1 or nodes.size < 4:
            raise InvalidArgumentError("a grid function needs at least 4 nodes")
        if nodes.shape != values.shape:
            raise InvalidArgumentError("nodes and values must have the same shape")
        if np.any(np.diff(nodes) <= 0):
            raise InvalidArgumentError("grid nodes must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError("grid values must be finite")
        if self.degree != 3:
            raise InvalidArgumentError("only cubic interpolation is supported")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)

    @classmethod
    def sample(cls, func: Callable, nodes) -> "GridFunction":
        nodes = np.asarray(nodes, dtype=float)
        return cls(nodes, np.asarray(func(nodes), dtype=complex))

    @classmethod
    def symmetric(cls, func: Callable, half_width: float, spacing: float) -> "GridFunction":
        """Uniform grid symmetric about 0, with a node at 0."""
        n = int(np.ceil(half_width / spacing))
        half = np.arange(1, n + 1) * (half_width / n)
        nodes = np.concatenate([-half[::-1], [0.0], half])
        return cls.sample(func, nodes)

    def interpolant(self) -> CubicSpline:
        return CubicSpline(self.nodes, self.values)

    def __call__(self, x):
        return self.interpolant()(x)

    @property
    def is_symmetric(self) -> bool:
        n = self.nodes
        return bool(np.allclose(n, -n[::-1], rtol=0, atol=1e-12 * max(1.0, abs(n[-1]))))

    def support(self, rel_threshold: float = 1e-12) -> tuple[float, float]:
        """Smallest node interval outside which |values| stays below the threshold."""
        mag = np.abs(self.values)
        peak = mag.max()
        if peak == 0:
            return 0.0, 0.0
        idx = np.nonzero(mag > rel_threshold * peak)[0]
        return float(self.nodes[idx[0]]), float(self.nodes[idx[-1]])

    def integrate(self, split_at: tuple[float, ...] = ()) -> complex:
        """Spline integral over the grid, with separate splines between the
        ``split_at`` nodes so kinks there do not degrade the accuracy."""
        cuts = [0] + [int(np.searchsorted(self.nodes, c)) for c in split_at
                      if self.nodes[0] < c < self.nodes[-1] and c in self.nodes] + [self.nodes.size - 1]
        total = 0j
        for i, j in zip(cuts[:-1], cuts[1:]):
            if j - i < 3:
                total += trapezoid(self.values[i:j + 1], self.nodes[i:j + 1])
                continue
            total += CubicSpline(self.nodes[i:j + 1], self.values[i:j + 1]).integrate(
                self.nodes[i], self.nodes[j])
        return complex(total)

    def norm(self) -> float:
        dens = GridFunction(self.nodes, np.abs(self.values) ** 2)
        return float(np.sqrt(max(dens.integrate().real, 0.0)))

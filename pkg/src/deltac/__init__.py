"""Numerics for the complex delta-function potential -d^2/dx^2 + z delta(x)."""

from __future__ import annotations

from .errors import (DeltacError, DegenerateCouplingError, DomainError, InvalidArgumentError,
                     MarginError, OutOfRegimeError, SpectralSingularityError,
                     UnsupportedCaseError, UnsupportedIntegrandError, UnsupportedOrderError)
from .hermitian import (EnergyBreakdown, GaussianPacket, PhysicalContext, defect_estimate,
                        energy_asymptotics, energy_expectation, gamma_fn, h2_apply, h2_kernel,
                        length_scale, omega)
from .kernels import GridFunction, KernelSample, SingularSmoothKernel
from .metric import (In_quadrature, In_series, MetricExpansion, apply_metric, eta_assemble,
                     eta_order_kernel)
from .numerics import QuadratureSpec, erf_complex, integrate_semi_infinite_oscillatory
from .spectrum import Coupling, SpectralKind, classify

__version__ = "0.1.0"

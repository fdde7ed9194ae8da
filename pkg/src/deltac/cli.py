"""Command-line front end.

Exit codes: 0 success; 1 a verification check failed; 2 invalid input or a
refused computation; ``classify`` additionally returns 10 for a bound state
and 11 for a spectral singularity.

Complex numbers are written ``a+bi`` with no spaces (``2``, ``2i``, ``-1+2i``,
``1-0.5i``).  Negative values may follow their flag directly
(``--z -1+2i``, ``--grid -3:3:0.1``) or be attached with ``=``
(``--z=-1+2i``).
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import hermitian, io, metric, spectrum
from .errors import DeltacError, SpectralSingularityError, UnsupportedOrderError
from .kernels import GridFunction
from .numerics import DEFAULT_SPEC, QuadratureSpec
from .units import SYSTEMS

DEFAULT_SEED = 12345

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_CODES = {spectrum.SpectralKind.CLEAN_CONTINUUM: 0,
              spectrum.SpectralKind.BOUND_STATE: 10,
              spectrum.SpectralKind.SPECTRAL_SINGULARITY: 11}

_COMPLEX = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?"
                      r"([+-](\d+(\.\d*)?|\.\d+)?([eE][+-]?\d+)?i)?$|^[+-]?(\d+(\.\d*)?|\.\d+)?([eE][+-]?\d+)?i$")


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` style complex literals."""
    s = text.strip()
    if not s or " " in s or not _COMPLEX.match(s):
        raise argparse.ArgumentTypeError(f"not a complex number of the form a+bi: {text!r}")
    s = s[:-1] + "j" if s.endswith("i") else s
    s = re.sub(r"(^|[+-])j$", r"\g<1>1j", s)
    return complex(s)


def parse_range(text: str) -> np.ndarray:
    """``lo:hi:step`` inclusive of both ends."""
    try:
        lo, hi, step = (float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:step, got {text!r}") from None
    if not step > 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}")
    n = int(round((hi - lo) / step))
    return np.linspace(lo, lo + n * step, n + 1)


def parse_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


@dataclass
class RunConfig:
    command: str
    options: dict
    spec: QuadratureSpec = DEFAULT_SPEC
    out: str | None = None
    fmt: str = "csv"
    seed: int = DEFAULT_SEED

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        opts = {k: v for k, v in vars(ns).items()
                if k not in ("command", "tol", "format", "out", "seed", "handler")}
        spec = DEFAULT_SPEC if ns.tol is None else DEFAULT_SPEC.with_tolerance(ns.tol)
        return cls(ns.command, opts, spec, ns.out, ns.format, ns.seed)


def _emit(cfg: RunConfig, columns, rows) -> None:
    text = io.render(columns, rows, cfg.fmt)
    if cfg.out:
        io.atomic_write(cfg.out, text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# classify


def cmd_classify(cfg: RunConfig) -> int:
    report = spectrum.classify(cfg.options["z"])
    print(report.describe())
    return EXIT_CODES[report.kind]


# ---------------------------------------------------------------------------
# verify


@dataclass
class Check:
    suite: str
    name: str
    residual: float
    tolerance: float
    status: str = field(default="")

    def __post_init__(self):
        if not self.status:
            ok = math.isfinite(self.residual) and self.residual <= self.tolerance
            self.status = "pass" if ok else "fail"

    def row(self):
        return (self.suite, self.name, float(self.residual), float(self.tolerance), self.status)


VERIFY_COLUMNS = ("suite", "check", "residual", "tolerance", "status")


def _random_pairs(rng, n, scale):
    return rng.uniform(-scale, scale, size=(n, 2))


def suite_biortho(z: complex, cfg: RunConfig, eps_grid) -> list[Check]:
    c = spectrum.Coupling(z)
    c.require_positive_real_part()
    checks = []
    for branch in (1, 2):
        for which in ("psi", "phi"):
            e = spectrum.Eigenfunction(c, 1.3, branch, which)
            r = spectrum.verify_schrodinger(e, np.linspace(-3, 3, 13)[np.arange(13) != 6])
            checks.append(Check("biortho", f"schrodinger_{which}{branch}", r.max_residual, 1e-5))
            checks.append(Check("biortho", f"jump_{which}{branch}", r.jump_residual, 1e-5))
    bump = spectrum.MomentumProfile.bump
    p0, p1, p2 = bump(0.5, 1.5), bump(0.8, 2.0, tilt=0.3), bump(1.0, 2.5, tilt=-0.2)
    pairs = [(1, 1, p0, p0), (2, 2, p0, p0), (1, 2, p0, p0),
             (2, 1, p0, p1), (1, 1, p1, p2), (2, 2, p2, p1)]
    for i, (a, b, g, h) in enumerate(pairs):
        r = spectrum.smeared_inner_product(c, a, b, g, h, cfg.spec)
        checks.append(Check("biortho", f"smeared_{a}{b}_pair{i}", r.error, 1e-6))
    return checks


def _family(coupling, n=8):
    R = coupling.re
    half = 15 / R + 12
    spacing = metric.metric_grid_spacing(coupling)
    funcs = []
    for j in range(n):
        c0 = -1.5 + 3 * j / (n - 1)
        w = 0.6 + 0.15 * j
        funcs.append(GridFunction.symmetric(
            lambda x, c0=c0, w=w, j=j: np.exp(-(x - c0) ** 2 / (2 * w * w) + 0.4j * j * x),
            half, spacing))
    return funcs


def suite_metric(z: complex, cfg: RunConfig, eps_grid) -> list[Check]:
    c = spectrum.Coupling(z)
    c.require_positive_real_part()
    rng = np.random.default_rng(cfg.seed)
    pts = _random_pairs(rng, 200, 6 / c.re)
    checks = []
    for m in (1, 2, 3):
        xs, ys = pts[:, 0], pts[:, 1]
        k = metric.eta_order_kernel(m, c, xs, ys)
        herm = np.max(np.abs(k - np.conj(metric.eta_order_kernel(m, c, ys, xs))))
        par = np.max(np.abs(k - metric.eta_order_kernel(m, c, -xs, -ys)))
        checks.append(Check("metric", f"hermiticity_eta{m}", herm, 1e-12))
        checks.append(Check("metric", f"parity_eta{m}", par, 1e-12))
    eps = c.epsilon
    tol = max(eps ** 4, 1e-9) * max(1.0, c.re)
    worst = 0.0
    for n in (0, 1, 2):
        for r in (0.25, 0.5, 1.0, 2.0, 4.0):
            s = metric.In_series(n, r, c)
            q = metric.In_quadrature(n, r, c, cfg.spec)
            worst = max(worst, abs(s.smooth - q.smooth), abs(s.delta_coeff - q.delta_coeff))
    checks.append(Check("metric", "In_series_vs_quadrature", worst, tol))
    grid = np.linspace(-2.3, 2.1, 5) / (c.re / 2)
    worst, bookkeeping = 0.0, 0.0
    for x in grid:
        for y in grid[::-1] + 0.05:
            sample = metric.eta_assemble(c, x, y, "quadrature", cfg.spec)
            order_sum = sum(eps ** m * complex(metric.eta_order_kernel(m, c, x, y)) for m in (1, 2, 3))
            worst = max(worst, abs(sample.smooth - order_sum))
            bookkeeping = max(bookkeeping, abs(sample.delta_diag - 1), abs(sample.delta_anti))
    checks.append(Check("metric", "assembly_vs_orders", worst, tol))
    checks.append(Check("metric", "delta_bookkeeping", bookkeeping, 0.0))
    for e in eps_grid:
        ce = spectrum.Coupling.from_epsilon(c.re, e)
        gram = metric.metric_gram(_family(ce), metric.MetricExpansion.build(ce))
        checks.append(Check("metric", f"gram_positive_eps{e:g}", -gram.min_eigenvalue, 0.0,
                            "pass" if gram.positive_definite else "fail"))
    return checks


def suite_hermitian(z: complex, cfg: RunConfig, eps_grid) -> list[Check]:
    c = spectrum.Coupling(z)
    c.require_positive_real_part()
    # dimensionless Hamiltonian: hbar = 1, m = 1/2, so L = 2/Re(z)
    ctx = hermitian.PhysicalContext(0.5, c.z, 1.0)
    L = ctx.L
    checks = [
        Check("hermitian", "commutator_kernel", hermitian.commutator_kernel_check(c, seed=cfg.seed).max_residual, 1e-8),
        Check("hermitian", "commutator_odd_pairs",
              hermitian.commutator_kernel_check(c, hermitian.gaussian_battery(3, cfg.seed, odd=True)).max_residual,
              1e-12),
        Check("hermitian", "unit_scaling",
              hermitian.h2_scaling_residual(ctx, 0.7, [(0.1, 0.2), (1, -2), (-3, 0.5), (0, 1), (2, 2)]), 1e-12),
    ]
    odd = GridFunction.symmetric(lambda x: x * np.exp(-x * x / (2 * L * L)), 20 * L, L / 40)
    act = hermitian.h2_apply(odd, ctx)
    checks.append(Check("hermitian", "annihilates_odd",
                        max(abs(act.c0), abs(act.c1), float(np.max(np.abs(act.smooth.values)))), 0.0))
    sym_o = max(abs(hermitian.omega(s, k, ctx) - hermitian.omega(s, -k, ctx))
                for s in (0.5 * L, L, 2 * L) for k in (0.5 / L, 1 / L, 3 / L))
    sym_g = max(abs(hermitian.gamma_fn(s, a, ctx) - hermitian.gamma_fn(s, -a, ctx))
                for s in (0.5 * L, L, 2 * L) for a in (0.5 * L, L, 3 * L))
    checks.append(Check("hermitian", "omega_even_in_k", sym_o, 1e-10))
    checks.append(Check("hermitian", "gamma_even_in_a", sym_g, 1e-10))
    worst, gap = 0.0, 0.0
    for s in (0.5 * L, L, 2 * L):
        for pk in (hermitian.GaussianPacket(s, 1 / L), hermitian.GaussianPacket(s, 0, L)):
            a = hermitian.energy_expectation(pk, ctx)
            b = hermitian.energy_expectation(pk, ctx, "quadrature")
            coupling = a.real_coupling_term if a.alt_coupling_term is None else a.alt_coupling_term
            closed = a.kinetic_plus_width + coupling + a.nonhermitian_term
            worst = max(worst, abs(closed - b.total) / abs(b.total))
            gap = max(gap, abs(a.coupling_discrepancy) / abs(b.real_coupling_term))
    checks.append(Check("hermitian", "energy_closed_vs_quadrature", worst, 1e-6))
    checks.append(Check("hermitian", "xmean_coupling_factor_gap", gap, float("nan"), "info"))
    pk = hermitian.GaussianPacket(L, 0.5 / L)
    t1 = hermitian.energy_expectation(pk, ctx).nonhermitian_term
    t2 = hermitian.energy_expectation(pk, ctx.with_zeta(complex(c.re, 2 * c.im))).nonhermitian_term
    checks.append(Check("hermitian", "nonhermitian_quadratic", abs(t2 / t1 - 4) if t1 else float("nan"), 1e-12))
    return checks


SUITES: dict[str, Callable] = {"biortho": suite_biortho, "metric": suite_metric, "hermitian": suite_hermitian}


def cmd_verify(cfg: RunConfig) -> int:
    z = cfg.options["z"]
    names = list(SUITES) if cfg.options["suite"] == "all" else [cfg.options["suite"]]
    eps_grid = cfg.options["eps_grid"]
    checks: list[Check] = []
    for name in names:
        checks.extend(SUITES[name](z, cfg, eps_grid))
    _emit(cfg, VERIFY_COLUMNS, [ch.row() for ch in checks])
    failed = [ch.name for ch in checks if ch.status == "fail"]
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------
# kernel


def cmd_kernel(cfg: RunConfig) -> int:
    o = cfg.options
    c = spectrum.Coupling(o["z"])
    c.require_positive_real_part()
    xs = o["grid"]
    ys = o["ygrid"] if o["ygrid"] is not None else xs
    m = o["m"]
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    if m == "h2":
        R = c.re
        vals = (R * R / 16 * np.exp(-R * np.abs(Y) / 2)).astype(complex)
    else:
        order = int(m)
        if order > metric.MAX_ORDER or order < 0:
            raise UnsupportedOrderError(f"kernel orders 0..{metric.MAX_ORDER} or h2, got {m}")
        vals = metric.eta_order_kernel(order, c, X, Y, o["variant"])
    rows = [(float(x), float(y), m, float(v.real), float(v.imag))
            for x, y, v in zip(X.ravel(), Y.ravel(), np.asarray(vals).ravel())]
    _emit(cfg, io.KERNEL_COLUMNS, rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep


def _energy_row(sigma, param, ctx, packet, shape, method="closed_form"):
    try:
        e = hermitian.energy_expectation(packet, ctx, method)
    except DeltacError:
        e = hermitian.energy_expectation(packet, ctx, "quadrature")
    if math.isnan(shape):
        shape = e.shape_factor
    return (float(sigma), float(param), ctx.L, float(shape), e.kinetic_plus_width,
            e.real_coupling_term, e.nonhermitian_term, e.total, e.method)


def cmd_sweep(cfg: RunConfig) -> int:
    o = cfg.options
    ctx = hermitian.PhysicalContext.from_length(o["L"], o["eps"], o["mass"], o["hbar"])
    target = o["target"]
    rows = []
    if target == "omega":
        sigmas = o["sigma"] if o["sigma"] is not None else parse_range("0.2:3:0.05")
        for k in o["k"]:
            for s in sigmas:
                rows.append(_energy_row(s, k, ctx, hermitian.GaussianPacket(s, k),
                                        hermitian.omega(s, k, ctx)))
    elif target == "gamma":
        sigmas = o["sigma"] if o["sigma"] is not None else [0.5, 1.0, 2.0, 3.0]
        xm = o["xmean"] if o["xmean"] is not None else parse_range("-4:4:0.1")
        for s in sigmas:
            for a in xm:
                rows.append(_energy_row(s, a, ctx, hermitian.GaussianPacket(s, 0.0, a),
                                        hermitian.gamma_fn(s, a, ctx)))
    else:
        sigmas = o["sigma"] if o["sigma"] is not None else parse_range("0.2:3:0.2")
        a = o["at_xmean"]
        for k in o["k"]:
            for s in sigmas:
                rows.append(_energy_row(s, k, ctx, hermitian.GaussianPacket(s, k, a), float("nan"),
                                        o["method"]))
    _emit(cfg, io.SWEEP_COLUMNS, rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# estimate


def cmd_estimate(cfg: RunConfig) -> int:
    o = cfg.options
    units = SYSTEMS[o["units"]]
    mass = o["mass"] if o["mass"] is not None else units.electron_mass
    rep = hermitian.defect_estimate(o["d"], o["strength"], mass, o["kT"], units, coupling=o["coupling"])
    if cfg.fmt == "json":
        text = json.dumps({k: v for k, v in vars(rep).items()}, indent=1) + "\n"
    else:
        text = "\n".join(rep.lines()) + "\n"
    if cfg.out:
        io.atomic_write(cfg.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--tol", type=float, default=d(None), help="quadrature abs/rel tolerance")
    parser.add_argument("--format", choices=("csv", "json"), default=d("csv"))
    parser.add_argument("--out", default=d(None), help="output file (default stdout)")
    parser.add_argument("--seed", type=int, default=d(DEFAULT_SEED),
                        help=f"seed for randomized checks (default {DEFAULT_SEED})")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="deltac", description=__doc__.splitlines()[0],
                                formatter_class=argparse.RawDescriptionHelpFormatter,
                                epilog="\n".join(__doc__.splitlines()[2:]))
    _globals(p, False)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", help="spectral type of -d^2/dx^2 + z delta(x)")
    s.add_argument("--z", type=parse_complex, required=True)
    s.set_defaults(handler=cmd_classify)

    s = sub.add_parser("verify", help="run invariant suites")
    s.add_argument("--suite", choices=("biortho", "metric", "hermitian", "all"), default="all")
    s.add_argument("--z", type=parse_complex, required=True)
    s.add_argument("--eps-grid", type=parse_list, default=[0.05, 0.1])
    s.set_defaults(handler=cmd_verify)

    s = sub.add_parser("kernel", help="sample eta^(m) or h2 on a grid")
    s.add_argument("--m", required=True, help="order 0..3, or h2 (delta(x) coefficient)")
    s.add_argument("--z", type=parse_complex, required=True)
    s.add_argument("--grid", type=parse_range, required=True, help="lo:hi:step")
    s.add_argument("--ygrid", type=parse_range, default=None)
    s.add_argument("--variant", choices=("consistent", "printed"), default="consistent")
    s.set_defaults(handler=cmd_kernel)

    s = sub.add_parser("sweep", help="Omega / Gamma / energy tables")
    s.add_argument("--target", choices=("omega", "gamma", "energy"), required=True)
    s.add_argument("--sigma", type=lambda t: parse_range(t) if ":" in t else parse_list(t), default=None)
    s.add_argument("--k", type=parse_list, default=[0.0, 1.0, 2.0, 4.0])
    s.add_argument("--xmean", type=lambda t: parse_range(t) if ":" in t else parse_list(t), default=None)
    s.add_argument("--at-xmean", type=float, default=0.0, help="packet centre for --target energy")
    s.add_argument("--method", choices=("closed_form", "quadrature"), default="closed_form")
    s.add_argument("--L", type=float, default=1.0)
    s.add_argument("--eps", type=float, default=0.1, help="Im(zeta)/Re(zeta)")
    s.add_argument("--mass", type=float, default=1.0)
    s.add_argument("--hbar", type=float, default=1.0)
    s.set_defaults(handler=cmd_sweep)

    s = sub.add_parser("estimate", help="point-defect order-of-magnitude report")
    s.add_argument("--d", type=float, default=1.0)
    s.add_argument("--strength", type=float, default=1.0)
    s.add_argument("--mass", type=float, default=None, help="default: electron mass")
    s.add_argument("--kT", type=float, default=0.01)
    s.add_argument("--units", choices=sorted(SYSTEMS), default="eV-angstrom")
    s.add_argument("--coupling", type=float, default=None, help="fix Re(zeta) instead of strength*d")
    s.set_defaults(handler=cmd_estimate)

    for action in sub.choices.values():
        _globals(action, True)
    return p


VALUE_FLAGS = ("--z", "--grid", "--ygrid", "--sigma", "--xmean", "--at-xmean")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--grid -3:3:0.1`` as ``--grid=-3:3:0.1`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in VALUE_FLAGS and nxt is not None and nxt.startswith("-") and not nxt.startswith("--"):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    ns = parser.parse_args(_attach_negative_values(argv))
    cfg = RunConfig.from_args(ns)
    try:
        return ns.handler(cfg)
    except SpectralSingularityError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (DeltacError, ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

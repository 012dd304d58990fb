"""Analytic flux functions and monotone two-point numerical fluxes.

Three built-in conservation laws are supported: Burgers ``f(u) = u^2/2``,
a cubic law ``f(u) = u^3/3`` and linear advection ``f(u) = u``.  All flux
evaluators broadcast over numpy arrays and accept plain floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np


class FluxSpec(Enum):
    BURGERS = "burgers"
    CUBIC = "cubic"
    LINEAR = "linear"


class NumFluxKind(Enum):
    GODUNOV = "godunov"
    RUSANOV = "rusanov"
    LAX_FRIEDRICHS = "lax_friedrichs"
    ENGQUIST_OSHER = "engquist_osher"
    UPWIND = "upwind"


@dataclass(frozen=True)
class NumericalFluxSpec:
    """Choice of two-point numerical flux.

    ``lam`` is the mesh ratio dt/dx and is consumed only by the
    Lax-Friedrichs flux.  Leave it ``None`` to have the solver fill in the
    ratio of the actual run; standalone evaluation then requires an explicit
    value.
    """

    kind: NumFluxKind
    lam: Optional[float] = None


def _ret(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def flux_value(spec: FluxSpec, u):
    u = np.asarray(u, dtype=float)
    if spec is FluxSpec.BURGERS:
        return _ret(0.5 * u * u)
    if spec is FluxSpec.CUBIC:
        return _ret(u * u * u / 3.0)
    return _ret(u)


def flux_deriv(spec: FluxSpec, u):
    u = np.asarray(u, dtype=float)
    if spec is FluxSpec.BURGERS:
        return _ret(u)
    if spec is FluxSpec.CUBIC:
        return _ret(u * u)
    return _ret(np.ones_like(u))


def max_wave_speed(spec: FluxSpec, u_min: float, u_max: float) -> float:
    """Largest |f'| over the state interval ``[u_min, u_max]``, closed form."""
    if u_min > u_max:
        raise ValueError(f"u_min={u_min} exceeds u_max={u_max}")
    if spec is FluxSpec.BURGERS:
        return max(abs(u_min), abs(u_max))
    if spec is FluxSpec.CUBIC:
        return max(u_min * u_min, u_max * u_max)
    return 1.0


def godunov_flux(spec: FluxSpec, a, b):
    """Exact-Riemann (Godunov) flux.

    min of f over [a, b] when a <= b, max of f over [b, a] otherwise; the only
    interior extremum candidate for the built-in fluxes is u = 0.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    fa = flux_value(spec, a)
    fb = flux_value(spec, b)
    fmin = np.minimum(fa, fb)
    fmax = np.maximum(fa, fb)
    if spec is not FluxSpec.LINEAR:
        # f'(0) = 0 for Burgers and cubic; f(0) = 0 for both
        inside = (np.minimum(a, b) <= 0.0) & (np.maximum(a, b) >= 0.0)
        fmin = np.where(inside, np.minimum(fmin, 0.0), fmin)
        fmax = np.where(inside, np.maximum(fmax, 0.0), fmax)
    return _ret(np.where(a <= b, fmin, fmax))


def rusanov_flux(spec: FluxSpec, a, b):
    """Local Lax-Friedrichs flux with endpoint wave-speed estimate."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    s = np.maximum(np.abs(flux_deriv(spec, a)), np.abs(flux_deriv(spec, b)))
    return _ret(0.5 * (flux_value(spec, a) + flux_value(spec, b)) - 0.5 * s * (b - a))


def lax_friedrichs_flux(spec: FluxSpec, a, b, lam: float):
    """Classical Lax-Friedrichs flux; ``lam`` is the mesh ratio dt/dx."""
    if lam is None or lam <= 0:
        raise ValueError(f"lam must be positive, got {lam}")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return _ret(
        0.5 * (flux_value(spec, a) + flux_value(spec, b)) - (b - a) / (2.0 * lam)
    )


def engquist_osher_flux(spec: FluxSpec, a, b):
    """Engquist-Osher flux: split f' into positive and negative parts,
    integrate each from 0, and upwind the pieces."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if spec is FluxSpec.BURGERS:
        return _ret(0.5 * np.maximum(a, 0.0) ** 2 + 0.5 * np.minimum(b, 0.0) ** 2)
    if spec is FluxSpec.CUBIC:
        # f' = u^2 >= 0: the negative part vanishes and the flux is pure upwind
        return flux_value(spec, a)
    return _ret(a + 0.0 * b)


def upwind_flux(spec: FluxSpec, a, b):
    """Upwind flux for the linear law (unit rightward wave speed)."""
    if spec is not FluxSpec.LINEAR:
        raise ValueError(f"upwind flux is defined only for the linear law, got {spec}")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return _ret(a + 0.0 * b)


def numerical_flux(numflux: NumericalFluxSpec, spec: FluxSpec, a, b):
    """Evaluate the chosen numerical flux F(a, b)."""
    if numflux.kind is NumFluxKind.GODUNOV:
        return godunov_flux(spec, a, b)
    if numflux.kind is NumFluxKind.RUSANOV:
        return rusanov_flux(spec, a, b)
    if numflux.kind is NumFluxKind.LAX_FRIEDRICHS:
        return lax_friedrichs_flux(spec, a, b, numflux.lam)
    if numflux.kind is NumFluxKind.ENGQUIST_OSHER:
        return engquist_osher_flux(spec, a, b)
    return upwind_flux(spec, a, b)


@dataclass(frozen=True)
class MonotoneReport:
    """Result of a finite-difference monotonicity probe."""

    passed: bool
    worst_violation: float
    argument: Optional[str] = None  # "first" or "second"
    at: Optional[Tuple[float, float]] = None


def check_monotone(
    numflux: NumericalFluxSpec,
    spec: FluxSpec,
    box: Tuple[float, float] = (-1.0, 1.0),
    samples_per_axis: int = 64,
    tol: float = 1e-10,
) -> MonotoneReport:
    """Probe F for monotonicity (nondecreasing in a, nonincreasing in b).

    Samples the box on a regular lattice with spacing
    ``delta = width / samples_per_axis`` and compares F at neighbouring
    lattice points.  Violations beyond ``tol`` fail the probe; the report
    carries the worst one.
    """
    if samples_per_axis < 2:
        raise ValueError(f"samples_per_axis must be >= 2, got {samples_per_axis}")
    lo, hi = box
    if not lo < hi:
        raise ValueError(f"box must satisfy lo < hi, got {box}")
    delta = (hi - lo) / samples_per_axis
    base = lo + delta * np.arange(samples_per_axis)
    aa, bb = np.meshgrid(base, base, indexing="ij")
    f0 = numerical_flux(numflux, spec, aa, bb)
    inc_a = numerical_flux(numflux, spec, aa + delta, bb) - f0
    inc_b = numerical_flux(numflux, spec, aa, bb + delta) - f0

    worst = 0.0
    argument = None
    at = None
    drop = -inc_a  # positive where F decreased in its first argument
    if drop.max() > worst:
        i, j = np.unravel_index(int(np.argmax(drop)), drop.shape)
        worst, argument, at = float(drop[i, j]), "first", (float(aa[i, j]), float(bb[i, j]))
    rise = inc_b  # positive where F increased in its second argument
    if rise.max() > worst:
        i, j = np.unravel_index(int(np.argmax(rise)), rise.shape)
        worst, argument, at = float(rise[i, j]), "second", (float(aa[i, j]), float(bb[i, j]))
    return MonotoneReport(passed=worst <= tol, worst_violation=worst, argument=argument, at=at)

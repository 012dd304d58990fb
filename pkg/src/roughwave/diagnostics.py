"""Measurement functionals: total variation, one-sided Lipschitz seminorm,
L1 distances, time-integrated TV, a-priori error bounds and rate fits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence, Tuple

import numpy as np

from .flux import FluxSpec, NumFluxKind
from .mesh import CellField, restrict

if TYPE_CHECKING:  # pragma: no cover
    from .solver import Trajectory


def total_variation(field: CellField, periodic: bool = False) -> float:
    """Sum of |v_{i+1} - v_i| over interior neighbours.

    With ``periodic=True`` the wrap-around jump |v_0 - v_{n-1}| is included.
    """
    v = field.values
    tv = float(np.sum(np.abs(np.diff(v))))
    if periodic and v.size > 1:
        tv += abs(float(v[0]) - float(v[-1]))
    return tv


def lip_plus(field: CellField, periodic: bool = False) -> float:
    """Largest forward difference quotient max_i (v_{i+1} - v_i)/dx.

    Signed: nonincreasing data gives a value <= 0.  With ``periodic=True``
    the wrap-around pair (v_0 - v_{n-1})/dx joins the sup, which is the
    right seminorm for periodically extended data.
    """
    v = field.values
    if v.size < 2:
        raise ValueError("lip_plus needs at least 2 cells")
    top = float(np.max(np.diff(v)))
    if periodic:
        top = max(top, float(v[0]) - float(v[-1]))
    return top / field.grid.dx


def l1_distance(a: CellField, b: CellField) -> float:
    """L1 norm of a - b after averaging b down onto a's grid.

    ``b`` must live on the same domain with a cell count divisible by a's.
    """
    if (a.grid.x_left, a.grid.x_right) != (b.grid.x_left, b.grid.x_right):
        raise ValueError("fields live on different domains")
    if b.grid.n_cells % a.grid.n_cells != 0:
        raise ValueError(
            f"cannot compare: {b.grid.n_cells} cells not divisible by {a.grid.n_cells}"
        )
    bb = restrict(b, b.grid.n_cells // a.grid.n_cells)
    return float(a.grid.dx * np.sum(np.abs(a.values - bb.values)))


def tv_time_integral(traj: "Trajectory") -> float:
    """Time-integrated total variation sum_n TV(v(t^n)) * dt.

    Every recorded time point is weighted by the nominal step, except the
    last one which is weighted by the actual (possibly shortened) final step.
    """
    times = np.asarray(traj.times, dtype=float)
    if times.size < 2:
        return 0.0
    weights = np.full(times.size, traj.dt_used)
    weights[-1] = times[-1] - times[-2]
    return float(np.dot(np.asarray(traj.per_step_tv, dtype=float), weights))


@dataclass(frozen=True)
class BoundInputs:
    """Ingredients of the a-priori error and TV-integral bounds.

    beta        one-step decay rate of the one-sided Lipschitz seminorm
    lip_plus_0  Lip+ seminorm of the initial data (1/time units)
    dt, t_n     time step and final time of the run
    m_support   half-width bound on the support of the data
    c_flux      local Lipschitz constant of the numerical flux
    lip_f       Lipschitz constant of f on the data range
    tv0         total variation of the initial data
    eps, eps0   space and time mollification widths
    dx          mesh width
    c_kernel    smoothing-kernel constant (unknown in general; default 1)
    """

    beta: float
    lip_plus_0: float = 0.0
    dt: float = 0.0
    t_n: float = 0.0
    m_support: float = 0.5
    c_flux: float = 0.0
    lip_f: float = 0.0
    tv0: float = 0.0
    eps: float = 1.0
    eps0: float = 1.0
    dx: float = 0.0
    c_kernel: float = 1.0

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.beta <= 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        if self.eps <= 0 or self.eps0 <= 0:
            raise ValueError(f"eps and eps0 must be > 0, got {self.eps}, {self.eps0}")


def default_beta(spec: FluxSpec, kind: NumFluxKind) -> float:
    """Established decay rate for the one-sided Lipschitz seminorm.

    Only the Godunov flux on Burgers has a published value (1/2 * 1/4);
    every other pairing must supply beta explicitly.
    """
    if spec is FluxSpec.BURGERS and kind is NumFluxKind.GODUNOV:
        return 0.125
    raise ValueError(
        f"no default decay rate for {spec.value} + {kind.value}; pass beta explicitly"
    )


def lip_bound_rhs(b: BoundInputs) -> float:
    """Upper bound 2M (L0 dt + (1/beta) log(1 + beta t L0)) on the
    time-integrated TV, where L0 is the initial Lip+ seminorm."""
    if b.lip_plus_0 <= 0:
        raise ValueError(
            f"bound requires a positive initial Lip+ seminorm, got {b.lip_plus_0}"
        )
    return 2.0 * b.m_support * (
        b.lip_plus_0 * b.dt + math.log1p(b.beta * b.t_n * b.lip_plus_0) / b.beta
    )


def sharpness_ratio(traj: "Trajectory", b: BoundInputs) -> float:
    """Bound divided by the measured time-integrated TV (>= 1 if the bound holds)."""
    denom = tv_time_integral(traj)
    if denom <= 0:
        raise ValueError("time-integrated total variation is zero")
    return lip_bound_rhs(b) / denom


def kuznetsov_bound(b: BoundInputs, tv_integral: float, l1_init_err: float) -> float:
    """Mollification-based L1 error bound at the final time.

    2 ||u0 - v0||_1 + TV(v0) (2 eps + eps0 Lf + 2 CF max(eps0, dt))
    + C (CF dx / eps + Lf dt / eps0) * integral of TV over time.
    """
    return (
        2.0 * l1_init_err
        + b.tv0 * (2.0 * b.eps + b.eps0 * b.lip_f + 2.0 * b.c_flux * max(b.eps0, b.dt))
        + b.c_kernel * (b.c_flux * b.dx / b.eps + b.lip_f * b.dt / b.eps0) * tv_integral
    )


def fit_rate(points: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """Least-squares slope and intercept of log e against log h.

    The slope is the empirical convergence (or blow-up) rate of e ~ h^slope.
    """
    if len(points) < 2:
        raise ValueError("need at least 2 points to fit a rate")
    h = np.array([p[0] for p in points], dtype=float)
    e = np.array([p[1] for p in points], dtype=float)
    if np.any(h <= 0) or np.any(e <= 0):
        raise ValueError("rate fits need strictly positive h and e")
    if np.unique(h).size < 2:
        raise ValueError("rate fits need at least two distinct h values")
    slope, intercept = np.polyfit(np.log(h), np.log(e), 1)
    return float(slope), float(intercept)

"""Uniform 1D grids, cell-average projection and fine-to-coarse restriction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform partition of ``[x_left, x_right)`` into ``n_cells`` equal cells.

    Cell ``i`` (0-based) covers ``[x_left + i*dx, x_left + (i+1)*dx)`` and has
    midpoint ``x_left + (i + 1/2)*dx``.  Grids are value objects: equality is
    structural on ``(x_left, x_right, n_cells)``.
    """

    x_left: float
    x_right: float
    n_cells: int

    def __post_init__(self):
        if not self.x_left < self.x_right:
            raise ValueError(
                f"need x_left < x_right, got [{self.x_left}, {self.x_right}]"
            )
        if self.n_cells < 1:
            raise ValueError(f"n_cells must be >= 1, got {self.n_cells}")

    @property
    def dx(self) -> float:
        return (self.x_right - self.x_left) / self.n_cells

    def cell_midpoints(self) -> np.ndarray:
        return self.x_left + (np.arange(self.n_cells) + 0.5) * self.dx

    def cell_edges(self) -> np.ndarray:
        return self.x_left + np.arange(self.n_cells + 1) * self.dx


@dataclass(frozen=True)
class CellField:
    """Piecewise-constant state: one finite real value per grid cell.

    The value array is copied and frozen on construction; fields are safe to
    share between parallel workers.
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.n_cells,):
            raise ValueError(
                f"values must have shape ({self.grid.n_cells},), got {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            bad = int(np.argmin(np.isfinite(v)))
            raise ValueError(f"non-finite value in cell {bad}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def make_grid(x_left: float, x_right: float, n_cells: int) -> Grid:
    """Build a uniform grid on ``[x_left, x_right]`` with ``n_cells`` cells."""
    return Grid(float(x_left), float(x_right), int(n_cells))


def project(
    f: Callable[[np.ndarray], np.ndarray],
    grid: Grid,
    quadrature_points_per_cell: int = 8,
) -> CellField:
    """Cell averages of ``f`` by the composite midpoint rule.

    Each cell is split into ``quadrature_points_per_cell`` sub-intervals and
    ``f`` is averaged over their midpoints.  Exact for functions that are
    constant on each cell; second-order accurate otherwise.  ``f`` may be
    vectorized over numpy arrays or a plain scalar function.
    """
    q = int(quadrature_points_per_cell)
    if q < 1:
        raise ValueError(f"quadrature_points_per_cell must be >= 1, got {q}")
    n = grid.n_cells
    sub = grid.dx / q
    pts = grid.x_left + (np.arange(n * q) + 0.5) * sub
    vals = _evaluate(f, pts)
    finite = np.isfinite(vals)
    if not finite.all():
        cell = int(np.argmin(finite)) // q
        raise ValueError(f"f evaluated to a non-finite value in cell {cell}")
    return CellField(grid, vals.reshape(n, q).mean(axis=1))


def _evaluate(f, pts):
    try:
        vals = np.asarray(f(pts), dtype=float)
        if vals.shape != pts.shape:
            raise TypeError
        return vals
    except (TypeError, ValueError):
        # scalar-only callable
        return np.array([float(f(p)) for p in pts])


def restrict(fine: CellField, factor: int) -> CellField:
    """Aggregate ``factor`` consecutive fine cells into one coarse cell mean."""
    factor = int(factor)
    if factor < 1:
        raise ValueError(f"factor must be >= 1, got {factor}")
    n = fine.grid.n_cells
    if n % factor != 0:
        raise ValueError(f"n_cells={n} not divisible by factor={factor}")
    coarse_grid = Grid(fine.grid.x_left, fine.grid.x_right, n // factor)
    return CellField(coarse_grid, fine.values.reshape(-1, factor).mean(axis=1))

"""Seeded random initial data: fractional Brownian motion by recursive
midpoint displacement, plus a deterministic Hölder test profile.

The random number generator is pinned to an exact bit recipe (splitmix64
for the integer stream, Box-Muller for normals) so that every experiment is
reproducible from its seed alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mesh import CellField, Grid

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MASK64 = 0xFFFFFFFFFFFFFFFF
_U53_SCALE = 2.0**-53

# 2^26 + 1 path points is ~0.5 GB of float64; refuse anything deeper
MAX_LEVEL = 26


class SplitMix64:
    """splitmix64 stream with Box-Muller standard normals.

    The integer recipe: state += 0x9E3779B97F4A7C15 (mod 2^64), then mix
    z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
    z *= 0x94D049BB133111EB; z ^= z >> 31.

    Normals consume two uniforms u1, u2 = (u64 >> 11) * 2^-53 mapped onto
    (0, 1] (a zero draw becomes 2^-53) and yield the cosine branch first;
    the sine partner is cached for the next draw.  Block draws produce the
    identical stream as repeated single draws.
    """

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK64
        self._spare_normal: float | None = None

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def _u64_block(self, count: int) -> np.ndarray:
        steps = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(self.state) + steps * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
        self.state = (self.state + count * GOLDEN_GAMMA) & _MASK64
        return z

    def uniform(self) -> float:
        """One uniform draw in (0, 1]."""
        u = (self.next_u64() >> 11) * _U53_SCALE
        return u if u > 0.0 else _U53_SCALE

    def normal(self) -> float:
        """One standard normal draw."""
        return float(self.normals(1)[0])

    def normals(self, count: int) -> np.ndarray:
        """``count`` standard normal draws as an array."""
        count = int(count)
        if count < 0:
            raise ValueError(f"count must be >= 0, got {count}")
        out = np.empty(count)
        k = 0
        if self._spare_normal is not None and count > 0:
            out[0] = self._spare_normal
            self._spare_normal = None
            k = 1
        need = count - k
        if need <= 0:
            return out
        pairs = (need + 1) // 2
        u = (self._u64_block(2 * pairs) >> np.uint64(11)).astype(np.float64)
        u *= _U53_SCALE
        u[u == 0.0] = _U53_SCALE
        r = np.sqrt(-2.0 * np.log(u[0::2]))
        ang = (2.0 * np.pi) * u[1::2]
        woven = np.empty(2 * pairs)
        woven[0::2] = r * np.cos(ang)
        woven[1::2] = r * np.sin(ang)
        out[k:] = woven[:need]
        if need % 2 == 1:
            self._spare_normal = float(woven[need])
        return out


def sample_seed(base_seed: int, index: int) -> int:
    """Derived per-sample seed: base XOR (i+1) times the golden-ratio gamma."""
    return (int(base_seed) ^ ((GOLDEN_GAMMA * (int(index) + 1)) & _MASK64)) & _MASK64


@dataclass(frozen=True)
class FbmPath:
    """Fractional-Brownian-motion values on the dyadic grid j * 2^-level.

    ``points`` has length 2^level + 1 and is pinned to 0 at the left end.
    """

    hurst: float
    level: int
    points: np.ndarray

    def __post_init__(self):
        p = np.array(self.points, dtype=float)
        if p.shape != ((1 << self.level) + 1,):
            raise ValueError(
                f"points must have length 2^{self.level}+1, got {p.shape}"
            )
        if p[0] != 0.0:
            raise ValueError("left endpoint must be pinned to 0")
        p.setflags(write=False)
        object.__setattr__(self, "points", p)


def midpoint_scale(hurst: float, level: int) -> float:
    """Std dev of the displacement added when bisecting at the given level."""
    return math.sqrt((1.0 - 2.0 ** (2.0 * hurst - 2.0)) / 2.0 ** (2.0 * level * hurst))


def fbm_midpoint(hurst: float, level_k: int, rng: SplitMix64) -> FbmPath:
    """Fractional Brownian motion by recursive midpoint displacement.

    The left endpoint is 0 and the right endpoint is a standard normal draw.
    Then, level by level (coarse to fine, left to right within a level), each
    interval is bisected and the midpoint set to the neighbour average plus a
    fresh Gaussian scaled by ``midpoint_scale(hurst, level)``.  The traversal
    order is fixed, so a path is a pure function of (hurst, level, seed).
    """
    if not 0.0 < hurst < 1.0:
        raise ValueError(f"hurst must lie in (0, 1), got {hurst}")
    if not 1 <= level_k <= MAX_LEVEL:
        raise ValueError(f"level must lie in [1, {MAX_LEVEL}], got {level_k}")
    n = 1 << level_k
    pts = np.zeros(n + 1)
    pts[n] = rng.normals(1)[0]
    for level in range(level_k):
        stride = n >> level
        half = stride >> 1
        noise = rng.normals(1 << level)
        left = pts[0:n:stride]
        right = pts[stride : n + 1 : stride]
        pts[half::stride] = 0.5 * (left + right) + midpoint_scale(hurst, level) * noise
    return FbmPath(hurst=hurst, level=level_k, points=pts)


def normalize_to_unit(path: FbmPath) -> FbmPath:
    """Rescale so the largest |value| is 1; the zero path is left alone."""
    peak = float(np.max(np.abs(path.points)))
    if peak == 0.0:
        return path
    return FbmPath(path.hurst, path.level, path.points / peak)


def fbm_initial_field(hurst: float, grid: Grid, seed: int) -> CellField:
    """Normalized fBm sample as cell data on a power-of-two grid over [0, 1].

    Cell i takes the path value at its left edge i * 2^-k; the final path
    point is dropped.
    """
    n = grid.n_cells
    if n < 2 or n & (n - 1) != 0:
        raise ValueError(f"n_cells must be a power of two >= 2, got {n}")
    if grid.x_left != 0.0 or grid.x_right != 1.0:
        raise ValueError(f"fBm fields live on [0, 1], got [{grid.x_left}, {grid.x_right}]")
    level = n.bit_length() - 1
    path = normalize_to_unit(fbm_midpoint(hurst, level, SplitMix64(seed)))
    return CellField(grid, path.points[:-1])


def holder_cap(alpha: float, x):
    """Deterministic C^alpha test profile on [0, 1].

    max(0, (1/4)^alpha - |x - 1/2|^alpha): a cap supported on (1/4, 3/4)
    whose only roughness is the kink at x = 1/2.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    x = np.asarray(x, dtype=float)
    out = np.maximum(0.0, 0.25**alpha - np.abs(x - 0.5) ** alpha)
    return float(out) if out.ndim == 0 else out

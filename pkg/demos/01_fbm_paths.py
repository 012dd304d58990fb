"""Seeded fractional Brownian motion by recursive midpoint displacement.

Generates paths for a few Hurst exponents from one base seed, shows how the
increment size tracks the roughness parameter, and demonstrates that every
path is a pure function of its seed.
"""

import numpy as np

from roughwave import SplitMix64, fbm_midpoint, midpoint_scale, normalize_to_unit

LEVEL = 10  # 2^10 + 1 points on [0, 1]
SEED = 2024

print(f"midpoint-displacement paths at level {LEVEL} ({(1 << LEVEL) + 1} points)")
print()
print("H     end value   max |u|   mean |increment|   rms increment")
for hurst in (0.125, 0.25, 0.5, 0.75):
    path = fbm_midpoint(hurst, LEVEL, SplitMix64(SEED))
    inc = np.diff(path.points)
    print(
        f"{hurst:<5} {path.points[-1]:+9.4f} {np.max(np.abs(path.points)):9.4f}"
        f" {np.mean(np.abs(inc)):17.6f} {np.sqrt(np.mean(inc**2)):15.6f}"
    )

print()
print("displacement scale per bisection level (H = 0.5):")
for level in range(6):
    print(f"  level {level}: {midpoint_scale(0.5, level):.6f}")

print()
a = fbm_midpoint(0.5, LEVEL, SplitMix64(SEED))
b = fbm_midpoint(0.5, LEVEL, SplitMix64(SEED))
print("same seed twice gives identical paths:", np.array_equal(a.points, b.points))

unit = normalize_to_unit(a)
print(f"normalized peak value: {np.max(np.abs(unit.points)):.1f} (pinned to 1)")

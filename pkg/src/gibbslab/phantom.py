"""Analytic 3D head phantom: piecewise-constant sums of ellipsoids.

The embedded parameter set is the classic ten-ellipsoid head phantom in
its Kak-Slaney variant (z-rotations only).  Values at a point are the
sum of the additive intensities of every ellipsoid containing it, with
the boundary surface counting as inside.  Because the function is known
in closed form, coarse samplings are computed analytically rather than
by decimating a finer raster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SuspiciousInputError
from .grid import Grid3, LabelVolume, ScalarVolume

Vec3 = tuple[float, float, float]


@dataclass(frozen=True)
class Ellipsoid:
    """An ellipsoid rotated about the z-axis, with additive intensity."""

    center: Vec3
    semi_axes: Vec3
    angle_z: float  # radians
    intensity: float

    def __post_init__(self) -> None:
        if any(not s > 0 for s in self.semi_axes):
            raise ValueError(f"semi-axes must be positive, got {self.semi_axes}")


@dataclass(frozen=True)
class PhantomSpec:
    ellipsoids: tuple[Ellipsoid, ...]

    def __post_init__(self) -> None:
        if not self.ellipsoids:
            raise ValueError("phantom needs at least one ellipsoid")


def _e(rho, a, b, c, x0, y0, z0, phi_deg) -> Ellipsoid:
    return Ellipsoid(
        center=(x0, y0, z0),
        semi_axes=(a, b, c),
        angle_z=math.radians(phi_deg),
        intensity=rho,
    )


# Columns: intensity, semi-axes (a, b, c), center (x0, y0, z0), z-rotation (deg).
SHEPP_LOGAN = PhantomSpec(
    (
        _e(2.00, 0.6900, 0.920, 0.900, 0.00, 0.000, 0.000, 0.0),
        _e(-0.98, 0.6624, 0.874, 0.880, 0.00, 0.000, 0.000, 0.0),
        _e(-0.02, 0.4100, 0.160, 0.210, -0.22, 0.000, -0.250, 108.0),
        _e(-0.02, 0.3100, 0.110, 0.220, 0.22, 0.000, -0.250, 72.0),
        _e(0.02, 0.2100, 0.250, 0.500, 0.00, 0.350, -0.250, 0.0),
        _e(0.02, 0.0460, 0.046, 0.046, 0.00, 0.100, -0.250, 0.0),
        _e(0.01, 0.0460, 0.023, 0.020, -0.08, -0.650, -0.250, 0.0),
        _e(0.01, 0.0460, 0.023, 0.020, 0.06, -0.650, -0.250, 90.0),
        _e(0.02, 0.0560, 0.040, 0.100, 0.06, -0.105, 0.625, 90.0),
        _e(-0.02, 0.0560, 0.056, 0.100, 0.00, 0.100, 0.625, 0.0),
    )
)


def _values_at(
    spec: PhantomSpec, x: np.ndarray, y: np.ndarray, z: np.ndarray
) -> np.ndarray:
    out = np.zeros(np.broadcast(x, y, z).shape)
    for e in spec.ellipsoids:
        dx = x - e.center[0]
        dy = y - e.center[1]
        dz = z - e.center[2]
        cos_p = math.cos(e.angle_z)
        sin_p = math.sin(e.angle_z)
        # Rotate the offset into the ellipsoid's canonical frame.
        ux = dx * cos_p + dy * sin_p
        uy = -dx * sin_p + dy * cos_p
        sa, sb, sc = e.semi_axes
        inside = (ux / sa) ** 2 + (uy / sb) ** 2 + (dz / sc) ** 2 <= 1.0
        out += np.where(inside, e.intensity, 0.0)
    return out


def phantom_value(spec: PhantomSpec, point) -> float:
    """Sum of intensities of the ellipsoids containing ``point``."""
    x, y, z = (float(c) for c in point)
    return float(_values_at(spec, np.asarray(x), np.asarray(y), np.asarray(z)))


def sample_phantom(spec: PhantomSpec, grid: Grid3) -> ScalarVolume:
    """Evaluate the phantom analytically at every grid node."""
    x, y, z = grid.meshgrid()
    return ScalarVolume(grid, _values_at(spec, x, y, z))


def segment_phantom(
    volume: ScalarVolume, tol: float = 1e-9, max_levels: int = 64
) -> LabelVolume:
    """Group voxels by intensity level into a label volume.

    Labels follow ascending intensity; the zero-intensity group (when
    present) is forced to label 0 so it stays the background.
    """
    flat = volume.values.ravel()
    uniques = np.unique(flat)
    reps: list[float] = []
    for v in uniques:
        if not reps or v - reps[-1] > tol:
            reps.append(float(v))
    if len(reps) > max_levels:
        raise SuspiciousInputError(
            f"{len(reps)} intensity levels (> {max_levels}); not piecewise constant?"
        )
    reps_arr = np.asarray(reps)
    edges = (reps_arr[1:] + reps_arr[:-1]) / 2.0
    codes = np.digitize(volume.values, edges)
    zero_idx = np.nonzero(np.abs(reps_arr) <= tol)[0]
    if zero_idx.size and zero_idx[0] != 0:
        z = int(zero_idx[0])
        order = [z] + [i for i in range(len(reps)) if i != z]
        lut = np.empty(len(reps), dtype=np.int64)
        for new, old in enumerate(order):
            lut[old] = new
        codes = lut[codes]
    return LabelVolume(volume.grid, codes, n_labels=len(reps))

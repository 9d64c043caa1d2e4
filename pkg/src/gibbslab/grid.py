"""Domain types for vertex-centered regular 3D grids and raster volumes.

Conventions fixed here and relied on everywhere else:

* Grids are vertex-centered: the first and last node of every axis lie
  exactly on the FOV boundary, so ``x_i = a + (b - a) * i / (n - 1)``
  for 0-based ``i``.
* Linearization is i-fastest (axis 0 varies fastest, then j, then k);
  any flattening that leaves the package uses Fortran order.
* Intensities are float64 in memory (files store float32).

All types are immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidFovError, InvalidGridError

Interval = tuple[float, float]


@dataclass(frozen=True)
class Fov:
    """Rectangular field of view: three closed intervals, physical units."""

    bounds: tuple[Interval, Interval, Interval]

    def __post_init__(self) -> None:
        if len(self.bounds) != 3:
            raise InvalidFovError(f"need 3 intervals, got {len(self.bounds)}")
        clean = []
        for lo, hi in self.bounds:
            lo, hi = float(lo), float(hi)
            if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
                raise InvalidFovError(f"degenerate interval [{lo}, {hi}]")
            clean.append((lo, hi))
        object.__setattr__(self, "bounds", tuple(clean))

    @classmethod
    def cube(cls, lo: float, hi: float) -> "Fov":
        return cls(((lo, hi), (lo, hi), (lo, hi)))

    def extent(self, axis: int) -> float:
        lo, hi = self.bounds[axis]
        return hi - lo


UNIT_FOV = Fov.cube(0.0, 1.0)


@dataclass(frozen=True)
class Grid3:
    """Regular equispaced lattice of ``counts`` nodes spanning ``fov``."""

    fov: Fov
    counts: tuple[int, int, int]

    def __post_init__(self) -> None:
        if len(self.counts) != 3:
            raise InvalidGridError(f"need 3 counts, got {len(self.counts)}")
        counts = tuple(int(n) for n in self.counts)
        if any(n < 2 for n in counts):
            raise InvalidGridError(f"counts must be >= 2 per axis, got {counts}")
        object.__setattr__(self, "counts", counts)

    @property
    def spacing(self) -> tuple[float, float, float]:
        return tuple(
            self.fov.extent(d) / (self.counts[d] - 1) for d in range(3)
        )

    @property
    def n_nodes(self) -> int:
        i, j, k = self.counts
        return i * j * k

    def axis_coords(self, axis: int) -> np.ndarray:
        """Node coordinates along one axis (ascending, endpoints exact)."""
        lo, hi = self.fov.bounds[axis]
        return np.linspace(lo, hi, self.counts[axis])

    def node(self, i: int, j: int, k: int) -> tuple[float, float, float]:
        """Physical coordinates of node (i, j, k), 0-based."""
        return tuple(
            float(self.axis_coords(d)[idx]) for d, idx in enumerate((i, j, k))
        )

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return np.meshgrid(
            self.axis_coords(0),
            self.axis_coords(1),
            self.axis_coords(2),
            indexing="ij",
        )


def make_grid(fov: Fov, counts: tuple[int, int, int]) -> Grid3:
    """Build a vertex-centered grid; counts must be >= 2 per axis."""
    return Grid3(fov, counts)


def coarse_grid(grid: Grid3, factor: int) -> Grid3:
    """Shrink node counts by integer division, keeping the FOV bit-exact."""
    factor = int(factor)
    if factor < 1:
        raise InvalidGridError(f"factor must be >= 1, got {factor}")
    counts = tuple(n // factor for n in grid.counts)
    if any(n < 2 for n in counts):
        raise InvalidGridError(
            f"counts {grid.counts} with factor {factor} leave fewer than 2 nodes"
        )
    return Grid3(grid.fov, counts)


def _lock(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ScalarVolume:
    """A grid plus real intensities, stored as float64 of shape ``counts``."""

    grid: Grid3
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.grid.counts:
            raise InvalidGridError(
                f"values shape {values.shape} != grid counts {self.grid.counts}"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidGridError("intensities must all be finite")
        object.__setattr__(self, "values", _lock(values.copy()))

    @property
    def data_range(self) -> float:
        return float(self.values.max() - self.values.min())


@dataclass(frozen=True)
class LabelVolume:
    """A grid plus integer VOI labels; label 0 is the background.

    ``n_labels`` counts label slots 0..n_labels-1.  Freshly segmented
    volumes use every slot; resampled ones may leave a slot empty when
    undersampling annihilates a small VOI.
    """

    grid: Grid3
    labels: np.ndarray
    n_labels: int = 0

    def __post_init__(self) -> None:
        labels = np.asarray(self.labels)
        if not np.issubdtype(labels.dtype, np.integer):
            raise InvalidGridError(f"labels must be integers, got {labels.dtype}")
        labels = labels.astype(np.int64)
        if labels.shape != self.grid.counts:
            raise InvalidGridError(
                f"labels shape {labels.shape} != grid counts {self.grid.counts}"
            )
        if labels.min() < 0:
            raise InvalidGridError("labels must be non-negative")
        top = int(labels.max())
        n_labels = self.n_labels if self.n_labels else top + 1
        if n_labels <= top:
            raise InvalidGridError(
                f"n_labels={n_labels} but labels reach {top}"
            )
        object.__setattr__(self, "labels", _lock(labels))
        object.__setattr__(self, "n_labels", int(n_labels))

    def mask_of(self, label: int) -> np.ndarray:
        return self.labels == label

"""VOI statistics, error norms, similarity and gradient localization.

The SSIM here is the single-window global form: one mean, one standard
deviation (population) and one covariance per value list.  Restrictions
of a volume to a mask are unordered value lists, so sliding windows are
not meaningful for them; library defaults differ.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.ndimage import correlate1d

from .errors import EmptyVoiError, GridMismatchError
from .grid import LabelVolume, ScalarVolume
from .morphology import BoolMask, volume as mask_volume

MomentIndex = tuple[int, int, int]


@dataclass(frozen=True)
class VoiMeans:
    """Per-VOI mean intensities, ordered by label id."""

    values: np.ndarray
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size != len(self.labels):
            raise ValueError("values and labels must align")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size


def _as_vector(v) -> np.ndarray:
    if isinstance(v, VoiMeans):
        return v.values
    return np.asarray(v, dtype=np.float64)


def restrict(volume: ScalarVolume, mask: BoolMask) -> np.ndarray:
    """Values of the volume at true voxels, in i-fastest order."""
    if volume.values.shape != mask.dims:
        raise GridMismatchError(
            f"volume dims {volume.values.shape} != mask dims {mask.dims}"
        )
    flat_vals = volume.values.ravel(order="F")
    flat_mask = mask.bits.ravel(order="F")
    return flat_vals[flat_mask]


def moment(volume: ScalarVolume, mask: BoolMask, index: MomentIndex) -> float:
    """Discrete moment of the volume over a mask, physical coordinates.

    Computes ``mean of x^n1 * y^n2 * z^n3 * F`` over the true voxels.
    """
    if volume.values.shape != mask.dims:
        raise GridMismatchError("volume and mask dims differ")
    if any(int(n) < 0 for n in index):
        raise ValueError(f"multi-index must be non-negative, got {index}")
    count = mask_volume(mask)
    if count == 0:
        raise EmptyVoiError("moment over an empty VOI")
    vals = volume.values[mask.bits]
    if any(int(n) > 0 for n in index):
        where = np.nonzero(mask.bits)
        prod = np.ones_like(vals)
        for axis, power in enumerate(index):
            power = int(power)
            if power:
                prod *= volume.grid.axis_coords(axis)[where[axis]] ** power
        vals = vals * prod
    return float(vals.sum() / count)


def voi_means(
    volume: ScalarVolume,
    labels: LabelVolume,
    include_background: bool = True,
    allow_empty: bool = False,
) -> VoiMeans:
    """Mean intensity per label; requires both images on the same grid.

    With ``allow_empty`` an annihilated VOI yields NaN instead of raising.
    """
    if volume.grid != labels.grid:
        raise GridMismatchError(
            "mean per VOI needs the image and the segmentation on one grid"
        )
    ids = range(0 if include_background else 1, labels.n_labels)
    flat_labels = labels.labels.ravel()
    flat_vals = volume.values.ravel()
    counts = np.bincount(flat_labels, minlength=labels.n_labels)
    sums = np.bincount(flat_labels, weights=flat_vals, minlength=labels.n_labels)
    out = []
    for p in ids:
        if counts[p] == 0:
            if not allow_empty:
                raise EmptyVoiError(f"VOI {p} has no voxels")
            out.append(np.nan)
        else:
            out.append(sums[p] / counts[p])
    return VoiMeans(np.asarray(out), tuple(ids))


def rel_err(reference, approx) -> float:
    """Relative 2-norm error of ``approx`` against ``reference``."""
    ref = _as_vector(reference)
    app = _as_vector(approx)
    if ref.shape != app.shape:
        raise ValueError(f"length mismatch: {ref.shape} vs {app.shape}")
    norm = float(np.linalg.norm(ref))
    if norm == 0.0:
        raise ValueError("reference vector has zero norm")
    return float(np.linalg.norm(ref - app) / norm)


def voxelwise_error(reference: ScalarVolume, oversampled: ScalarVolume) -> ScalarVolume:
    """Absolute per-voxel difference of two volumes on the same grid."""
    if reference.grid != oversampled.grid:
        raise GridMismatchError("voxelwise error needs a common grid")
    return ScalarVolume(reference.grid, np.abs(reference.values - oversampled.values))


def ssim(a, b, data_range: float) -> float:
    """Global single-window structural similarity of two value lists.

    Uses population statistics and the conventional stabilizers
    c1 = (0.01 * data_range)^2, c2 = (0.03 * data_range)^2.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size != b.size:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    if a.size < 2:
        raise ValueError("need at least 2 values")
    if not data_range > 0:
        raise ValueError(f"data_range must be positive, got {data_range}")
    c1 = (0.01 * data_range) ** 2
    c2 = (0.03 * data_range) ** 2
    mu_a = a.mean()
    mu_b = b.mean()
    var_a = np.mean((a - mu_a) ** 2)
    var_b = np.mean((b - mu_b) ** 2)
    cov = np.mean((a - mu_a) * (b - mu_b))
    return float(
        (2 * mu_a * mu_b + c1)
        * (2 * cov + c2)
        / ((mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2))
    )


def dssim(a, b, data_range: float) -> float:
    return 1.0 - ssim(a, b, data_range)


class BorderDssim(NamedTuple):
    dssim_global: float
    dssim_border: float
    percent: float  # NaN when the global DSSIM is zero


def dssim_at_border(
    reference: ScalarVolume, oversampled: ScalarVolume, border: BoolMask
) -> BorderDssim:
    """Global DSSIM, DSSIM over the border restriction, and their ratio.

    The data range is taken from the reference volume; an exact
    reproduction yields a zero global DSSIM and an undefined (NaN)
    percentage.
    """
    if reference.grid != oversampled.grid:
        raise GridMismatchError("volumes must share a grid")
    if mask_volume(border) == 0:
        raise EmptyVoiError("border mask is empty")
    rng = reference.data_range
    if rng == 0.0:
        rng = 1.0
    # flatten i-fastest so a full-mask border reduces to the exact
    # global computation
    total = dssim(
        reference.values.ravel(order="F"), oversampled.values.ravel(order="F"), rng
    )
    at_border = dssim(restrict(reference, border), restrict(oversampled, border), rng)
    percent = 100.0 * at_border / total if total != 0.0 else float("nan")
    return BorderDssim(total, at_border, percent)


_DIFF = np.array([1.0, 0.0, -1.0])
_SMOOTH = np.array([1.0, 2.0, 1.0]) / 4.0


def gradient_norm(volume: ScalarVolume) -> ScalarVolume:
    """Voxelwise 2-norm of the three Sobel derivative estimates.

    Each component differentiates along its axis with (1, 0, -1) and
    smooths along the two others with (1, 2, 1)/4; array faces replicate.
    """
    if any(n < 3 for n in volume.grid.counts):
        raise ValueError(f"need >= 3 nodes per axis, got {volume.grid.counts}")
    acc = np.zeros(volume.grid.counts)
    for axis in range(3):
        comp = volume.values
        for other in range(3):
            taps = _DIFF if other == axis else _SMOOTH
            comp = correlate1d(comp, taps, axis=other, mode="nearest")
        acc += comp**2
    return ScalarVolume(volume.grid, np.sqrt(acc))


def gradient_ratio(grad: ScalarVolume, border: BoolMask) -> float:
    """Percent of the gradient map's 1-norm located inside the border."""
    if grad.values.shape != border.dims:
        raise GridMismatchError("gradient map and border dims differ")
    total = float(np.abs(grad.values).sum())
    if total == 0.0:
        raise ValueError("gradient map is identically zero")
    inside = float(np.abs(grad.values[border.bits]).sum())
    return 100.0 * inside / total


def volume_ratio(border: BoolMask) -> float:
    """Percent of all voxels covered by the border mask."""
    total = border.bits.size
    return 100.0 * mask_volume(border) / total

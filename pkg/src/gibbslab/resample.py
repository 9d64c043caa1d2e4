"""Interpolation by convolution: univariate evaluation and 3D resampling.

Evaluation of the trivariate interpolant is separable: weights are
computed per axis and applied as three successive contractions
(first along i, then j, then k), which equals the direct triple sum up
to float round-off.  Weight windows are clipped at the axis ends and
renormalized by the surviving weight sum, so no padding or ghost
samples are ever involved.

Scalar resampling accepts any target grid sharing the source FOV.
Label volumes are resampled either by nearest node (ties go to the
lower index) or by the multilabel rule: blur each VOI indicator, resample
the blurred fields with the cubic kernel, and take the per-voxel argmax.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import ceil

import numpy as np
from scipy.ndimage import correlate1d

from .errors import DegenerateWindowError, GridMismatchError
from .grid import Grid3, LabelVolume, ScalarVolume
from .kernels import (
    NODE_SNAP,
    Kernel,
    make_kernel,
    raw_window,
    window_offsets,
)

_DEGENERATE_SUM = 1e-12


def default_workers() -> int:
    """Worker cap from the GIBBSLAB_THREADS environment variable (>= 1)."""
    raw = os.environ.get("GIBBSLAB_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _require_same_fov(source: Grid3, target: Grid3) -> None:
    if source.fov != target.fov:
        raise GridMismatchError(
            f"grids span different FOVs: {source.fov.bounds} vs {target.fov.bounds}"
        )


@dataclass(frozen=True)
class ResamplePlan:
    """A validated (source grid, target grid, kernel) triple."""

    source: Grid3
    target: Grid3
    kernel: Kernel

    def __post_init__(self) -> None:
        _require_same_fov(self.source, self.target)

    def apply(self, volume: ScalarVolume, workers: int | None = None) -> ScalarVolume:
        if volume.grid != self.source:
            raise GridMismatchError("volume grid differs from the plan's source grid")
        return resample_scalar(volume, self.target, self.kernel, workers=workers)


def _axis_window(n_nodes: int, u: np.ndarray, kernel: Kernel):
    """Window indices, unnormalized weights and their sums for axis offsets.

    ``u`` holds positions in node units, each in [0, n_nodes - 1].
    Positions within NODE_SNAP of a node collapse to a one-hot row, so
    node queries reproduce samples exactly.  Returns ``(idx, raw, den)``
    with ``idx`` clipped in-bounds and ``raw`` zeroed outside.
    """
    N = n_nodes - 1
    u = np.asarray(u, dtype=np.float64)
    if np.any(u < -NODE_SNAP) or np.any(u > N + NODE_SNAP):
        raise ValueError(f"positions outside the sampled axis [0, {N}]")
    k = np.floor(u).astype(np.int64)
    np.clip(k, 0, N - 1, out=k)
    delta = u - k
    raw = raw_window(kernel, delta)
    idx = k[..., None] + window_offsets(kernel)
    near = np.rint(u)
    exact = np.abs(u - near) <= NODE_SNAP
    if np.any(exact):
        one_hot = (idx == near[..., None]).astype(np.float64)
        raw = np.where(exact[..., None], one_hot, raw)
    raw = np.where((idx >= 0) & (idx <= N), raw, 0.0)
    den = raw.sum(axis=-1)
    if np.any(np.abs(den) < _DEGENERATE_SUM):
        raise DegenerateWindowError("window weight sum vanished")
    return np.clip(idx, 0, N), raw, den


def interp_axis(samples: np.ndarray, kernel: Kernel, u: np.ndarray) -> np.ndarray:
    """Evaluate the univariate interpolant at node-unit positions ``u``."""
    samples = np.asarray(samples, dtype=np.float64)
    idx, raw, den = _axis_window(samples.size, u, kernel)
    return (raw * samples[idx]).sum(axis=-1) / den


def interp1d(samples, kernel: Kernel, x: float) -> float:
    """Interpolate samples of f on the equispaced unit interval at ``x``.

    ``samples`` has N + 1 entries for nodes i / N; requires N >= 2a and
    x in [0, 1].  Exact at nodes; constants reproduce exactly.
    """
    samples = np.asarray(samples, dtype=np.float64)
    N = samples.size - 1
    if N < 2 * kernel.support_radius:
        raise ValueError(
            f"need at least {2 * kernel.support_radius} intervals, got {N}"
        )
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    return float(interp_axis(samples, kernel, np.asarray([x * N]))[0])


def axis_weight_matrix(n_source: int, u: np.ndarray, kernel: Kernel) -> np.ndarray:
    """Dense (len(u), n_source) matrix of normalized per-axis weights."""
    u = np.asarray(u, dtype=np.float64)
    idx, raw, den = _axis_window(n_source, u, kernel)
    weights = raw / den[:, None]
    out = np.zeros((u.size, n_source))
    np.add.at(out, (np.arange(u.size)[:, None], idx), weights)
    return out


def _target_positions(n_source: int, n_target: int) -> np.ndarray:
    # Same FOV on both grids, so target node j sits at source node unit
    # j * (n_source - 1) / (n_target - 1); exact when the grids coincide.
    return np.arange(n_target) * ((n_source - 1) / (n_target - 1))


def resample_scalar(
    volume: ScalarVolume,
    target: Grid3,
    kernel: Kernel,
    workers: int | None = None,
) -> ScalarVolume:
    """Resample a scalar volume onto a target grid sharing its FOV."""
    _require_same_fov(volume.grid, target)
    mats = [
        axis_weight_matrix(
            volume.grid.counts[d],
            _target_positions(volume.grid.counts[d], target.counts[d]),
            kernel,
        )
        for d in range(3)
    ]
    tmp = np.tensordot(mats[0], volume.values, axes=(1, 0))
    tmp = np.moveaxis(np.tensordot(mats[1], tmp, axes=(1, 1)), 0, 1)
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or target.counts[2] < 2 * workers:
        out = np.tensordot(tmp, mats[2], axes=(2, 1))
    else:
        out = np.empty(target.counts)
        bounds = np.linspace(0, target.counts[2], workers + 1, dtype=int)
        slabs = [slice(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]

        def fill(slab: slice) -> None:
            out[:, :, slab] = np.tensordot(tmp, mats[2][slab], axes=(2, 1))

        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, slabs))
    return ScalarVolume(target, out)


def resample_labels_nearest(labels: LabelVolume, target: Grid3) -> LabelVolume:
    """Assign each target node the label of its nearest source node.

    Midway positions round toward the lower source index.
    """
    _require_same_fov(labels.grid, target)
    picks = []
    for d in range(3):
        u = _target_positions(labels.grid.counts[d], target.counts[d])
        i = np.ceil(u - 0.5).astype(np.int64)
        picks.append(np.clip(i, 0, labels.grid.counts[d] - 1))
    out = labels.labels[np.ix_(*picks)]
    return LabelVolume(target, out, n_labels=labels.n_labels)


def _gaussian_taps(sigma: float) -> np.ndarray:
    radius = int(ceil(3.0 * sigma))
    d = np.arange(-radius, radius + 1, dtype=np.float64)
    taps = np.exp(-(d**2) / (2.0 * sigma**2))
    return taps / taps.sum()


def gaussian_blur(values: np.ndarray, sigma: float) -> np.ndarray:
    """Separable discrete Gaussian blur, truncated at 3 sigma.

    Near the array faces the taps falling outside are dropped and the
    surviving ones renormalized, matching the resampler's own boundary
    policy.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    taps = _gaussian_taps(sigma)
    num = np.asarray(values, dtype=np.float64)
    edge = []
    for axis in range(3):
        num = correlate1d(num, taps, axis=axis, mode="constant", cval=0.0)
        ones = np.ones(values.shape[axis])
        edge.append(correlate1d(ones, taps, mode="constant", cval=0.0))
    return num / (
        edge[0][:, None, None] * edge[1][None, :, None] * edge[2][None, None, :]
    )


def resample_labels_multilabel(
    labels: LabelVolume,
    target: Grid3,
    sigma_vox: float = 0.5,
    workers: int | None = None,
) -> LabelVolume:
    """Blur each VOI indicator, resample with the cubic kernel, argmax.

    ``sigma_vox`` is the blur width in source voxel units.  Ties resolve
    toward the smallest label.
    """
    _require_same_fov(labels.grid, target)
    if not sigma_vox > 0:
        raise ValueError(f"sigma_vox must be positive, got {sigma_vox}")
    cubic = make_kernel("cubic")
    best = np.full(target.counts, -np.inf)
    winner = np.zeros(target.counts, dtype=np.int64)
    for p in range(labels.n_labels):
        field = gaussian_blur((labels.labels == p).astype(np.float64), sigma_vox)
        score = resample_scalar(
            ScalarVolume(labels.grid, field), target, cubic, workers=workers
        ).values
        ahead = score > best  # strict, so ties stay with the smaller label
        winner[ahead] = p
        np.maximum(best, score, out=best)
    return LabelVolume(target, winner, n_labels=labels.n_labels)


def eval_trivariate(
    volume: ScalarVolume, kernel: Kernel, points: np.ndarray
) -> np.ndarray:
    """Evaluate the trivariate interpolant at scattered physical points."""
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if points.shape[1] != 3:
        raise ValueError("points must be (n, 3)")
    windows = []
    for d in range(3):
        lo, hi = volume.grid.fov.bounds[d]
        h = volume.grid.spacing[d]
        u = (points[:, d] - lo) / h
        windows.append(_axis_window(volume.grid.counts[d], u, kernel))
    (ix, wx, sx), (iy, wy, sy), (iz, wz, sz) = windows
    vals = volume.values[
        ix[:, :, None, None], iy[:, None, :, None], iz[:, None, None, :]
    ]
    num = np.einsum("pi,pj,pk,pijk->p", wx, wy, wz, vals)
    return num / (sx * sy * sz)

"""Compactly supported interpolation kernels and their weight-bound constants.

Each kernel is a radial profile ``omega(r)`` on r >= 0 with

* ``omega(0) == 1``,
* ``omega(k) == 0`` at every positive integer k,
* ``omega(r) == 0`` for r >= support_radius.

On an equispaced axis with ``n`` nodes, the interpolation weight of node
``i`` at a point ``x`` is ``omega(|u - i|)`` divided by the sum of the
same quantity over all nodes, where ``u`` is ``x`` expressed in node
units.  Because of compact support only the ``2a`` nodes with
``|u - i| < a`` ever contribute, and near the axis ends the same
normalization doubles as the boundary policy (clip and renormalize).

Two scalar constants drive the pointwise error bounds:

* ``M_w``: max of |omega| over its support,
* ``m_w``: min over the unit cell of the windowed weight sum.

Both are computed here by dense scan with local refinement, never read
from published tables; ``LITERATURE_MIN_WEIGHT_SUM`` records the values
commonly quoted so that the discrepancy (the cubic sums to exactly 1,
the 2-lobe windowed sinc to ~1) stays visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateKernelError, DegenerateWindowError

FAMILIES = ("nearest", "linear", "cubic", "lanczos2", "gaussian")

_SUPPORT = {"nearest": 1, "linear": 1, "cubic": 2, "lanczos2": 2, "gaussian": 1}

DEFAULT_GAUSSIAN_SHAPE = 2.0

#: Weight-sum minima quoted in the interpolation literature for these
#: kernels.  Our dense scan disagrees for cubic (exact partition of
#: unity, so 1.0) and lanczos2 (min ~1.0 at the cell ends); the scanned
#: values are the ones used by every bound in this package.
LITERATURE_MIN_WEIGHT_SUM = {
    "nearest": 1.0,
    "linear": 1.0,
    "cubic": 0.75,
    "lanczos2": 1.0 + 2.0 * np.sinc(1.5) * np.sinc(0.75),
    "gaussian": 2.0 * math.exp(-DEFAULT_GAUSSIAN_SHAPE**2 / 4.0),
}

# Exact-node snap radius, in node units.  Below this offset a query is
# treated as sitting on the node, which keeps identity resampling
# bit-exact and avoids catastrophic weights for the nearest kernel.
NODE_SNAP = 1e-9

_DEGENERATE_SUM = 1e-12


@dataclass(frozen=True)
class Kernel:
    """One member of the kernel family.

    ``shape`` is the Gaussian decay parameter (required there, None for
    every other family).
    """

    family: str
    support_radius: int
    shape: float | None = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}")
        if self.support_radius != _SUPPORT[self.family]:
            raise ValueError(
                f"{self.family} kernel has support radius {_SUPPORT[self.family]}, "
                f"got {self.support_radius}"
            )
        if self.family == "gaussian":
            if self.shape is None or not self.shape > 0:
                raise ValueError("gaussian kernel needs a positive shape parameter")
            object.__setattr__(self, "shape", float(self.shape))
        elif self.shape is not None:
            raise ValueError(f"{self.family} kernel takes no shape parameter")

    def __str__(self) -> str:
        if self.family == "gaussian":
            return f"gaussian(eps={self.shape:g})"
        return self.family


def make_kernel(name: str, shape: float = DEFAULT_GAUSSIAN_SHAPE) -> Kernel:
    """Build a kernel by family name; ``shape`` only applies to gaussian."""
    name = name.strip().lower()
    if name not in FAMILIES:
        raise ValueError(f"unknown kernel {name!r}; choose from {FAMILIES}")
    return Kernel(name, _SUPPORT[name], shape if name == "gaussian" else None)


def eval_omega(kernel: Kernel, r):
    """Evaluate the radial profile at non-negative radii.

    Accepts scalars or arrays; returns the same shape.
    """
    arr = np.asarray(r, dtype=np.float64)
    if np.any(arr < 0):
        raise ValueError("radius must be non-negative")
    fam = kernel.family
    if fam == "nearest":
        out = np.where(arr < 0.5, 1.0, 0.0)
    elif fam == "linear":
        out = np.where(arr < 1.0, 1.0 - arr, 0.0)
    elif fam == "cubic":
        near = arr**3 - 2.0 * arr**2 + 1.0
        far = -(arr**3) + 5.0 * arr**2 - 8.0 * arr + 4.0
        out = np.where(arr < 1.0, near, np.where(arr < 2.0, far, 0.0))
    elif fam == "lanczos2":
        out = np.where(arr < 2.0, np.sinc(arr) * np.sinc(arr / 2.0), 0.0)
        # fp sin(pi*k) is only ~1e-16; the cardinality condition needs
        # exact zeros at integer radii
        out = np.where((arr >= 1.0) & (arr == np.rint(arr)), 0.0, out)
    else:  # gaussian
        out = np.where(arr < 1.0, np.exp(-(kernel.shape**2) * arr**2), 0.0)
    if np.isscalar(r) or np.ndim(r) == 0:
        return float(out)
    return out


def window_offsets(kernel: Kernel) -> np.ndarray:
    """Node offsets relative to the interval's lower node k: 1-a .. a."""
    a = kernel.support_radius
    return np.arange(1 - a, a + 1)


def raw_window(kernel: Kernel, delta) -> np.ndarray:
    """Unnormalized window weights for fractional offsets ``delta``.

    ``delta`` is the position inside the straddled interval, in (0, 1);
    the result has one trailing axis of length 2a ordered by
    ``window_offsets``.  For the nearest kernel, a radius of exactly 1/2
    belongs to the lower-index node, so the weight sum never vanishes.
    """
    delta = np.asarray(delta, dtype=np.float64)
    offs = window_offsets(kernel)
    radii = np.abs(delta[..., None] - offs)
    if kernel.family == "nearest":
        weights = np.where(radii < 0.5, 1.0, 0.0)
        tie = radii == 0.5
        if np.any(tie):
            lower = offs <= 0
            weights = np.where(tie & lower, 1.0, weights)
            weights = np.where(tie & ~lower, 0.0, weights)
        return weights
    return eval_omega(kernel, radii)


@dataclass(frozen=True)
class KernelConstants:
    """Scanned weight-bound constants for one kernel."""

    m_w: float
    M_w: float

    @property
    def degenerate(self) -> bool:
        return self.m_w < _DEGENERATE_SUM

    @property
    def ratio(self) -> float:
        if self.degenerate:
            raise DegenerateKernelError(
                f"m_w={self.m_w:.3e} is ~0; the weight bound M_w/m_w is unusable"
            )
        return self.M_w / self.m_w


def _refine(fn, lo: float, hi: float, mode: str, coarse: int = 1_000_001) -> float:
    """Grid-scan an extremum of ``fn`` with two local zoom rounds."""
    pick = np.argmax if mode == "max" else np.argmin
    best_t, best_v = 0.0, 0.0
    n = coarse
    for _ in range(3):
        t = np.linspace(lo, hi, n)
        v = fn(t)
        i = int(pick(v))
        best_t, best_v = float(t[i]), float(v[i])
        step = (hi - lo) / (n - 1)
        lo = max(lo, best_t - 2 * step)
        hi = min(hi, best_t + 2 * step)
        n = 10_001
    return best_v


@lru_cache(maxsize=None)
def _constants_cached(family: str, support: int, shape: float | None) -> KernelConstants:
    kernel = Kernel(family, support, shape)
    a = kernel.support_radius
    M_w = _refine(lambda t: np.abs(eval_omega(kernel, t)), 0.0, float(a), "max")
    m_w = _refine(
        lambda t: np.abs(raw_window(kernel, t).sum(axis=-1)), 0.0, 1.0, "min"
    )
    return KernelConstants(m_w=m_w, M_w=M_w)


def constants(kernel: Kernel) -> KernelConstants:
    """Scan M_w and m_w for this kernel (cached; >= 1e6 samples each)."""
    return _constants_cached(kernel.family, kernel.support_radius, kernel.shape)


def window_weights(
    kernel: Kernel, N: int, k: int, delta: float
) -> list[tuple[int, float]]:
    """Normalized window weights at a point inside interval (x_k, x_{k+1}).

    ``N`` is the interval count (nodes 0..N), ``delta`` the fractional
    position in [0, 1].  Returns (node index, weight) pairs covering
    every in-bounds node with node-unit distance < support radius;
    weights sum to 1.  Offsets within NODE_SNAP of an endpoint collapse
    to the exact-node case.
    """
    if not 0 <= k < N:
        raise ValueError(f"interval index k={k} outside 0..{N - 1}")
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta={delta} outside [0, 1]")
    if delta <= NODE_SNAP:
        return [(k, 1.0)]
    if delta >= 1.0 - NODE_SNAP:
        return [(k + 1, 1.0)]
    raw = raw_window(kernel, delta)
    idx = k + window_offsets(kernel)
    keep = (idx >= 0) & (idx <= N)
    total = float(raw[keep].sum())
    if abs(total) < _DEGENERATE_SUM:
        raise DegenerateWindowError(
            f"window weight sum {total:.3e} at k={k}, delta={delta}"
        )
    return [(int(i), float(w / total)) for i, w in zip(idx[keep], raw[keep])]

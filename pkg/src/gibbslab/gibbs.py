"""Numerical verification of the interpolation error bounds.

The pointwise bound says: for an evaluation point strictly inside an
interior inter-node interval (x_k, x_{k+1}) and a kernel whose minimum
weight sum m_w is positive,

    |P(x) - f(x)|  <=  (M_w / m_w) * sum_{i=k-a}^{k+a} |f(x) - f(x_i)|.

The sum covers every node whose weight can be nonzero (offsets k-a+1
through k+a) plus the always-zero node k-a, so the triangle-inequality
argument applies term by term.  Interior means a <= k <= N - a: there
the window never clips and the normalizing denominator is at least m_w.

Near a jump the sum keeps a term of the size of the jump no matter how
large N grows, which is the ringing behaviour these reports quantify;
away from the jump (offset |p| >= a) locality makes the error identical
to the smooth case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BoundHypothesisError
from .grid import Grid3, ScalarVolume
from .kernels import Kernel, constants
from .resample import eval_trivariate, interp_axis

#: error - bound above this counts as a violation.
VIOLATION_SLACK = 1e-12


@dataclass(frozen=True)
class PiecewiseSignal:
    """A function on [0, 1] with one breakpoint.

    ``left`` rules t <= xi and ``right`` t > xi; both branches must be
    evaluable on all of [0, 1].  Equal branches give a continuous signal.
    """

    xi: float
    left: Callable[[np.ndarray], np.ndarray]
    right: Callable[[np.ndarray], np.ndarray]
    tag: str = ""

    def __post_init__(self) -> None:
        if not 0.0 < self.xi < 1.0:
            raise ValueError(f"breakpoint {self.xi} must lie inside (0, 1)")

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = np.where(t <= self.xi, self.left(t), self.right(t))
        if out.ndim == 0:
            return float(out)
        return out

    @property
    def jump(self) -> float:
        return float(abs(self.left(np.asarray(self.xi)) - self.right(np.asarray(self.xi))))


def heaviside(xi: float = 0.5) -> PiecewiseSignal:
    """0 for t <= xi, 1 after."""
    return PiecewiseSignal(
        xi=xi,
        left=lambda t: np.zeros_like(t),
        right=lambda t: np.ones_like(t),
        tag=f"heaviside@{xi:g}",
    )


def continuous(fn: Callable[[np.ndarray], np.ndarray], tag: str = "") -> PiecewiseSignal:
    """Wrap a continuous function as a degenerate piecewise signal."""
    return PiecewiseSignal(xi=0.5, left=fn, right=fn, tag=tag or "continuous")


def random_jump_signal(rng: np.random.Generator) -> PiecewiseSignal:
    """A random linear-linear signal with one interior jump."""
    xi = float(rng.uniform(0.15, 0.85))
    slope_l, slope_r = rng.uniform(-2.0, 2.0, size=2)
    level = float(rng.uniform(-1.0, 1.0))
    jump = float(rng.uniform(0.2, 2.0) * rng.choice((-1.0, 1.0)))

    def left(t, s=slope_l, c=level, x0=xi):
        return c + s * (np.asarray(t) - x0)

    def right(t, s=slope_r, c=level + jump, x0=xi):
        return c + s * (np.asarray(t) - x0)

    return PiecewiseSignal(xi=xi, left=left, right=right, tag="random-jump")


def sample_signal(signal: PiecewiseSignal, N: int) -> np.ndarray:
    """Signal values at the N + 1 equispaced nodes of [0, 1]."""
    return np.asarray(signal(np.linspace(0.0, 1.0, N + 1)), dtype=np.float64)


@dataclass(frozen=True)
class BoundReport:
    """Per-evaluation-point errors and bound values for one sweep."""

    N: int
    kernel: str
    x: np.ndarray
    k: np.ndarray
    p: np.ndarray
    error: np.ndarray
    bound: np.ndarray

    @property
    def violations(self) -> np.ndarray:
        return self.error - self.bound > VIOLATION_SLACK

    @property
    def n_violations(self) -> int:
        return int(np.count_nonzero(self.violations))

    @property
    def max_error(self) -> float:
        return float(self.error.max()) if self.error.size else 0.0


@dataclass(frozen=True)
class TrivariateBoundReport:
    points: np.ndarray
    error: np.ndarray
    bound: np.ndarray

    @property
    def violations(self) -> np.ndarray:
        return self.error - self.bound > VIOLATION_SLACK

    @property
    def n_violations(self) -> int:
        return int(np.count_nonzero(self.violations))


def _interior_intervals(N: int, a: int) -> np.ndarray:
    # k = N - a + 1 would clip the window at node N + 1, breaking the
    # minimum-weight-sum hypothesis, so the interior stops at N - a.
    return np.arange(a, N - a + 1)


def pointwise_bound(samples, kernel: Kernel, x: float, f_value: float) -> float:
    """Bound RHS at one point; ``f_value`` is the true function value.

    Raises BoundHypothesisError when x falls in a boundary interval
    where the bound's hypothesis does not hold.
    """
    samples = np.asarray(samples, dtype=np.float64)
    N = samples.size - 1
    a = kernel.support_radius
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    k = min(int(np.floor(x * N)), N - 1)
    if k < a or k > N - a:
        raise BoundHypothesisError(
            f"interval k={k} outside the interior range [{a}, {N - a}]"
        )
    ratio = constants(kernel).ratio
    window = samples[k - a : k + a + 1]
    return float(ratio * np.abs(f_value - window).sum())


def verify_pointwise_bound(
    signal: PiecewiseSignal,
    kernel: Kernel,
    N: int,
    points_per_interval: int = 16,
) -> BoundReport:
    """Sweep every interior interval and compare error against bound."""
    a = kernel.support_radius
    if N < 4 * a:
        raise ValueError(f"need N >= {4 * a}, got {N}")
    samples = sample_signal(signal, N)
    ks = _interior_intervals(N, a)
    deltas = (np.arange(points_per_interval) + 0.5) / points_per_interval
    u = (ks[:, None] + deltas[None, :]).ravel()
    k_flat = np.repeat(ks, points_per_interval)
    x = u / N
    f_true = np.asarray(signal(x), dtype=np.float64)
    approx = interp_axis(samples, kernel, u)
    error = np.abs(approx - f_true)
    offsets = np.arange(-a, a + 1)
    window = samples[k_flat[:, None] + offsets[None, :]]
    bound = constants(kernel).ratio * np.abs(f_true[:, None] - window).sum(axis=1)
    m = int(np.floor(signal.xi * N))
    return BoundReport(
        N=N,
        kernel=str(kernel),
        x=x,
        k=k_flat,
        p=m - k_flat,
        error=error,
        bound=bound,
    )


def convergence_study(
    signal: PiecewiseSignal,
    kernel: Kernel,
    x_fixed: float,
    n_list: list[int],
) -> list[float]:
    """Interpolation error at a fixed point for increasing sample counts."""
    errors = []
    for N in n_list:
        samples = sample_signal(signal, N)
        approx = float(interp_axis(samples, kernel, np.asarray([x_fixed * N]))[0])
        errors.append(abs(approx - float(signal(x_fixed))))
    return errors


def gibbs_profile(
    signal: PiecewiseSignal,
    kernel: Kernel,
    N: int,
    points_per_interval: int = 16,
    extra_offsets: int = 2,
) -> dict[int, float]:
    """Max |error| per interval offset p between the point and the jump.

    Offset p means the breakpoint lies p intervals to the right of the
    evaluation interval; the returned range covers the support radius
    plus ``extra_offsets`` on each side.
    """
    a = kernel.support_radius
    if N < 8 * a:
        raise ValueError(f"need N >= {8 * a}, got {N}")
    report = verify_pointwise_bound(signal, kernel, N, points_per_interval)
    profile: dict[int, float] = {}
    for p in range(-(a + extra_offsets), a + extra_offsets):
        sel = report.p == p
        if np.any(sel):
            profile[p] = float(report.error[sel].max())
    return profile


def verify_trivariate_bound(
    volume_function: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray],
    grid: Grid3,
    kernel: Kernel,
    n_eval_points: int,
    seed: int = 0,
) -> TrivariateBoundReport:
    """Check the trivariate bound at random interior points."""
    a = kernel.support_radius
    xs, ys, zs = grid.meshgrid()
    volume = ScalarVolume(grid, volume_function(xs, ys, zs))
    rng = np.random.default_rng(seed)
    units = np.empty((n_eval_points, 3))
    points = np.empty((n_eval_points, 3))
    for d in range(3):
        n_d = grid.counts[d]
        units[:, d] = rng.uniform(a, n_d - 1 - a, size=n_eval_points)
        lo, _ = grid.fov.bounds[d]
        points[:, d] = lo + units[:, d] * grid.spacing[d]
    f_true = np.asarray(
        volume_function(points[:, 0], points[:, 1], points[:, 2]), dtype=np.float64
    )
    approx = eval_trivariate(volume, kernel, points)
    error = np.abs(approx - f_true)
    offsets = np.arange(-a, a + 1)
    k = np.floor(units).astype(np.int64)
    ix = k[:, 0:1] + offsets
    iy = k[:, 1:2] + offsets
    iz = k[:, 2:3] + offsets
    window = volume.values[
        ix[:, :, None, None], iy[:, None, :, None], iz[:, None, None, :]
    ]
    diff = np.abs(f_true[:, None, None, None] - window).sum(axis=(1, 2, 3))
    bound = constants(kernel).ratio ** 3 * diff
    return TrivariateBoundReport(points=points, error=error, bound=bound)

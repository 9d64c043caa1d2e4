import numpy as np
import pytest

from gibbslab import (
    SHEPP_LOGAN,
    Ellipsoid,
    Fov,
    PhantomSpec,
    ScalarVolume,
    coarse_grid,
    make_grid,
    phantom_value,
    sample_phantom,
    segment_phantom,
)
from gibbslab.errors import SuspiciousInputError


def membership_sum_oracle(spec, points):
    """Independent per-ellipsoid membership test via rotation matrices."""
    points = np.atleast_2d(points)
    totals = np.zeros(len(points))
    for e in spec.ellipsoids:
        c, s = np.cos(e.angle_z), np.sin(e.angle_z)
        rot_t = np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])
        local = (points - np.asarray(e.center)) @ rot_t.T
        q = (local / np.asarray(e.semi_axes)) ** 2
        totals += np.where(q.sum(axis=1) <= 1.0, e.intensity, 0.0)
    return totals


def test_point_outside_everything_is_zero():
    assert phantom_value(SHEPP_LOGAN, (5.0, 5.0, 5.0)) == 0.0
    assert phantom_value(SHEPP_LOGAN, (1.0, 1.0, 1.0)) == 0.0


def test_origin_value_matches_membership_oracle():
    got = phantom_value(SHEPP_LOGAN, (0.0, 0.0, 0.0))
    want = membership_sum_oracle(SHEPP_LOGAN, np.zeros((1, 3)))[0]
    assert got == want
    # origin sits inside the two outermost shells only
    assert got == pytest.approx(2.0 - 0.98, abs=1e-15)


def test_value_invariant_under_ellipsoid_order():
    reordered = PhantomSpec(tuple(reversed(SHEPP_LOGAN.ellipsoids)))
    for pt in [(0.0, 0.0, 0.0), (0.1, -0.2, 0.05), (0.3, 0.3, -0.3)]:
        assert phantom_value(SHEPP_LOGAN, pt) == pytest.approx(
            phantom_value(reordered, pt), abs=1e-15
        )


def test_embedded_table_against_oracle_64():
    grid = make_grid(Fov.cube(-1.0, 1.0), (64, 64, 64))
    vol = sample_phantom(SHEPP_LOGAN, grid)
    pts = np.stack([c.ravel() for c in grid.meshgrid()], axis=1)
    want = membership_sum_oracle(SHEPP_LOGAN, pts).reshape(grid.counts)
    assert np.array_equal(vol.values, want)


def test_two_node_sampling_gives_zero_corners():
    grid = make_grid(Fov.cube(-1.0, 1.0), (2, 2, 2))
    vol = sample_phantom(SHEPP_LOGAN, grid)
    assert np.all(vol.values == 0.0)


def test_values_come_from_finite_level_set():
    grid = make_grid(Fov.cube(-1.0, 1.0), (48, 48, 48))
    vol = sample_phantom(SHEPP_LOGAN, grid)
    levels = np.unique(vol.values)
    assert levels.size <= 2 ** len(SHEPP_LOGAN.ellipsoids)
    finer = sample_phantom(SHEPP_LOGAN, make_grid(grid.fov, (70, 70, 70)))
    rhos = [e.intensity for e in SHEPP_LOGAN.ellipsoids]
    achievable = {
        round(v, 12)
        for v in (
            np.asarray(
                [
                    sum(np.array(rhos)[list(mask)])
                    for mask in _subsets(len(rhos))
                ]
            )
        )
    }
    assert {round(v, 12) for v in np.unique(finer.values)} <= achievable


def _subsets(n):
    for bits in range(2**n):
        yield [i for i in range(n) if bits >> i & 1]


def test_coarse_values_are_analytic_not_decimated():
    fine = make_grid(Fov.cube(-1.0, 1.0), (33, 33, 33))
    coarse = coarse_grid(fine, 2)
    vol = sample_phantom(SHEPP_LOGAN, coarse)
    for idx in [(0, 0, 0), (3, 8, 11), (15, 15, 15)]:
        node = coarse.node(*idx)
        assert vol.values[idx] == phantom_value(SHEPP_LOGAN, node)


def test_boundary_counts_as_inside():
    e = Ellipsoid(center=(0.0, 0.0, 0.0), semi_axes=(0.5, 0.5, 0.5),
                  angle_z=0.0, intensity=1.0)
    spec = PhantomSpec((e,))
    assert phantom_value(spec, (0.5, 0.0, 0.0)) == 1.0
    assert phantom_value(spec, (0.5 + 1e-12, 0.0, 0.0)) == 0.0


# --- segmentation ------------------------------------------------------------


def test_segment_constant_volume():
    grid = make_grid(Fov.cube(0.0, 1.0), (3, 3, 3))
    vol = ScalarVolume(grid, np.full(grid.counts, 1.5))
    labels = segment_phantom(vol)
    assert labels.n_labels == 1
    assert np.all(labels.labels == 0)


def test_segment_two_valued_volume():
    grid = make_grid(Fov.cube(0.0, 1.0), (4, 4, 4))
    values = np.zeros(grid.counts)
    values[2:] = 1.0
    labels = segment_phantom(ScalarVolume(grid, values))
    assert labels.n_labels == 2
    assert np.all(labels.labels[:2] == 0)
    assert np.all(labels.labels[2:] == 1)


def test_segment_orders_by_intensity_with_zero_background():
    grid = make_grid(Fov.cube(0.0, 1.0), (4, 4, 4))
    values = np.zeros(grid.counts)
    values[0] = -1.0  # below the background level
    values[3] = 2.0
    labels = segment_phantom(ScalarVolume(grid, values))
    assert labels.n_labels == 3
    assert np.all(labels.labels[1:3] == 0)  # zero intensity -> background
    assert np.all(labels.labels[0] == 1)  # remaining labels ascend
    assert np.all(labels.labels[3] == 2)


def test_segment_full_phantom_level_count():
    grid = make_grid(Fov.cube(-1.0, 1.0), (64, 64, 64))
    vol = sample_phantom(SHEPP_LOGAN, grid)
    labels = segment_phantom(vol)
    assert labels.n_labels == np.unique(vol.values).size
    # restriction of the volume to each VOI is constant
    for p in range(labels.n_labels):
        vals = vol.values[labels.labels == p]
        assert vals.size > 0
        assert vals.max() - vals.min() <= 1e-9


def test_segment_idempotent_under_relabel():
    grid = make_grid(Fov.cube(-1.0, 1.0), (32, 32, 32))
    vol = sample_phantom(SHEPP_LOGAN, grid)
    labels = segment_phantom(vol)
    again = segment_phantom(ScalarVolume(grid, labels.labels.astype(float)))
    assert np.array_equal(labels.labels, again.labels)


def test_segment_rejects_non_piecewise_input(rng):
    grid = make_grid(Fov.cube(0.0, 1.0), (8, 8, 8))
    vol = ScalarVolume(grid, rng.normal(size=grid.counts))
    with pytest.raises(SuspiciousInputError):
        segment_phantom(vol)

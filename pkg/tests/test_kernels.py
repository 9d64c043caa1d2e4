import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gibbslab import constants, eval_omega, make_kernel, window_weights
from gibbslab.errors import DegenerateKernelError, DegenerateWindowError
from gibbslab.kernels import FAMILIES, LITERATURE_MIN_WEIGHT_SUM, raw_window

ALL_KERNELS = [make_kernel(name) for name in FAMILIES]


def kernel_ids():
    return [str(k) for k in ALL_KERNELS]


# --- radial profile -------------------------------------------------------


def test_cubic_profile_values():
    cubic = make_kernel("cubic")
    assert eval_omega(cubic, 0.0) == 1.0
    # both branch formulas vanish at r=1
    assert eval_omega(cubic, 1.0) == 0.0
    assert 1.0**3 - 2 * 1.0**2 + 1 == 0.0
    assert -(1.0**3) + 5 * 1.0**2 - 8 * 1.0 + 4 == 0.0
    assert eval_omega(cubic, 1.5) == -0.125


def test_gaussian_profile_value():
    g = make_kernel("gaussian", shape=2.0)
    assert eval_omega(g, 0.5) == pytest.approx(math.exp(-1.0), abs=1e-15)


@pytest.mark.parametrize("kernel", ALL_KERNELS, ids=kernel_ids())
def test_profile_boundary_conditions(kernel):
    assert eval_omega(kernel, 0.0) == 1.0
    for k in range(1, kernel.support_radius + 2):
        assert eval_omega(kernel, float(k)) == 0.0


@pytest.mark.parametrize("kernel", ALL_KERNELS, ids=kernel_ids())
def test_compact_support_is_exact(kernel):
    r = np.linspace(kernel.support_radius, kernel.support_radius + 3, 1001)
    assert np.all(eval_omega(kernel, r) == 0.0)


def test_negative_radius_rejected():
    with pytest.raises(ValueError):
        eval_omega(make_kernel("linear"), -0.1)


def test_lanczos_uses_normalized_sinc_with_unit_center():
    lz = make_kernel("lanczos2")
    # sinc(0) = 1 so omega(0) = 1; spot-check an interior radius
    assert eval_omega(lz, 0.0) == 1.0
    r = 0.7
    expected = (
        math.sin(math.pi * r)
        / (math.pi * r)
        * math.sin(math.pi * r / 2)
        / (math.pi * r / 2)
    )
    assert eval_omega(lz, r) == pytest.approx(expected, rel=1e-14)


# --- constants ------------------------------------------------------------


def test_gaussian_constants_match_closed_form():
    c = constants(make_kernel("gaussian", shape=2.0))
    assert c.M_w == pytest.approx(1.0, abs=1e-12)
    assert c.m_w == pytest.approx(2.0 * math.exp(-1.0), abs=1e-9)


def test_linear_constants():
    c = constants(make_kernel("linear"))
    assert c.m_w == pytest.approx(1.0, abs=1e-12)
    assert c.M_w == pytest.approx(1.0, abs=1e-12)


def _pairing_sum_oracle(omega, a, t):
    # independent transcription of the paired-node weight sum
    total = 0.0
    for p in range(a):
        total += omega(t + p) + omega(1.0 - t + p)
    return total


def test_cubic_scan_disagrees_with_quoted_value():
    cubic = make_kernel("cubic")
    c = constants(cubic)
    # oracle: coarse independent scan of the pairing sum
    ts = np.linspace(0.0, 1.0, 20001)
    vals = [
        abs(_pairing_sum_oracle(lambda r: eval_omega(cubic, r), 2, t)) for t in ts
    ]
    assert c.m_w == pytest.approx(min(vals), abs=1e-9)
    # the computed constant is an exact partition of unity, not the
    # commonly quoted 0.75, which stays recorded for reference
    assert c.m_w == pytest.approx(1.0, abs=1e-9)
    assert LITERATURE_MIN_WEIGHT_SUM["cubic"] == 0.75
    assert abs(c.m_w - LITERATURE_MIN_WEIGHT_SUM["cubic"]) > 0.2


def test_lanczos_scan_disagrees_with_quoted_value():
    c = constants(make_kernel("lanczos2"))
    assert 0.95 <= c.m_w <= 1.0 + 1e-9
    quoted = LITERATURE_MIN_WEIGHT_SUM["lanczos2"]
    assert quoted == pytest.approx(0.8726, abs=5e-4)
    assert abs(c.m_w - quoted) > 0.05


def test_sharp_gaussian_flagged_degenerate():
    c = constants(make_kernel("gaussian", shape=12.0))
    assert c.degenerate
    with pytest.raises(DegenerateKernelError):
        _ = c.ratio


# --- window weights -------------------------------------------------------


def test_linear_window_quarter():
    w = window_weights(make_kernel("linear"), 16, 5, 0.25)
    assert w == [(5, 0.75), (6, 0.25)]


def test_cubic_window_quarter_raw_values():
    w = dict(window_weights(make_kernel("cubic"), 16, 5, 0.25))
    expected = {4: -0.140625, 5: 0.890625, 6: 0.296875, 7: -0.046875}
    assert set(w) == set(expected)
    for idx, val in expected.items():
        assert w[idx] == pytest.approx(val, abs=1e-15)
    # raw weights already sum to 1, so normalization changes nothing
    assert sum(w.values()) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("kernel", ALL_KERNELS, ids=kernel_ids())
def test_exact_node_gives_delta_weights(kernel):
    assert window_weights(kernel, 32, 7, 0.0) == [(7, 1.0)]
    assert window_weights(kernel, 32, 7, 1.0) == [(8, 1.0)]


def test_nearest_midpoint_belongs_to_lower_node():
    w = dict(window_weights(make_kernel("nearest"), 16, 5, 0.5))
    assert w == {5: 1.0, 6: 0.0}


def test_degenerate_window_raises():
    with pytest.raises(DegenerateWindowError):
        window_weights(make_kernel("gaussian", shape=12.0), 16, 5, 0.5)


@settings(max_examples=200)
@given(
    name=st.sampled_from(FAMILIES),
    delta=st.floats(min_value=1e-6, max_value=1.0 - 1e-6),
    k=st.integers(min_value=2, max_value=20),
)
def test_weights_sum_to_one(name, delta, k):
    kernel = make_kernel(name)
    weights = window_weights(kernel, 24, k, delta)
    assert sum(w for _, w in weights) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("kernel", ALL_KERNELS, ids=kernel_ids())
def test_weight_magnitudes_bounded_by_constants(kernel, rng):
    # interior windows only: weights depend on the fractional offset alone
    c = constants(kernel)
    deltas = rng.uniform(0.0, 1.0, size=100_000)
    raw = raw_window(kernel, deltas)
    weights = raw / raw.sum(axis=-1, keepdims=True)
    assert np.abs(weights).max() <= c.ratio + 1e-9

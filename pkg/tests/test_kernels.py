import math

import numpy as np
import pytest

from chronocollapse.kernels import (
    DP_SERIES_SWITCH,
    kernel_dp_fourier,
    kernel_shape,
    kernel_shape_complement,
    kernel_smeared,
    kernel_zero,
)
from chronocollapse.params import ModelParams
from chronocollapse.tau import tau_max

from _oracles import csl_smeared_by_convolution, dp_inverse_fourier

# mpmath (tests/oracles/compute_frozen.py)
DP_SHAPE_AT_2 = 0.7468241328124270254
EXP_MINUS_4 = 0.018315638888734180294


def test_csl_at_zero(csl_ref):
    k = csl_ref.constants
    assert kernel_smeared(csl_ref, 0.0) == pytest.approx(k.hbar ** 2 * 1e-16 / k.m0 ** 2, rel=1e-15)


def test_dp_small_r_limit(dp_ref):
    k = dp_ref.constants
    expected = k.hbar * k.G / (math.sqrt(math.pi) * 1e-9)
    assert kernel_smeared(dp_ref, 0.0) == pytest.approx(expected, rel=1e-15)
    assert kernel_smeared(dp_ref, 1e-20) == pytest.approx(expected, rel=1e-15)


def test_at_two_sigma(csl_ref, dp_ref):
    k = dp_ref.constants
    assert kernel_smeared(dp_ref, 2e-9) == pytest.approx(k.hbar * k.G / 2e-9 * math.erf(1.0), rel=1e-14)
    assert kernel_smeared(csl_ref, 2e-7) == pytest.approx(kernel_zero(csl_ref) * math.exp(-1), rel=1e-14)


def test_kernel_zero_matches_tau_max(ref_model):
    c = ref_model.constants.c
    assert kernel_zero(ref_model) == pytest.approx(c ** 4 * tau_max(ref_model), rel=1e-12)
    assert kernel_zero(ref_model) == pytest.approx(kernel_smeared(ref_model, 0.0), rel=1e-15)


def test_shape_values():
    assert kernel_shape("csl", 0.0) == 1.0
    assert kernel_shape("dp", 0.0) == 1.0
    assert kernel_shape("dp", 2.0) == pytest.approx(DP_SHAPE_AT_2, rel=1e-14)
    assert kernel_shape("csl", 4.0) == pytest.approx(EXP_MINUS_4, rel=1e-14)


@pytest.mark.parametrize("kind", ["csl", "dp"])
def test_shape_strictly_decreasing(kind):
    u = np.linspace(0.0, 50.0, 50001)
    f = kernel_shape(kind, u)
    assert np.all(np.diff(f) < 0)
    assert np.all((f > 0) & (f <= 1))


def test_factorization(ref_model):
    u = np.concatenate([[0.0, 1e-6, 5e-4, 1e-3], np.geomspace(1e-2, 200, 300)])
    lhs = kernel_smeared(ref_model, u * ref_model.sigma)
    rhs = kernel_zero(ref_model) * kernel_shape(ref_model.kind, u)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=0)


def test_dp_series_branch_continuity():
    below = kernel_shape("dp", np.nextafter(DP_SERIES_SWITCH, 0))
    at = kernel_shape("dp", DP_SERIES_SWITCH)
    exact = math.sqrt(math.pi) * math.erf(DP_SERIES_SWITCH / 2) / DP_SERIES_SWITCH
    assert abs(below - at) / at < 1e-12
    assert abs(below - exact) / exact < 1e-12


def test_dp_series_against_mpmath():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    for u in [1e-8, 1e-5, 3e-4, 9.9e-4]:
        ref = mp.sqrt(mp.pi) * mp.erf(mp.mpf(u) / 2) / mp.mpf(u)
        assert kernel_shape("dp", u) == pytest.approx(float(ref), rel=1e-15)


@pytest.mark.parametrize("kind", ["csl", "dp"])
def test_complement_against_mpmath(kind):
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    for u in [1e-6, 1e-3, 0.05, 0.099, 0.1, 0.5, 3.0, 30.0]:
        x = mp.mpf(u)
        f = mp.e ** (-x * x / 4) if kind == "csl" else mp.sqrt(mp.pi) * mp.erf(x / 2) / x
        assert kernel_shape_complement(kind, u) == pytest.approx(float(1 - f), rel=1e-12)


def test_negative_inputs_rejected(csl_ref):
    with pytest.raises(ValueError):
        kernel_smeared(csl_ref, -1e-9)
    with pytest.raises(ValueError):
        kernel_shape("dp", -0.1)
    with pytest.raises(ValueError):
        kernel_shape("dp", [0.1, np.nan])


def test_fourier_value(dp_ref):
    k = dp_ref.constants
    s = dp_ref.sigma
    expected = 4 * math.pi * k.hbar * k.G * s ** 2 * math.exp(-1)
    assert kernel_dp_fourier(dp_ref, 1 / s) == pytest.approx(expected, rel=1e-14)


def test_fourier_small_k_divergence(dp_ref):
    k = dp_ref.constants
    for kk in [1e-3, 1e-1]:
        val = kernel_dp_fourier(dp_ref, kk)
        assert val == pytest.approx(4 * math.pi * k.hbar * k.G / kk ** 2, rel=1e-12)


def test_fourier_rejections(csl_ref, dp_ref):
    with pytest.raises(ValueError):
        kernel_dp_fourier(dp_ref, 0.0)
    with pytest.raises(ValueError):
        kernel_dp_fourier(csl_ref, 1e9)


@pytest.mark.parametrize("u", [0.1, 1.0, 5.0, 20.0])
def test_fourier_inverse_matches_real_space(dp_ref, u):
    r = u * dp_ref.sigma
    assert dp_inverse_fourier(dp_ref, r) == pytest.approx(kernel_smeared(dp_ref, r), rel=1e-6)


@pytest.mark.parametrize("u", [0.0, 0.5, 2.0, 6.0])
def test_csl_convolution_identity(u):
    m = ModelParams.csl(1e-16, 1e-7)
    r = u * m.sigma
    assert csl_smeared_by_convolution(m, r) == pytest.approx(kernel_smeared(m, r), rel=1e-9)

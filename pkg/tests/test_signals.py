import numpy as np
import pytest

from scdt import (
    Signal,
    ValidationError,
    Warp,
    apply_warp,
    jordan_decompose,
    l1_norm,
    make_signal,
    resample,
)

from conftest import signed_suite


class TestMakeSignal:
    def test_constant_signal(self):
        s = make_signal([0, 1], [1, 1])
        assert np.array_equal(s.grid, [0, 1])
        assert np.array_equal(s.values, [1, 1])

    def test_triangle_signal(self):
        s = make_signal([0, 0.5, 1], [0, 1, 0])
        assert len(s) == 3
        assert s.domain == (0.0, 1.0)

    def test_non_monotone_grid_rejected(self):
        with pytest.raises(ValidationError, match="indices 0 and 1"):
            make_signal([1, 0], [1, 1])

    def test_nan_value_names_index(self):
        with pytest.raises(ValidationError, match="index 2"):
            make_signal([0, 1, 2], [0, 1, np.nan])

    def test_inf_grid_rejected(self):
        with pytest.raises(ValidationError, match="non-finite"):
            make_signal([0, np.inf], [1, 1])

    def test_length_mismatch(self):
        with pytest.raises(ValidationError, match="does not match"):
            make_signal([0, 1, 2], [1, 1])

    def test_too_short(self):
        with pytest.raises(ValidationError):
            make_signal([0], [1])

    def test_arrays_are_readonly(self):
        s = make_signal([0, 1], [1, 1])
        with pytest.raises(ValueError):
            s.values[0] = 5.0


class TestL1Norm:
    def test_constant_one(self):
        assert l1_norm(make_signal([0, 1], [1, 1])) == pytest.approx(1.0)

    def test_absolute_value(self):
        assert l1_norm(make_signal([0, 1], [-2, -2])) == pytest.approx(2.0)

    def test_sine_analytic(self):
        t = np.linspace(0, 1, 1000)
        s = make_signal(t, np.sin(2 * np.pi * t))
        assert l1_norm(s) == pytest.approx(2 / np.pi, abs=1e-4)


class TestJordanDecompose:
    def test_step_pair(self):
        # opposing unit steps on [-1, 1]
        t = np.linspace(-1, 1, 1000)
        s = make_signal(t, np.where(t < 0, 1.0, -1.0))
        pos, neg = jordan_decompose(s)
        assert pos.mass == pytest.approx(1.0, abs=5e-3)
        assert neg.mass == pytest.approx(1.0, abs=5e-3)
        assert np.all(pos.signal.values[t >= 0] == 0)
        assert np.all(neg.signal.values[t < 0] == 0)

    def test_nonnegative_signal(self):
        s = make_signal([0, 0.5, 1], [0, 1, 0])
        pos, neg = jordan_decompose(s)
        assert np.array_equal(pos.signal.values, s.values)
        assert neg.mass == 0.0

    def test_zero_signal(self):
        s = make_signal([0, 1], [0, 0])
        pos, neg = jordan_decompose(s)
        assert pos.mass == 0.0 and neg.mass == 0.0

    def test_pointwise_identities(self):
        for s in signed_suite(seed=11, count=10, n=300):
            pos, neg = jordan_decompose(s)
            assert np.array_equal(pos.signal.values - neg.signal.values, s.values)
            assert np.all(pos.signal.values * neg.signal.values == 0.0)

    def test_mass_additivity(self):
        for s in signed_suite(seed=12, count=10, n=300):
            pos, neg = jordan_decompose(s)
            assert pos.mass + neg.mass == pytest.approx(l1_norm(s), rel=1e-9)


class TestWarp:
    def test_affine_translation(self):
        t = np.linspace(0, 1, 200)
        s = make_signal(t, np.sin(2 * np.pi * t))
        out = apply_warp(s, Warp.affine(1.0, 0.3))
        assert out.domain == pytest.approx((-0.3, 0.7))
        assert np.allclose(out.values, np.sin(2 * np.pi * (out.grid + 0.3)), atol=1e-12)

    def test_identity_returns_signal(self):
        t = np.linspace(0, 1, 200)
        s = make_signal(t, np.cos(3 * t))
        out = apply_warp(s, Warp.identity())
        assert np.allclose(out.values, s.values, atol=1e-12)
        assert np.allclose(out.grid, s.grid, atol=1e-12)

    def test_square_law_with_jacobian(self):
        # sampled signals interpolate linearly, so errors scale with h^2 |s''|
        t = np.linspace(0, 1, 500)
        s = make_signal(t, -np.sin(3 * np.pi * t))
        out = apply_warp(s, Warp.power(2.0, normalize=True))
        expected = 2 * out.grid * (-np.sin(3 * np.pi * out.grid**2))
        assert np.allclose(out.values, expected, atol=1e-4)

    def test_square_law_without_jacobian(self):
        t = np.linspace(0, 1, 500)
        s = make_signal(t, -np.sin(3 * np.pi * t))
        out = apply_warp(s, Warp.power(2.0, normalize=False))
        expected = -np.sin(3 * np.pi * out.grid**2)
        assert np.allclose(out.values, expected, atol=1e-4)

    def test_normalized_affine_preserves_mass(self):
        for s in signed_suite(seed=13, count=5, n=500):
            out = apply_warp(s, Warp.affine(1.7, -0.4))
            assert l1_norm(out) == pytest.approx(l1_norm(s), rel=1e-6)

    def test_scale_factor(self):
        t = np.linspace(0, 1, 100)
        s = make_signal(t, np.ones_like(t))
        out = apply_warp(s, Warp.affine(1.0, 0.0, scale=2.5))
        assert np.allclose(out.values, 2.5)

    def test_power_warp_requires_nonnegative_domain(self):
        t = np.linspace(-1, 1, 100)
        s = make_signal(t, np.ones_like(t))
        with pytest.raises(ValidationError):
            apply_warp(s, Warp.power(2.0))

    def test_tabulated_warp(self):
        tg = np.linspace(-1, 2, 400)
        w = Warp.tabulated(tg, tg**3 + tg)  # strictly increasing
        t = np.linspace(0, 1, 200)
        s = make_signal(t, np.ones_like(t))
        out = apply_warp(s, w)
        assert l1_norm(out) == pytest.approx(1.0, rel=1e-3)

    def test_tabulated_warp_must_increase(self):
        with pytest.raises(ValidationError):
            Warp.tabulated([0, 1, 2], [0, 1, 0.5])

    def test_tabulated_range_violation(self):
        w = Warp.tabulated([0, 1], [0.2, 0.8])
        t = np.linspace(0, 1, 50)
        s = make_signal(t, np.ones_like(t))
        with pytest.raises(ValidationError, match="range"):
            apply_warp(s, w)

    def test_bad_parameters(self):
        with pytest.raises(ValidationError):
            Warp.affine(-1.0, 0.0)
        with pytest.raises(ValidationError):
            Warp.power(0.0)
        with pytest.raises(ValidationError):
            Warp(kind="mystery")


class TestResample:
    def test_own_grid_identity(self):
        s = make_signal([0, 0.5, 1], [0, 1, 0])
        out = resample(s, s.grid)
        assert np.array_equal(out.values, s.values)

    def test_constant(self):
        s = make_signal([0, 1], [1, 1])
        out = resample(s, np.linspace(0, 1, 10))
        assert np.allclose(out.values, 1.0)

    def test_triangle_midpoints(self):
        s = make_signal([0, 0.5, 1], [0, 1, 0])
        out = resample(s, [0.25, 0.75])
        assert np.allclose(out.values, [0.5, 0.5])

    def test_zero_outside_support(self):
        s = make_signal([0.4, 0.6], [1, 1])
        out = resample(s, [0.0, 0.5, 1.0])
        assert np.allclose(out.values, [0.0, 1.0, 0.0])

import numpy as np
import pytest

from scdt import (
    DatasetSpec,
    Reference,
    ValidationError,
    Warp,
    apply_warp,
    constant_speed_check,
    counterexample_pair,
    ds_distance,
    figure_signals,
    geodesic_midpoint_diagnostic,
    jordan_decompose,
    l1_norm,
    make_experiment1,
    template,
)


class TestTemplates:
    def test_gabor_peak_at_center(self):
        grid = np.linspace(0, 1, 1001)
        s = template("gabor", grid)
        assert s.values[500] == pytest.approx(1.0)

    @pytest.mark.parametrize("name", ["gabor", "sawtooth_apodized", "square_apodized"])
    def test_templates_are_signed(self, name):
        s = template(name, np.linspace(0, 1, 1000))
        pos, neg = jordan_decompose(s)
        assert pos.mass > 0.01 and neg.mass > 0.01

    def test_square_bounded_by_one(self):
        s = template("square_apodized", np.linspace(0, 1, 1000))
        assert np.all(s.values >= -1.0) and np.all(s.values <= 1.0)

    def test_unknown_template_rejected(self):
        with pytest.raises(ValidationError, match="unknown template"):
            template("wavelet", np.linspace(0, 1, 100))


class TestDatasetSpec:
    def test_bad_ranges_rejected(self):
        with pytest.raises(ValidationError):
            DatasetSpec(omega_range=(-1.0, 1.0))
        with pytest.raises(ValidationError):
            DatasetSpec(tau_range=(0.2, -0.2))
        with pytest.raises(ValidationError):
            DatasetSpec(train_per_class=0)


class TestMakeExperiment1:
    def test_deterministic_under_seed(self):
        spec = DatasetSpec(train_per_class=3, test_per_class=2, resolution=300, seed=5)
        d1 = make_experiment1(spec)
        d2 = make_experiment1(spec)
        for a, b in zip(d1.train + d1.test, d2.train + d2.test):
            assert np.array_equal(a.grid, b.grid)
            assert np.array_equal(a.values, b.values)

    def test_different_seed_differs(self):
        base = DatasetSpec(train_per_class=3, test_per_class=2, resolution=300, seed=5)
        other = DatasetSpec(train_per_class=3, test_per_class=2, resolution=300, seed=6)
        d1, d2 = make_experiment1(base), make_experiment1(other)
        assert not np.array_equal(d1.train[0].values, d2.train[0].values)

    def test_identity_draw_returns_template(self):
        grid = np.linspace(0, 1, 500)
        tmpl = template("gabor", grid)
        out = apply_warp(tmpl, Warp.affine(1.0, 0.0))
        assert np.allclose(out.values, tmpl.values, atol=1e-12)

    def test_mass_preserved_by_normalized_warps(self):
        spec = DatasetSpec(train_per_class=4, test_per_class=1, resolution=600, seed=9)
        data = make_experiment1(spec)
        grid = np.linspace(0, 1, 600)
        masses = {c: l1_norm(template(n, grid))
                  for c, n in enumerate(spec.template_ids)}
        for s, label in zip(data.train, data.train_labels):
            assert l1_norm(s) == pytest.approx(masses[label], rel=1e-6)

    def test_samples_stay_in_generative_cluster(self):
        ref = Reference.uniform(0, 1, 600)
        spec = DatasetSpec(train_per_class=2, test_per_class=1, resolution=600, seed=3)
        data = make_experiment1(spec)
        grid = np.linspace(0, 1, 600)
        for s, label in list(zip(data.train, data.train_labels))[:3]:
            tmpl = template(spec.template_ids[label], grid)
            report = constant_speed_check(tmpl, s, ref, grid_size=3)
            assert report.max_relative_deviation < 0.01


class TestCounterexamplePair:
    def test_antisymmetric(self):
        s1, s2 = counterexample_pair(800)
        assert np.array_equal(s2.values, -s1.values)

    def test_distance_is_sqrt_two(self, ref):
        s1, s2 = counterexample_pair()
        assert ds_distance(s1, s2, ref) == pytest.approx(np.sqrt(2), abs=0.02)

    def test_midpoint_diagnostic_invalid(self, ref):
        s1, s2 = counterexample_pair()
        assert not geodesic_midpoint_diagnostic(s1, s2, ref).in_embedding_space

    def test_resolution_floor(self):
        with pytest.raises(ValidationError):
            counterexample_pair(3)


class TestFigureSignals:
    def test_fig2_top_starts_at_zero_signal(self):
        zero, sine = figure_signals("fig2_top")
        assert np.all(zero.values == 0.0)
        assert l1_norm(sine) == pytest.approx(2 / np.pi, abs=1e-4)

    def test_fig3_top_masses(self):
        s1, s2 = figure_signals("fig3_top")
        for s in (s1, s2):
            pos, neg = jordan_decompose(s)
            assert pos.mass == pytest.approx(0.5, abs=2e-3)
            assert neg.mass == pytest.approx(0.5, abs=2e-3)

    def test_fig2_bottom_second_is_normalized_warp(self):
        s, warped = figure_signals("fig2_bottom")
        expected = apply_warp(s, Warp.power(2.0, normalize=True))
        assert np.array_equal(warped.values, expected.values)

    def test_fig3_bottom_drops_jacobian(self):
        s, warped = figure_signals("fig3_bottom")
        expected = apply_warp(s, Warp.power(2.0, normalize=False))
        assert np.array_equal(warped.values, expected.values)

    def test_unknown_figure_rejected(self):
        with pytest.raises(ValidationError, match="unknown figure"):
            figure_signals("fig9")

    def test_resolution_floor(self):
        with pytest.raises(ValidationError):
            figure_signals("fig2_top", 50)

"""d_m, perturbations, expansion ratios and η-sweeps."""
import logging

import numpy as np
import pytest

from approx_discontinuity.data_utils import Dataset
from approx_discontinuity.errors import (
    ConfigError,
    ContractError,
    InstabilityError,
    ParameterError,
    SweepError,
)
from approx_discontinuity.metrics import (
    AutoencoderProbe,
    ClassifierProbe,
    DenoiserProbe,
    DiscriminatorProbe,
    EtaSweepConfig,
    GeneratorProbe,
    ModelProbe,
    ProbeTarget,
    composite_ratio,
    default_eta_grid,
    eta_sweep,
    expansion_adversarial,
    expansion_random,
    expansion_ratio,
    fgsm_perturb,
    growth_factor,
    invert_by_nearest_output,
    min_pairwise_distance,
    min_pairwise_output_distance,
    random_perturb,
    rank_correlation,
    trend_statistic,
)
from approx_discontinuity.models import DiffusionConfig, ModelSpec, build_mlp
from conftest import linear_model


class _FirstSeedBlind(ProbeTarget):
    """Identity map whose outputs for the first noise seed are all NaN (single-threaded sweep order)."""

    def __init__(self, width: int):
        super().__init__()
        self.width = width
        self.calls = 0

    @property
    def input_dim(self) -> int:
        return self.width

    def outputs(self, x, dropout_seeds=None):
        # call 1 is the base pass; then per eta: adversarial, seed 0, seed 1
        self.calls += 1
        if self.calls > 1 and (self.calls - 2) % 3 == 1:
            return np.full(np.shape(x), np.nan)
        return np.array(x, dtype=np.float64, copy=True)

    def input_gradient(self, x, targets, dropout_seeds=None):
        return np.ones_like(x)


def _naive_min(outputs):
    best, pair = np.inf, None
    for i in range(len(outputs)):
        for j in range(i + 1, len(outputs)):
            d = float(np.sum(np.abs(outputs[i] - outputs[j])))
            if d < best:
                best, pair = d, (i, j)
    return best, pair


def _smooth_classifier(seed=0, input_dim=8, classes=3):
    return build_mlp(ModelSpec(input_dim, (16, 16), classes, "tanh", "softmax", init_seed=seed))


class TestMinPairwiseDistance:
    def test_worked_example(self):
        d_m, pair = min_pairwise_distance(np.array([[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]]))
        assert d_m == 1.0
        assert pair == (0, 1)

    def test_ties_report_first_pair(self):
        d_m, pair = min_pairwise_distance(np.array([[0.0], [1.0], [2.0]]))
        assert d_m == 1.0
        assert pair == (0, 1)

    def test_matches_double_loop_exactly(self, rng):
        outputs = rng.standard_normal((64, 10))
        expected = _naive_min(outputs)
        for block_rows, threads in ((64, 1), (7, 1), (5, 3), (1, 2)):
            assert min_pairwise_distance(outputs, block_rows=block_rows, threads=threads) == expected

    def test_needs_two_rows(self):
        with pytest.raises(ContractError):
            min_pairwise_distance(np.zeros((1, 3)))

    def test_through_a_model(self):
        model = linear_model(4.0 * np.eye(2))
        data = Dataset(np.array([[0.0, 0.0], [0.25, 0.0], [0.75, 0.0]]), np.zeros(3), "line", 1)
        result = min_pairwise_output_distance(model, data, block_rows=2)
        assert result.d_m == 1.0
        assert result.pair == (0, 1)
        assert result.count == 3
        assert not result.duplicates

    def test_duplicates_give_zero_and_warn(self, caplog):
        model = linear_model(np.eye(2))
        data = Dataset(np.array([[0.1, 0.2], [0.4, 0.4], [0.1, 0.2]]), np.zeros(3), "dups", 1)
        with caplog.at_level(logging.WARNING, logger="approx_discontinuity.metrics"):
            result = min_pairwise_output_distance(model, data)
        assert result.d_m == 0.0
        assert result.pair == (0, 2)
        assert result.duplicates
        assert "duplicate" in caplog.text

    def test_nearest_output_inversion(self, rng):
        outputs = rng.standard_normal((20, 3))
        assert all(invert_by_nearest_output(outputs, outputs[i]) == i for i in range(20))


class TestFgsm:
    def _model(self):
        # mse loss against -0.5 at x = 0 has input gradient exactly w
        return linear_model(np.array([[0.5], [-2.0], [0.0]]))

    def test_worked_example(self):
        x_a = fgsm_perturb(self._model(), np.zeros(3), np.array([-0.5]), "mse", 0.1)
        np.testing.assert_array_equal(x_a, [0.1, -0.1, 0.0])

    def test_zero_eta_returns_input(self):
        x = np.array([0.2, 0.3, 0.4])
        np.testing.assert_array_equal(fgsm_perturb(self._model(), x, np.array([1.0]), "mse", 0.0), x)

    def test_zero_gradient_returns_input(self):
        model = self._model()
        x = np.array([0.2, 0.3, 0.4])
        target = model.predict(x)
        np.testing.assert_array_equal(fgsm_perturb(model, x, target, "mse", 0.1), x)

    def test_negative_eta(self):
        with pytest.raises(ParameterError):
            fgsm_perturb(self._model(), np.zeros(3), np.array([0.0]), "mse", -0.1)

    def test_no_clipping_by_default(self):
        x_a = fgsm_perturb(self._model(), np.zeros(3), np.array([-0.5]), "mse", 0.1)
        assert x_a.min() < 0.0
        clipped = fgsm_perturb(self._model(), np.zeros(3), np.array([-0.5]), "mse", 0.1, clip=True)
        np.testing.assert_array_equal(clipped, [0.1, 0.0, 0.0])

    def test_first_order_loss_increase(self):
        rng = np.random.default_rng(3)
        model = _smooth_classifier()
        probe = ClassifierProbe(model)
        x = rng.random((100, 8))
        labels = rng.integers(0, 3, size=100)
        x_a = fgsm_perturb(probe, x, labels, None, 1e-4)
        increased = probe.sample_losses(x_a, labels) > probe.sample_losses(x, labels)
        assert increased.mean() >= 0.95


class TestRandomPerturb:
    def test_noise_statistics(self):
        x = np.zeros(100000)
        step = (random_perturb(x, 1e-3, 5) - x) / 1e-3
        assert abs(step.mean()) < 0.02
        assert abs(step.std() - 1.0) < 0.02

    def test_l1_size(self):
        x = np.full(784, 0.5)
        moved = np.abs(random_perturb(x, 1e-5, 0) - x).sum()
        expected = 1e-5 * 784 * np.sqrt(2 / np.pi)
        assert abs(moved - expected) < 0.1 * expected

    def test_deterministic(self):
        x = np.linspace(0, 1, 10)
        np.testing.assert_array_equal(random_perturb(x, 0.1, 3), random_perturb(x, 0.1, 3))
        assert not np.array_equal(random_perturb(x, 0.1, 3), random_perturb(x, 0.1, 4))

    @pytest.mark.parametrize("eta", [0.0, -1e-3])
    def test_requires_positive_eta(self, eta):
        with pytest.raises(ParameterError):
            random_perturb(np.zeros(3), eta, 0)


class TestExpansion:
    def test_identity_model_expands_by_one(self, rng):
        model = linear_model(np.eye(5))
        x = rng.random(5)
        assert expansion_adversarial(model, x, x + rng.standard_normal(5)) == pytest.approx(1.0)

    def test_linear_model_independent_of_eta(self, rng):
        w = rng.standard_normal((6, 4))
        model = linear_model(w)
        x = rng.random(6)
        d = np.sign(rng.standard_normal(6))
        values = [expansion_adversarial(model, x, x + eta * d) for eta in (1e-1, 1e-3, 1e-5)]
        np.testing.assert_allclose(values, values[0], rtol=1e-6)
        assert values[0] == pytest.approx(np.abs(d @ w).sum() / np.abs(d).sum(), rel=1e-6)

    def test_unchanged_input_is_unstable(self):
        model = linear_model(np.eye(3))
        with pytest.raises(InstabilityError):
            expansion_adversarial(model, np.ones(3) * 0.5, np.ones(3) * 0.5)

    def test_constant_model_has_zero_expansion(self, rng):
        model = linear_model(np.zeros((3, 2)), [0.3, 0.3])
        x = rng.random(3)
        assert expansion_random(model, x, random_perturb(x, 1e-2, 1)) == 0.0

    def test_batch_returns_one_value_per_row(self, rng):
        model = linear_model(np.eye(3))
        x = rng.random((4, 3))
        assert expansion_random(model, x, x + 0.1).shape == (4,)

    def test_adversarial_and_random_are_the_same_measurement(self, rng):
        model = _smooth_classifier()
        x = rng.random(8)
        y = x + 1e-3 * rng.standard_normal(8)
        assert expansion_adversarial(model, x, y) == expansion_random(model, x, y)

    @pytest.mark.parametrize("e_a,e_n,expected", [(2.0, 1.0, 2.0), (1.0, 1.0, 1.0), (0.5, 2.0, 0.25)])
    def test_ratio(self, e_a, e_n, expected):
        assert expansion_ratio(e_a, e_n) == expected

    def test_ratio_with_zero_random_expansion(self):
        with pytest.raises(InstabilityError):
            expansion_ratio(1.0, 0.0)
        with pytest.raises(InstabilityError):
            expansion_ratio(np.nan, 1.0)

    def test_composite_ratio_agrees(self, rng):
        model = _smooth_classifier(seed=5)
        probe = ClassifierProbe(model)
        for _ in range(10):
            x = rng.random(8)
            x_a = fgsm_perturb(probe, x, np.array([1]), None, 1e-3)
            x_n = random_perturb(x, 1e-3, int(rng.integers(1000)))
            out, out_a, out_n = model.predict(x), model.predict(x_a), model.predict(x_n)
            r = expansion_ratio(expansion_adversarial(model, x, x_a), expansion_random(model, x, x_n))
            assert composite_ratio(out, out_a, out_n, x, x_a, x_n) == pytest.approx(r, rel=1e-12)

    def test_ratio_invariant_to_output_scale(self, rng):
        model = build_mlp(ModelSpec(6, (10,), 3, "relu", "identity", init_seed=2))
        scaled = model.copy()
        params = scaled.parameters()
        params[-2] = params[-2] * 3.7
        params[-1] = params[-1] * 3.7
        scaled.set_parameters(params)
        x = rng.random(6)
        x_a = x + 1e-2 * np.sign(rng.standard_normal(6))
        x_n = random_perturb(x, 1e-2, 0)
        r = expansion_ratio(expansion_adversarial(model, x, x_a), expansion_random(model, x, x_n))
        r_scaled = expansion_ratio(expansion_adversarial(scaled, x, x_a),
                                   expansion_random(scaled, x, x_n))
        assert r_scaled == pytest.approx(r, rel=1e-9)


class TestProbes:
    def test_autoencoder_targets_are_inputs(self, rng):
        probe = AutoencoderProbe(linear_model(np.eye(3)))
        x = rng.random((2, 3))
        np.testing.assert_array_equal(probe.default_targets(x), x)
        np.testing.assert_array_equal(probe.input_gradient(x, x), np.zeros((2, 3)))

    def test_discriminator_targets(self):
        probe = DiscriminatorProbe(build_mlp(ModelSpec(3, (4,), 1, "relu", "sigmoid")))
        np.testing.assert_array_equal(probe.default_targets(np.zeros((2, 3))), np.ones((2, 1)))

    def test_model_probe_without_loss(self):
        with pytest.raises(ContractError):
            ModelProbe(linear_model(np.eye(2)), None).input_gradient(np.zeros((1, 2)), None)

    def test_denoiser_probe_drops_timestep_column(self, rng):
        dcfg = DiffusionConfig(steps=50)
        model = build_mlp(ModelSpec(5, (8,), 4, "tanh", "identity"))
        probe = DenoiserProbe(model, dcfg, 10)
        assert probe.input_dim == 4
        x_t, eps = probe.noisy_inputs(rng.random((3, 4)), seed=1)
        assert probe.input_gradient(x_t, eps).shape == (3, 4)
        np.testing.assert_array_equal(probe.outputs(x_t), model.predict(dcfg.encode(x_t, 10)))

    @pytest.mark.parametrize("timestep", [0, 51])
    def test_denoiser_probe_timestep_range(self, timestep):
        model = build_mlp(ModelSpec(5, (8,), 4))
        with pytest.raises(ConfigError):
            DenoiserProbe(model, DiffusionConfig(steps=50), timestep)

    def test_generator_gradient_matches_finite_differences(self, rng):
        generator = build_mlp(ModelSpec(3, (6,), 4, "tanh", "tanh", init_seed=1, rescale_output=True))
        discriminator = build_mlp(ModelSpec(4, (5,), 1, "tanh", "sigmoid", init_seed=2))
        probe = GeneratorProbe(generator, discriminator)
        z = rng.standard_normal((1, 3))

        def generator_loss(v):
            p = discriminator.predict(generator.predict(v))
            return float(-np.mean(np.log(p)))

        analytic = probe.input_gradient(z)
        h = 1e-5
        numeric = np.zeros(3)
        for k in range(3):
            up, down = z.copy(), z.copy()
            up[0, k] += h
            down[0, k] -= h
            numeric[k] = (generator_loss(up) - generator_loss(down)) / (2 * h)
        np.testing.assert_allclose(analytic[0], numeric, rtol=1e-4, atol=1e-8)


class TestEtaGrid:
    def test_default_grid(self):
        grid = default_eta_grid()
        assert len(grid) == 13
        assert grid[0] == pytest.approx(1e-1)
        assert grid[-1] == pytest.approx(1e-5)
        assert all(a > b for a, b in zip(grid, grid[1:]))

    def test_grid_must_decrease(self):
        with pytest.raises(ConfigError):
            EtaSweepConfig(eta_grid=(1e-3, 1e-2))
        with pytest.raises(ConfigError):
            EtaSweepConfig(eta_grid=(1e-2, 0.0))

    def test_values_below_floor_are_dropped(self, caplog):
        with caplog.at_level(logging.WARNING, logger="approx_discontinuity.metrics"):
            cfg = EtaSweepConfig(eta_grid=(1e-2, 1e-6, 1e-8))
        assert cfg.eta_grid == (1e-2, 1e-6)
        assert "1e-08" in caplog.text

    def test_noise_seeds(self):
        assert EtaSweepConfig(seed=10, num_noise_seeds=3).noise_seeds == (10, 11, 12)


class TestEtaSweep:
    def test_linear_model_has_constant_ratio(self, rng):
        model = linear_model(rng.standard_normal((6, 4)))
        x = rng.random((20, 6))
        targets = rng.standard_normal((20, 4))
        cfg = EtaSweepConfig(num_inputs=20, num_noise_seeds=3)
        result = eta_sweep(model, x, targets, cfg, loss_kind="mse")
        assert result.mean_r.shape == (13, 3)
        for j in range(3):
            np.testing.assert_allclose(result.mean_r[:, j], result.mean_r[0, j], rtol=1e-6)
        assert result.instability_count == 0
        assert growth_factor(result) == pytest.approx(1.0, rel=1e-6)

    def test_all_discarded_raises(self, rng):
        model = linear_model(rng.standard_normal((3, 2)))
        x = rng.random((5, 3))
        cfg = EtaSweepConfig(num_inputs=5, num_noise_seeds=2)
        with pytest.raises(SweepError) as excinfo:
            eta_sweep(model, x, model.predict(x), cfg, loss_kind="mse")
        assert excinfo.value.eta == pytest.approx(1e-1)
        assert excinfo.value.discarded == 10
        assert excinfo.value.total == 10

    def test_one_noise_seed_fully_discarded_raises(self, rng):
        x = rng.random((4, 3))
        cfg = EtaSweepConfig(eta_grid=(1e-1, 1e-2), num_inputs=4, num_noise_seeds=2, seed=0)
        with pytest.raises(SweepError) as excinfo:
            eta_sweep(_FirstSeedBlind(3), x, None, cfg)
        assert excinfo.value.noise_seed == 0
        assert excinfo.value.discarded == 4
        assert excinfo.value.total == 4
        assert excinfo.value.eta == pytest.approx(1e-1)

    def test_thread_count_does_not_change_results(self, rng):
        model = _smooth_classifier()
        x = rng.random((12, 8))
        labels = rng.integers(0, 3, size=12)
        cfg = EtaSweepConfig(eta_grid=default_eta_grid(points=5), num_inputs=12, num_noise_seeds=2)
        one = eta_sweep(ClassifierProbe(model), x, labels, cfg)
        many = eta_sweep(ClassifierProbe(model), x, labels, cfg, threads=4)
        np.testing.assert_array_equal(one.mean_r, many.mean_r)
        np.testing.assert_array_equal(one.std_r, many.std_r)

    def test_inputs_beyond_available(self, rng):
        with pytest.raises(ContractError):
            eta_sweep(linear_model(np.eye(2)), rng.random((3, 2)), rng.random((3, 2)),
                      EtaSweepConfig(num_inputs=4), loss_kind="mse")

    def test_raw_values_and_frame(self, rng):
        model = _smooth_classifier(seed=1)
        x = rng.random((6, 8))
        labels = rng.integers(0, 3, size=6)
        cfg = EtaSweepConfig(eta_grid=(1e-1, 1e-2, 1e-3), num_inputs=6, num_noise_seeds=2,
                             seed=4, retain_raw=True)
        result = eta_sweep(ClassifierProbe(model), x, labels, cfg, input_indices=[9, 3, 5, 7, 1, 2])
        assert result.e_a.shape == (3, 2, 6)
        np.testing.assert_allclose(np.nanmean(result.e_a / result.e_n, axis=2), result.mean_r)
        assert result.input_indices == (9, 3, 5, 7, 1, 2)
        frame = result.to_frame()
        assert list(frame.columns) == ["eta", "noise_seed", "mean_r", "std_r", "n_discarded"]
        assert frame["eta"].tolist() == [1e-1, 1e-1, 1e-2, 1e-2, 1e-3, 1e-3]
        assert frame["noise_seed"].tolist() == [4, 5, 4, 5, 4, 5]
        summary = result.summary()
        assert len(summary["mean_r"]) == 3
        assert -1.0 <= summary["trend"] <= 1.0

    def test_dropout_policies(self, rng):
        model = build_mlp(ModelSpec(8, (32, 32), 3, "relu", "softmax", dropout_rate=0.3, init_seed=3))
        x = rng.random((10, 8))
        labels = rng.integers(0, 3, size=10)
        grid = (1e-1, 1e-3)
        shared = EtaSweepConfig(eta_grid=grid, num_inputs=10, num_noise_seeds=2,
                                dropout_active=True, dropout_policy="shared")
        independent = EtaSweepConfig(eta_grid=grid, num_inputs=10, num_noise_seeds=2,
                                     dropout_active=True, dropout_policy="independent")
        a = eta_sweep(ClassifierProbe(model), x, labels, shared)
        b = eta_sweep(ClassifierProbe(model), x, labels, shared)
        c = eta_sweep(ClassifierProbe(model), x, labels, independent)
        np.testing.assert_array_equal(a.mean_r, b.mean_r)
        assert not np.array_equal(a.mean_r, c.mean_r)

    def test_generator_sweep(self, rng):
        generator = build_mlp(ModelSpec(3, (8,), 5, "tanh", "tanh", rescale_output=True))
        discriminator = build_mlp(ModelSpec(5, (6,), 1, "tanh", "sigmoid"))
        z = rng.standard_normal((8, 3))
        cfg = EtaSweepConfig(eta_grid=(1e-1, 1e-2), num_inputs=8, num_noise_seeds=2)
        result = eta_sweep(GeneratorProbe(generator, discriminator), z, None, cfg)
        assert np.all(np.isfinite(result.mean_r))
        assert np.all(result.mean_r > 0)


class TestCurveStatistics:
    def test_increasing_curve_has_unit_trend(self):
        etas = [1e-1, 1e-2, 1e-3, 1e-4]
        assert trend_statistic(etas, [1.0, 2.0, 5.0, 9.0]) == pytest.approx(1.0)
        assert trend_statistic(etas, [9.0, 5.0, 2.0, 1.0]) == pytest.approx(-1.0)

    def test_constant_curve_has_zero_trend(self):
        assert trend_statistic([1e-1, 1e-2, 1e-3], [2.0, 2.0, 2.0]) == 0.0

    def test_rank_correlation_uses_average_ranks(self):
        assert rank_correlation([1, 2, 2, 3], [1, 2, 2, 3]) == pytest.approx(1.0)

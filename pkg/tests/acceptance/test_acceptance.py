"""
End-to-end Monte-Carlo checks of the estimator properties.

These run thousands of trials; select them with `pytest -m slow`.
"""
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from bayesloc.estimators.cost import TabulatedMonotone
from bayesloc.estimators.named import map_estimate, mede_estimate, mmse_estimate, mpd_estimate
from bayesloc.evaluation.algorithms import map_localizer, mede_localizer, mmse_localizer, mpd_localizer
from bayesloc.evaluation.curves import default_d_grid, expected_cost_from_curve
from bayesloc.evaluation.dominance import Dominance, dominance, pooled_tolerance
from bayesloc.evaluation.suite import evaluate_suite
from bayesloc.evaluation.table import Metric
from bayesloc.simulation.learning import learning_curve
from bayesloc.simulation.scenario import build_desk_scenario, build_floor_scenario, build_symmetric_demo
from bayesloc.simulation.synthetic import NoiseProfile, synthesize_office_traces

pytestmark = pytest.mark.slow

WORKERS = 4

OWN_METRIC = {
    "MAP": Metric.LIKELIHOOD,
    "MP(0.5)": Metric.P_EPSILON,
    "MP(3)": Metric.P_D,
    "MMSE": Metric.MSE,
    "MEDE": Metric.EDE,
}


def bayes_suite():
    return [map_localizer(), mpd_localizer(0.5), mpd_localizer(3.0), mmse_localizer(), mede_localizer()]


def captured(post, center, radius):
    return float(post.mass[post.grid.distances_from(center) <= radius + 1e-9].sum())


@pytest.fixture(scope="module")
def pool():
    with ThreadPoolExecutor(max_workers=WORKERS) as executor:
        yield executor


@pytest.fixture(scope="module")
def desk():
    return build_desk_scenario()


@pytest.fixture(scope="module")
def desk_result(desk, pool):
    return evaluate_suite(desk, bayes_suite(), 2000, 11, default_d_grid(desk.grid.d_star), epsilon=0.5, d=3.0, executor=pool)


class TestAnalyticDensity:

    def test_estimates(self, analytic_post):
        assert map_estimate(analytic_post).location.x == pytest.approx(0.0, abs=1e-3)
        assert mmse_estimate(analytic_post).location.x == pytest.approx(2.0 / 15.0, abs=1e-3)
        assert mede_estimate(analytic_post).location.x == pytest.approx(2.0 - np.sqrt(3.5), abs=2e-3)
        for width in (0.3, 0.6, 0.9):
            assert mpd_estimate(analytic_post, width / 2).location.x == pytest.approx(width / 6, abs=2e-3)

    def test_small_window_probability_matches_map(self, analytic_post, unimodal_line):
        posts = [analytic_post] + [unimodal_line(np.random.default_rng(seed)) for seed in range(20)]
        for post in posts:
            eps = 2 * post.grid.resolution
            p_map = captured(post, map_estimate(post).location, eps)
            p_mp = captured(post, mpd_estimate(post, eps).location, eps)
            assert abs(p_map - p_mp) <= 0.01


class TestDeskTable:

    def test_each_estimator_wins_its_own_metric(self, desk_result):
        table = desk_result.table
        for name, metric in OWN_METRIC.items():
            assert table.value(name, metric) == pytest.approx(1.0, abs=1e-12), name
        assert table.best_row(Metric.EDE) == "MEDE"
        assert table.best_row(Metric.MSE) == "MMSE"

    def test_off_diagonal_entries_within_two_standard_errors(self, desk_result):
        table = desk_result.table
        nse = table.normalized_standard_errors
        for metric in table.metrics:
            j = table.column(metric)
            for name in table.rows:
                if OWN_METRIC[name] is metric:
                    continue
                i = table.row(name)
                if metric.higher_is_better:
                    assert table.normalized[i, j] <= 1.0 + 2 * nse[i, j] + 1e-12, (name, metric)
                else:
                    assert table.normalized[i, j] >= 1.0 - 2 * nse[i, j] - 1e-12, (name, metric)


class TestThetaOrdering:

    def test_mede_closest_to_envelope(self, desk_result):
        mede = desk_result.curves["MEDE"]
        for name in ("MAP", "MMSE", "MP(3)"):
            band = np.trapezoid(pooled_tolerance(mede, desk_result.curves[name]), desk_result.d_grid)
            assert desk_result.theta["MEDE"] <= desk_result.theta[name] + band, name


class TestEnvelope:

    def test_envelope_above_every_curve(self, desk_result):
        assert desk_result.d_grid.size == 64
        for curve in desk_result.curves.values():
            tol = pooled_tolerance(desk_result.fstar, curve)
            assert np.all(desk_result.fstar.values >= curve.values - tol), curve.name

    def test_symmetric_demo_is_traced_by_map(self, pool):
        scenario = build_symmetric_demo(resolution=0.5)
        d_grid = default_d_grid(scenario.grid.d_star)
        result = evaluate_suite(scenario, [map_localizer(), mmse_localizer(), mede_localizer()], 1000, 3, d_grid, executor=pool)
        gap = np.abs(result.fstar.values - result.curves["MAP"].values)
        assert np.all(gap <= 3 * result.fstar.standard_error() + 1e-12)


class TestDominanceImpliesCostOrdering:

    def test_random_monotone_costs(self, pool):
        scenario = build_desk_scenario(resolution=1.0)
        d_grid = default_d_grid(scenario.grid.d_star)
        rng = np.random.default_rng(5)
        costs = [TabulatedMonotone.from_samples(d_grid, np.cumsum(rng.exponential(size=d_grid.size))) for _ in range(100)]
        steps = [np.diff(g(d_grid)) for g in costs]
        violations = []
        for seed in range(50):
            result = evaluate_suite(scenario, bayes_suite(), 200, seed, d_grid, executor=pool)
            for a in result.curves.values():
                for b in result.curves.values():
                    if a is b or not dominance(a, b).kind.a_dominates:
                        continue
                    tol = pooled_tolerance(a, b)
                    for g, step in zip(costs, steps):
                        slack = float(step @ tol[:-1]) + 1e-12
                        if expected_cost_from_curve(a, g) > expected_cost_from_curve(b, g) + slack:
                            violations.append((seed, a.name, b.name))
        assert violations == []


class TestNonDominance:

    def test_no_estimator_strictly_dominated_on_floor(self, pool):
        scenario = build_floor_scenario(seed=0)
        result = evaluate_suite(scenario, bayes_suite(), 5000, 21, default_d_grid(scenario.grid.d_star), executor=pool)
        curves = list(result.curves.values())
        for a in curves:
            for b in curves:
                if a is not b:
                    assert dominance(a, b).kind is not Dominance.STRICTLY_DOMINATES, (a.name, b.name)


class TestFingerprinting:

    @staticmethod
    def _errors(profile: NoiseProfile, seed: int) -> dict[str, float]:
        data = synthesize_office_traces(profile, scans_per_cell=60, tx_count=10, seed=seed)
        curve = learning_curve(data, fractions=(1.0,), repeats=2, seed=seed, algorithms=("MAP", "MMSE", "MEDE", "FING"))
        return {name: float(values[0]) for name, values in curve.mean_errors.items()}

    def test_bayesian_beats_fing_on_noisy_office(self):
        runs = 50
        wins = 0
        for seed in range(runs):
            errors = self._errors(NoiseProfile.HIGH, seed)
            wins += min(errors["MAP"], errors["MMSE"], errors["MEDE"]) < errors["FING"]
        assert wins >= 0.95 * runs

    def test_fing_competitive_on_quiet_office(self):
        fing, bayes = [], []
        for seed in range(10):
            errors = self._errors(NoiseProfile.LOW, seed)
            fing.append(errors["FING"])
            bayes.append(min(errors["MAP"], errors["MMSE"], errors["MEDE"]))
        assert np.mean(fing) <= 1.2 * np.mean(bayes)


class TestLearning:

    def test_error_falls_with_more_training_data(self, pool):
        data = synthesize_office_traces(NoiseProfile.HIGH, scans_per_cell=40, tx_count=10, seed=3)
        curve = learning_curve(data, fractions=(0.2, 0.4, 0.6, 0.8, 1.0), repeats=100, seed=3, algorithms=("MAP", "MMSE", "MEDE"), executor=pool)
        for name in ("MAP", "MMSE", "MEDE"):
            assert curve.slopes[name] < 0, name


class TestReproducibility:

    def test_worker_count_does_not_change_results(self, desk):
        d_grid = default_d_grid(desk.grid.d_star, 16)
        suite = [map_localizer(), mmse_localizer(), mede_localizer()]
        serial = evaluate_suite(desk, suite, 60, 2, d_grid)
        for workers in (2, 8):
            with ThreadPoolExecutor(max_workers=workers) as executor:
                threaded = evaluate_suite(desk, suite, 60, 2, d_grid, executor=executor)
            np.testing.assert_array_equal(threaded.fstar.values, serial.fstar.values)
            np.testing.assert_array_equal(threaded.table.raw, serial.table.raw)
            for name, curve in serial.curves.items():
                np.testing.assert_array_equal(threaded.curves[name].values, curve.values)

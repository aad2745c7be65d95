from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from bayesloc.core.errors import InvalidParameters
from bayesloc.evaluation.algorithms import bayes_suite, map_localizer, mede_localizer
from bayesloc.evaluation.curves import default_d_grid, error_cdf, fstar
from bayesloc.evaluation.suite import evaluate_suite
from bayesloc.evaluation.table import performance_table


@pytest.fixture
def d_grid(small_scenario):
    return default_d_grid(small_scenario.grid.d_star, 10)


class TestEvaluateSuite:

    def test_matches_standalone_runs(self, small_scenario, d_grid):
        suite = bayes_suite(epsilon=0.5, d=2.0)
        result = evaluate_suite(small_scenario, suite, 30, 6, d_grid, epsilon=0.5, d=2.0)
        assert list(result.curves) == [a.name for a in suite]
        for algo in suite:
            alone = error_cdf(algo, small_scenario, 30, 6, d_grid)
            np.testing.assert_array_equal(result.curves[algo.name].values, alone.values)
        np.testing.assert_array_equal(result.fstar.values, fstar(small_scenario, d_grid, 30, 6).values)
        table = performance_table(small_scenario, suite, trials=30, seed=6, epsilon=0.5, d=2.0)
        np.testing.assert_allclose(result.table.raw, table.raw)

    def test_theta_not_meaningfully_negative(self, small_scenario, d_grid):
        result = evaluate_suite(small_scenario, bayes_suite(), 40, 1, d_grid)
        for name, curve in result.curves.items():
            assert result.theta[name] >= -1e-9 - 2.0 * np.trapezoid(curve.standard_error(), d_grid)

    def test_attainability_summary(self, small_scenario, d_grid):
        result = evaluate_suite(small_scenario, bayes_suite(), 20, 2, d_grid)
        assert 0.0 <= result.attainable_fraction <= 1.0
        assert result.mean_attainable_size >= 0.0
        assert result.trials == 20 and result.failures == 0
        np.testing.assert_array_equal(result.d_grid, d_grid)

    def test_executor_determinism(self, small_scenario, d_grid):
        serial = evaluate_suite(small_scenario, bayes_suite(), 24, 8, d_grid)
        with ThreadPoolExecutor(max_workers=3) as pool:
            threaded = evaluate_suite(small_scenario, bayes_suite(), 24, 8, d_grid, executor=pool)
        for name in serial.curves:
            np.testing.assert_array_equal(serial.curves[name].values, threaded.curves[name].values)
        np.testing.assert_array_equal(serial.table.raw, threaded.table.raw)

    def test_empty_suite(self, small_scenario):
        with pytest.raises(InvalidParameters):
            evaluate_suite(small_scenario, [], 5, 0)

    def test_duplicate_names(self, small_scenario):
        with pytest.raises(InvalidParameters):
            evaluate_suite(small_scenario, [map_localizer(), map_localizer()], 5, 0)

    def test_suite_order(self):
        assert [a.name for a in bayes_suite(0.5, 3.0)] == ["MAP", "MP(0.5)", "MP(3)", "MMSE", "MEDE"]
        assert [a.name for a in bayes_suite(1.0, 1.0)] == ["MAP", "MP(1)", "MMSE", "MEDE"]
        assert mede_localizer().name == "MEDE"

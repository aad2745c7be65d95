import numpy as np
import pytest

from bayesloc.core.density import DensityGrid, gaussian_prior, posterior, uniform_prior
from bayesloc.core.errors import AllZeroLikelihood, InvalidDensity
from bayesloc.core.geometry import Grid, Location, Space
from bayesloc.core.observation import ObservationVector
from bayesloc.infra.model.observation_model import FlatModel


class TableModel:
    """Fixed log-likelihoods, whatever the observation."""

    def __init__(self, loglik):
        self._loglik = np.asarray(loglik, dtype=np.float64)

    def loglik(self, observation, grid):
        return self._loglik

    def sample(self, location, rng):
        return ObservationVector({"t": 0.0})


OBS = ObservationVector({"t": -50.0})


class TestUniformPrior:

    def test_four_points(self, unit_space):
        np.testing.assert_allclose(uniform_prior(unit_space).mass, 0.25)

    def test_desk_grid(self):
        prior = uniform_prior(Space.of_size(16.0, 16.0, 0.25))
        np.testing.assert_allclose(prior.mass, 1 / 4225)
        assert prior.total == pytest.approx(1.0, abs=1e-12)


class TestDensityGrid:

    def test_negative_mass_rejected(self, line_grid):
        with pytest.raises(InvalidDensity):
            DensityGrid(line_grid, [0.5, -0.1, 0.2, 0.2, 0.2])

    def test_wrong_length_rejected(self, line_grid):
        with pytest.raises(InvalidDensity):
            DensityGrid(line_grid, [1.0])

    def test_zero_mass_cannot_normalize(self, line_grid):
        with pytest.raises(InvalidDensity):
            DensityGrid(line_grid, np.zeros(line_grid.size)).normalized()

    def test_mean(self):
        grid = Grid.from_locations([Location(0, 0), Location(2, 0)])
        assert DensityGrid(grid, [0.5, 0.5]).mean() == Location(1.0, 0.0)

    def test_gaussian_prior_peaks_at_center(self):
        space = Space(-2.0, 2.0, -2.0, 2.0, 0.5)
        prior = gaussian_prior(space, Location(0.0, 0.0), 1.0)
        assert prior.grid.location(int(np.argmax(prior.mass))) == Location(0.0, 0.0)
        assert prior.is_normalized()


class TestPosterior:
    """Bayes rule on the grid."""

    def test_two_point_bayes_ratio(self):
        grid = Grid.from_locations([Location(0, 0), Location(1, 0)])
        post = posterior(uniform_prior(grid), TableModel(np.log([0.2, 0.6])), OBS)
        np.testing.assert_allclose(post.mass, [0.25, 0.75], atol=1e-12)

    def test_point_mass_prior_absorbs_update(self, line_grid, point_mass):
        prior = point_mass(line_grid, 3)
        post = posterior(prior, TableModel([-1.0, -2.0, -0.5, -7.0, -3.0]), OBS)
        np.testing.assert_array_equal(post.mass, prior.mass)

    def test_symmetric_likelihood_peaks_at_centre(self):
        grid = Grid.from_line(-2.0, 2.0, 0.25)
        loglik = -0.5 * (grid.points[:, 0] - 0.5) ** 2
        post = posterior(uniform_prior(grid), TableModel(loglik), OBS)
        assert grid.location(int(np.argmax(post.mass))) == Location(0.5, 0.0)

    def test_all_impossible_raises(self, line_grid):
        with pytest.raises(AllZeroLikelihood):
            posterior(uniform_prior(line_grid), TableModel(np.full(line_grid.size, -np.inf)), OBS)

    def test_normalized_for_random_inputs(self):
        rng = np.random.default_rng(11)
        grid = Space.of_size(5.0, 5.0, 0.5).grid()
        for _ in range(20):
            prior = DensityGrid.from_weights(grid, rng.random(grid.size))
            post = posterior(prior, TableModel(rng.normal(0, 50, grid.size)), OBS)
            assert post.total == pytest.approx(1.0, abs=1e-9)

    def test_likelihood_scale_invariance(self):
        rng = np.random.default_rng(5)
        grid = Space.of_size(4.0, 4.0, 0.5).grid()
        prior = DensityGrid.from_weights(grid, rng.random(grid.size))
        loglik = rng.normal(0, 3, grid.size)
        a = posterior(prior, TableModel(loglik), OBS)
        b = posterior(prior, TableModel(loglik + np.log(123.4)), OBS)
        np.testing.assert_allclose(a.mass, b.mass, atol=1e-9)

    def test_flat_likelihood_returns_prior(self):
        grid = Space.of_size(4.0, 4.0, 0.5).grid()
        prior = DensityGrid.from_weights(grid, np.random.default_rng(2).random(grid.size))
        post = posterior(prior, FlatModel(-17.0), OBS)
        np.testing.assert_allclose(post.mass, prior.mass, atol=1e-12)

    def test_many_transmitters_do_not_underflow(self, line_grid):
        post = posterior(uniform_prior(line_grid), TableModel([-5000.0, -5001.0, -5002.0, -6000.0, -9000.0]), OBS)
        assert post.mass[0] > post.mass[1] > post.mass[2] > 0

"""Shared fixtures: small grids, posteriors and scenarios that keep tests fast."""

import numpy as np
import pytest

from bayesloc.core.density import DensityGrid, uniform_prior
from bayesloc.core.geometry import Grid, Location, Space
from bayesloc.infra.model.pathloss_model import PathLossModel, PathLossParams, TransmitterSet
from bayesloc.simulation.scenario import Scenario, ScenarioMode, analytic_posterior


@pytest.fixture
def unit_space() -> Space:
    return Space(0.0, 1.0, 0.0, 1.0, 1.0)


@pytest.fixture
def line_grid() -> Grid:
    return Grid.from_line(0.0, 4.0, 1.0)


@pytest.fixture(scope="session")
def analytic_post() -> DensityGrid:
    return analytic_posterior(0.001)


@pytest.fixture
def small_params() -> PathLossParams:
    return PathLossParams(k_db=-40.0, eta=3.0, sigma_db=4.0, d0=1.0, pt_dbm=0.0)


@pytest.fixture
def corner_txs() -> TransmitterSet:
    return TransmitterSet.from_locations([
        Location(0.3, 0.4), Location(7.6, 0.2), Location(0.1, 7.7), Location(7.8, 7.9)
    ])


@pytest.fixture
def small_scenario(small_params, corner_txs) -> Scenario:
    """8 m x 8 m at 1 m with four corner transmitters: 81 grid points."""
    space = Space.of_size(8.0, 8.0, 1.0)
    return Scenario("small", uniform_prior(space), PathLossModel(small_params, corner_txs), ScenarioMode.PATH_LOSS, space, corner_txs, small_params)


def random_unimodal_line(rng: np.random.Generator, resolution: float = 0.01) -> DensityGrid:
    """Smooth unimodal density on [-1, 1]: a Gaussian bump with random centre and width."""
    grid = Grid.from_line(-1.0, 1.0, resolution)
    x = grid.points[:, 0]
    center = rng.uniform(-0.5, 0.5)
    width = rng.uniform(0.15, 0.5)
    return DensityGrid.from_weights(grid, np.exp(-0.5 * ((x - center) / width) ** 2))


@pytest.fixture
def unimodal_line():
    """Factory for random smooth unimodal 1-D posteriors."""
    return random_unimodal_line


def pinned_density(grid: Grid, index: int) -> DensityGrid:
    mass = np.zeros(grid.size)
    mass[index] = 1.0
    return DensityGrid(grid, mass)


@pytest.fixture
def point_mass():
    """Factory for densities with all their mass on one grid point."""
    return pinned_density

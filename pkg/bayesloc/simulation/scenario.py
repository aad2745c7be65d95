import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from bayesloc.core.density import DensityGrid, gaussian_prior, uniform_prior
from bayesloc.core.errors import InvalidSpace
from bayesloc.core.geometry import Grid, Location, Space
from bayesloc.infra.model.fingerprint_model import FingerprintDb, FingerprintModel
from bayesloc.infra.model.observation_model import FlatModel, ObservationModel
from bayesloc.infra.model.pathloss_model import PathLossModel, PathLossParams, TransmitterSet

logger = logging.getLogger(__name__)

# Large-office setting: 50 m x 70 m, 16 random transmitters, fitted log-normal model.
FLOOR_WIDTH, FLOOR_HEIGHT = 50.0, 70.0
FLOOR_TX_COUNT = 16
FLOOR_PARAMS = PathLossParams(k_db=-39.13, eta=3.93, sigma_db=16.16, d0=1.0, pt_dbm=16.0)
FLOOR_RESOLUTION = 1.0

DESK_SIZE = 16.0
DESK_PARAMS = PathLossParams(k_db=-40.0, eta=3.0, sigma_db=4.0, d0=1.0, pt_dbm=0.0)
DESK_RESOLUTION = 0.5
DESK_TRANSMITTERS = (Location(2.1, 2.3), Location(13.9, 2.2), Location(2.2, 13.8), Location(13.7, 13.9))

LINE_LENGTH = 40.0
LINE_TX_SPACING = 5.0
LINE_TX_OFFSET = 1.0
LINE_PARAMS = PathLossParams(k_db=-40.0, eta=3.0, sigma_db=6.0, d0=1.0, pt_dbm=0.0)

SYMMETRIC_HALF_WIDTH = 4.0
SYMMETRIC_SIGMA = 1.5


class ScenarioMode(Enum):
  PATH_LOSS = "path-loss"
  FINGERPRINT = "fingerprint"
  FLAT = "flat"


@dataclass(frozen=True, eq=False)
class Scenario:
  """
  A complete localization setting: where the receiver may be, what it believes
  beforehand, and how observations arise.

  Attributes:
      name (str): Label used in logs and manifests.
      prior (DensityGrid): Prior over the candidate grid.
      model (ObservationModel): Observation model scoring and sampling readings.
      mode (ScenarioMode): Kind of observation model.
      space (Space | None): Rectangular region, when the grid discretizes one.
      txs (TransmitterSet | None): Transmitters of a path-loss scenario.
      params (PathLossParams | None): Parameters of a path-loss scenario.
      db (FingerprintDb | None): Database of a fingerprint scenario.
  """
  name: str
  prior: DensityGrid
  model: ObservationModel
  mode: ScenarioMode
  space: Space | None = None
  txs: TransmitterSet | None = None
  params: PathLossParams | None = None
  db: FingerprintDb | None = None

  def __post_init__(self):
    if self.space is not None and self.txs is not None:
      outside = [tx_id for tx_id, loc in self.txs if not self.space.contains(loc)]
      if outside:
        raise InvalidSpace(f"Transmitters {outside} lie outside the scenario space")

  @property
  def grid(self) -> Grid:
    return self.prior.grid


def random_transmitters(space: Space, count: int, seed: int) -> TransmitterSet:
  """Transmitters placed uniformly at random in a space, named tx0, tx1, ..."""
  rng = np.random.default_rng(seed)
  xs = rng.uniform(space.x_min, space.x_max, size=count)
  ys = rng.uniform(space.y_min, space.y_max, size=count)
  return TransmitterSet.from_locations(Location(float(x), float(y)) for x, y in zip(xs, ys))


def pathloss_scenario(name: str, space: Space, txs: TransmitterSet, params: PathLossParams, prior: DensityGrid | None = None) -> Scenario:
  """Log-normal path-loss scenario over a space, uniform prior unless given."""
  prior = uniform_prior(space) if prior is None else prior
  return Scenario(name, prior, PathLossModel(params, txs), ScenarioMode.PATH_LOSS, space, txs, params)


def build_floor_scenario(seed: int = 0, resolution: float = FLOOR_RESOLUTION) -> Scenario:
  """
  50 m x 70 m area with 16 randomly placed transmitters, Pt = 16 dBm,
  K = -39.13 dB, sigma = 16.16 dB and eta = 3.93.
  """
  space = Space.of_size(FLOOR_WIDTH, FLOOR_HEIGHT, resolution)
  txs = random_transmitters(space, FLOOR_TX_COUNT, seed)
  return pathloss_scenario("floor", space, txs, FLOOR_PARAMS)


def build_desk_scenario(resolution: float = DESK_RESOLUTION, params: PathLossParams = DESK_PARAMS) -> Scenario:
  """16 m x 16 m area, four transmitters near the corners, sigma = 4 dB, eta = 3."""
  space = Space.of_size(DESK_SIZE, DESK_SIZE, resolution)
  return pathloss_scenario("desk", space, TransmitterSet.from_locations(DESK_TRANSMITTERS), params)


def build_linear_scenario(resolution: float = 0.25, params: PathLossParams = LINE_PARAMS) -> Scenario:
  """
  Receiver on a 40 m line, nine transmitters evenly spaced along it and set
  1 m off the line.
  """
  grid = Grid.from_line(0.0, LINE_LENGTH, resolution)
  count = int(round(LINE_LENGTH / LINE_TX_SPACING)) + 1
  txs = TransmitterSet.from_locations(Location(i * LINE_TX_SPACING, LINE_TX_OFFSET) for i in range(count))
  return Scenario("linear", uniform_prior(grid), PathLossModel(params, txs), ScenarioMode.PATH_LOSS, txs=txs, params=params)


def build_symmetric_demo(resolution: float = 0.5, sigma: float = SYMMETRIC_SIGMA) -> Scenario:
  """
  Centered Gaussian prior in a symmetric square and an uninformative model,
  so every posterior is the same symmetric unimodal density.
  """
  h = SYMMETRIC_HALF_WIDTH
  space = Space(-h, h, -h, h, resolution)
  prior = gaussian_prior(space, space.center(), sigma)
  return Scenario("symmetric", prior, FlatModel(), ScenarioMode.FLAT, space)


def build_fingerprint_scenario(db: FingerprintDb) -> Scenario:
  """Survey locations as the grid, uniform prior, scans drawn from the smoothed histograms."""
  return Scenario("fingerprint", uniform_prior(db.grid), FingerprintModel(db), ScenarioMode.FINGERPRINT, db=db)


def analytic_density(x: np.ndarray) -> np.ndarray:
  """Piecewise-linear density on [-1, 1]: 4/5 (1 + x) left of 0, 4/5 (1 - x/2) right of it."""
  x = np.asarray(x, dtype=np.float64)
  return np.where(x < 0, 0.8 * (1.0 + x), 0.8 * (1.0 - x / 2.0))


def analytic_posterior(resolution: float = 0.001) -> DensityGrid:
  """
  The piecewise-linear 1-D density on a line grid.

  Its mode is 0, its mean 2/15, its median 2 - sqrt(3.5), and the window of
  width w capturing the most mass is centred at w / 6.
  """
  grid = Grid.from_line(-1.0, 1.0, resolution)
  return DensityGrid.from_weights(grid, analytic_density(grid.points[:, 0]))

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from numpy.typing import NDArray
from scipy.special import logsumexp

from bayesloc.core.errors import AllZeroLikelihood, InvalidDensity
from bayesloc.core.geometry import Grid, Location, Space
from bayesloc.core.observation import ObservationVector

if TYPE_CHECKING:
  from bayesloc.infra.model.observation_model import ObservationModel

logger = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityGrid:
  """
  Nonnegative mass over the points of a grid.

  Used for both the prior and the posterior over receiver location.

  Attributes:
      grid (Grid): The candidate locations.
      mass (NDArray): One nonnegative value per grid point, read-only.
  """
  grid: Grid
  mass: NDArray[np.float64]

  def __post_init__(self):
    mass = np.array(self.mass, dtype=np.float64, copy=True)
    if mass.shape != (self.grid.size,):
      raise InvalidDensity(f"Expected mass of shape ({self.grid.size},), got {mass.shape}")
    if not np.all(np.isfinite(mass)) or np.any(mass < 0):
      raise InvalidDensity("Mass must be finite and nonnegative")
    mass.setflags(write=False)
    object.__setattr__(self, "mass", mass)

  @classmethod
  def from_weights(cls, grid: Grid, weights: NDArray[np.float64]) -> "DensityGrid":
    """Normalized density proportional to the given weights."""
    return cls(grid, weights).normalized()

  @property
  def space(self) -> Space | None:
    return self.grid.space

  @property
  def total(self) -> float:
    return float(self.mass.sum())

  def is_normalized(self, tol: float = NORMALIZATION_TOL) -> bool:
    return abs(self.total - 1.0) <= tol

  def normalized(self) -> "DensityGrid":
    """
    Rescale so the mass sums to one.

    Raises:
        InvalidDensity: If the total mass is zero.
    """
    total = self.total
    if not total > 0:
      raise InvalidDensity("Cannot normalize a density with zero total mass")
    return DensityGrid(self.grid, self.mass / total)

  def mean(self) -> Location:
    x, y = self.mass @ self.grid.points
    return Location(float(x), float(y))

  def mass_at(self, location: Location) -> float:
    """Mass of the grid cell nearest to a location."""
    return float(self.mass[self.grid.nearest_index(location)])


def uniform_prior(space: Space | Grid) -> DensityGrid:
  """
  Equal mass on every grid point.

  Args:
      space (Space | Grid): The region or an explicit grid.

  Returns:
      DensityGrid: Normalized uniform density.
  """
  grid = space.grid() if isinstance(space, Space) else space
  return DensityGrid(grid, np.full(grid.size, 1.0 / grid.size))


def gaussian_prior(space: Space | Grid, center: Location, sigma: float) -> DensityGrid:
  """
  Isotropic Gaussian prior around a previous estimate, truncated to the grid.

  Raises:
      InvalidDensity: If sigma is not positive.
  """
  if not sigma > 0:
    raise InvalidDensity(f"sigma must be > 0, got {sigma}")
  grid = space.grid() if isinstance(space, Space) else space
  d = grid.distances_from(center)
  log_weights = -0.5 * (d / sigma) ** 2
  return DensityGrid(grid, np.exp(log_weights - logsumexp(log_weights))).normalized()


def posterior(prior: DensityGrid, model: "ObservationModel", o: ObservationVector) -> DensityGrid:
  """
  Bayes-rule posterior over the prior's grid.

  Likelihoods are combined with the prior in the log domain and normalized
  with log-sum-exp, so many transmitters do not underflow.

  Args:
      prior (DensityGrid): Normalized prior.
      model (ObservationModel): Scores an observation at every grid point.
      o (ObservationVector): The observation.

  Returns:
      DensityGrid: Normalized posterior on the same grid.

  Raises:
      AllZeroLikelihood: If every grid point has zero posterior weight.
  """
  loglik = np.asarray(model.loglik(o, prior.grid), dtype=np.float64)
  with np.errstate(divide="ignore"):
    log_weights = loglik + np.log(prior.mass)
  log_weights = np.where(np.isnan(log_weights), -np.inf, log_weights)
  log_norm = logsumexp(log_weights)
  if not np.isfinite(log_norm):
    raise AllZeroLikelihood(
      f"Observation from {sorted(o.tx_ids)} has zero likelihood on all {prior.grid.size} grid points"
    )
  mass = np.exp(log_weights - log_norm)
  return DensityGrid(prior.grid, mass / mass.sum())

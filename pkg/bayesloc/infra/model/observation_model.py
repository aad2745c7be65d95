from typing import Protocol

import numpy as np
from numpy.typing import NDArray

from bayesloc.core.geometry import Grid, Location
from bayesloc.core.observation import ObservationVector

# 1D array of log-likelihood values, one per grid point.
LogLikelihoods = NDArray[np.float64]

FLAT_TX_ID = "flat"


class ObservationModel(Protocol):
  """
  Interface for anything that scores an observation at candidate locations.

  Implementations must be pure: the same observation and grid always give the
  same scores, and sampling draws only from the generator it is handed.
  """

  def loglik(self, observation: ObservationVector, grid: Grid) -> LogLikelihoods:
    """
    Log-likelihood of an observation at every grid point.

    Args:
        observation (ObservationVector): RSS readings in dBm.
        grid (Grid): Candidate locations.

    Returns:
        LogLikelihoods: (n,) array; -inf marks impossible locations.
    """
    ...

  def sample(self, location: Location, rng: np.random.Generator) -> ObservationVector:
    """
    Draw one observation vector for a receiver at a location.

    Args:
        location (Location): True receiver location.
        rng (np.random.Generator): Source of randomness.

    Returns:
        ObservationVector: One simulated scan.
    """
    ...


class FlatModel:
  """
  Observation model whose likelihood is the same everywhere.

  The posterior under this model equals the prior, which makes it the
  reference for prior-only scenarios.
  """

  def __init__(self, log_value: float = 0.0):
    self._log_value = float(log_value)

  def loglik(self, observation: ObservationVector, grid: Grid) -> LogLikelihoods:
    return np.full(grid.size, self._log_value)

  def sample(self, location: Location, rng: np.random.Generator) -> ObservationVector:
    return ObservationVector({FLAT_TX_ID: 0.0})

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from bayesloc.core.density import DensityGrid
from bayesloc.core.errors import InvalidCost
from bayesloc.core.geometry import Location
from bayesloc.estimators.cost import CostFunction, SquaredDistance, WithinRadius

# Candidates whose expected cost is within TIE_TOL * max(|optimum|, 1) of the
# optimum are reported as ties.
TIE_TOL = 1e-12


@dataclass(frozen=True)
class Estimate:
  """
  Output of an estimator.

  Attributes:
      location (Location): The chosen location.
      expected_cost (float): Posterior expected cost at `location`.
      tie_set (tuple[Location, ...]): Every candidate within tie tolerance of
          the optimum, in grid order; contains `location`.
      algorithm (str): Name of the estimator that produced it.
  """
  location: Location
  expected_cost: float
  tie_set: tuple[Location, ...]
  algorithm: str = ""

  def __post_init__(self):
    if not math.isfinite(self.expected_cost):
      raise InvalidCost(f"Estimate expected cost must be finite, got {self.expected_cost}")
    if not self.tie_set:
      object.__setattr__(self, "tie_set", (self.location,))


def expected_cost(post: DensityGrid, candidate: Location, cost: CostFunction) -> float:
  """
  Posterior expected cost of reporting `candidate`.

  Args:
      post (DensityGrid): Normalized posterior.
      candidate (Location): Any location, on or off the grid.
      cost (CostFunction): Distance-error cost.

  Returns:
      float: Sum over grid points of cost(distance) * mass.
  """
  return float(cost(post.grid.distances_from(candidate)) @ post.mass)


def expected_costs(post: DensityGrid, cost: CostFunction) -> NDArray[np.float64]:
  """
  Expected cost of every grid point as a candidate.

  Squared distance uses the closed form |c - mean|^2 + spread; radius costs
  use the grid's cumulative neighbourhood mass; other costs go through the
  full distance kernel.
  """
  grid = post.grid
  if isinstance(cost, SquaredDistance):
    mean = post.mass @ grid.points
    centered = grid.points - mean
    spread = float(post.mass @ (centered ** 2).sum(axis=1))
    return (centered ** 2).sum(axis=1) + spread
  if isinstance(cost, WithinRadius):
    return 1.0 - grid.mass_within(post.mass, cost.radius)[:, 0]
  return grid.kernel_expectation(post.mass, cost)


def argmin_with_ties(costs: NDArray[np.float64], tol: float = TIE_TOL) -> tuple[int, NDArray[np.intp]]:
  """First index of the minimum and every index within tolerance of it."""
  best = float(costs.min())
  ties = np.flatnonzero(costs <= best + tol * max(abs(best), 1.0))
  return int(ties[0]), ties


def estimate(post: DensityGrid, cost: CostFunction, tol: float = TIE_TOL, algorithm: str = "") -> Estimate:
  """
  Grid point minimizing the posterior expected cost.

  Args:
      post (DensityGrid): Normalized posterior.
      cost (CostFunction): Distance-error cost.
      tol (float): Relative tie tolerance.
      algorithm (str): Name recorded on the estimate.

  Returns:
      Estimate: First minimizer in grid order, with its tie set.
  """
  costs = expected_costs(post, cost)
  index, ties = argmin_with_ties(costs, tol)
  grid = post.grid
  return Estimate(
    location=grid.location(index),
    expected_cost=float(costs[index]),
    tie_set=tuple(grid.locations(ties)),
    algorithm=algorithm
  )
